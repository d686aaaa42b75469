#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "amencert/guards.hpp"
#include "amencert/rational.hpp"

namespace amencert {

// Letters of F_k are encoded +i / -i for i in 1..k. The canonical letter order
// is a < A < b < B < ... ; boundary words are reduced letter sequences.

int letter_rank(std::int8_t l);                 // position in canonical order
std::int8_t letter_from_rank(int r);            // inverse of letter_rank
std::string letters_to_string(const std::vector<std::int8_t>& w);
std::vector<std::int8_t> letters_from_string(const std::string& text, int rank);

/// Smallest letter that does not cancel `prev` (prev = 0 means "no previous").
std::int8_t canonical_next_letter(std::int8_t prev);

/// Cylinder cells denote boundary points: the word followed by the canonical
/// completion. Trailing letters that agree with the completion are stripped,
/// making the word form unique per point.
std::vector<std::int8_t> normalize_cylinder_cell(std::vector<std::int8_t> w);

/// Locally constant function on the boundary of F_k, stored as a prefix tree.
/// A node reached by letter l has one child per non-cancelling letter; leaves
/// carry values. Canonical: a node whose children are all equal leaves is
/// collapsed, so equal functions have identical trees.
template <typename S>
class CylinderFn {
public:
    struct Node {
        bool leaf = true;
        S value{};
        std::vector<Node> kids;  // ordered by letter_rank, excluded inverse skipped

        bool operator==(const Node& o) const {
            if (leaf != o.leaf) return false;
            if (leaf) return value == o.value;
            return kids == o.kids;
        }
    };

    CylinderFn() : rank_(0) { root_.leaf = true; root_.value = S{}; }
    explicit CylinderFn(int rank, S constant = S{}) : rank_(rank) {
        root_.leaf = true;
        root_.value = constant;
    }

    int rank() const { return rank_; }

    static CylinderFn constant(int rank, S v) { return CylinderFn(rank, v); }

    /// Indicator of the cylinder of a nonempty reduced word (1 inside, 0 out).
    static CylinderFn indicator(int rank, const std::vector<std::int8_t>& word) {
        CylinderFn f(rank, S{});
        if (word.empty()) {
            f.root_.value = ScalarTraits<S>::one();
            return f;
        }
        check_depth_cap(static_cast<int>(word.size()));
        f.root_ = build_path(rank, word, 0, 0);
        return f;
    }

    S value_at_cell(const std::vector<std::int8_t>& word) const {
        const Node* n = &root_;
        std::int8_t prev = 0;
        std::size_t i = 0;
        while (!n->leaf) {
            std::int8_t l = i < word.size() ? word[i] : canonical_next_letter(prev);
            n = &child(*n, prev, l);
            prev = l;
            ++i;
        }
        return n->value;
    }

    bool is_constant(S* out = nullptr) const {
        if (!root_.leaf) return false;
        if (out) *out = root_.value;
        return true;
    }

    bool is_zero() const { return root_.leaf && root_.value == S{}; }

    int depth() const { return node_depth(root_); }

    template <typename Op>
    static CylinderFn combine(const CylinderFn& a, const CylinderFn& b, Op op) {
        CylinderFn out(a.rank_);
        out.root_ = combine_nodes(a.rank_, a.root_, b.root_, op, 0, 0);
        return out;
    }

    template <typename Op>
    CylinderFn map(Op op) const {
        CylinderFn out(rank_);
        out.root_ = map_node(root_, op);
        return out;
    }

    /// s * f with s a single letter: (s*f)(w) = f(s^{-1} w).
    CylinderFn translate_letter(std::int8_t s) const {
        CylinderFn out(rank_);
        Node root;
        root.leaf = false;
        for (int r = 0; r < 2 * rank_; ++r) {
            std::int8_t m = letter_from_rank(r);
            if (m == s) {
                // subtree on Cyl(s): values of f outside Cyl(s^{-1})
                Node sub;
                sub.leaf = false;
                if (root_.leaf) {
                    sub = root_;
                } else {
                    for (int r2 = 0; r2 < 2 * rank_; ++r2) {
                        std::int8_t c = letter_from_rank(r2);
                        if (c == static_cast<std::int8_t>(-s)) continue;
                        sub.kids.push_back(child(root_, 0, c));
                    }
                    collapse(sub);
                }
                root.kids.push_back(std::move(sub));
            } else {
                // w = m..., f(s^{-1} m ...): descend s^{-1} then m
                const Node& after = child_or_self(root_, 0, static_cast<std::int8_t>(-s));
                root.kids.push_back(child_or_self(after, static_cast<std::int8_t>(-s), m));
            }
        }
        collapse(root);
        out.root_ = std::move(root);
        check_depth_cap(out.depth());
        return out;
    }

    /// Calls cb once per atom of the joint partition with all function values.
    static void for_each_atom(const std::vector<const CylinderFn*>& fns,
                              const std::function<void(const std::vector<S>&)>& cb) {
        if (fns.empty()) return;
        int rank = fns[0]->rank_;
        std::vector<const Node*> nodes;
        nodes.reserve(fns.size());
        for (auto* f : fns) nodes.push_back(&f->root_);
        std::vector<S> vals(fns.size());
        atom_walk(rank, nodes, 0, vals, cb, 0);
    }

    /// Dense table of values on all reduced words of length d (lex order).
    std::vector<std::pair<std::vector<std::int8_t>, S>> to_table(int d) const {
        check_depth_cap(d);
        std::size_t count = 1;
        for (int i = 0; i < d; ++i) count *= (i == 0 ? 2 * rank_ : 2 * rank_ - 1);
        if (count > 4'000'000) throw GuardError("cylinder table too large");
        std::vector<std::pair<std::vector<std::int8_t>, S>> out;
        std::vector<std::int8_t> w;
        table_walk(root_, 0, d, w, out);
        return out;
    }

    bool operator==(const CylinderFn& o) const { return rank_ == o.rank_ && root_ == o.root_; }

private:
    int rank_;
    Node root_;

    static Node build_path(int rank, const std::vector<std::int8_t>& word, std::size_t i,
                           std::int8_t prev) {
        if (i == word.size()) {
            Node leaf;
            leaf.leaf = true;
            leaf.value = ScalarTraits<S>::one();
            return leaf;
        }
        Node n;
        n.leaf = false;
        for (int r = 0; r < 2 * rank; ++r) {
            std::int8_t l = letter_from_rank(r);
            if (prev != 0 && l == static_cast<std::int8_t>(-prev)) continue;
            if (l == word[i]) {
                n.kids.push_back(build_path(rank, word, i + 1, l));
            } else {
                Node z;
                z.leaf = true;
                z.value = S{};
                n.kids.push_back(std::move(z));
            }
        }
        return n;
    }

    static int kid_slot(std::int8_t prev, std::int8_t l) {
        // index of letter l among the letters allowed after prev
        int idx = 0;
        for (int r = 0; r < 64; ++r) {
            std::int8_t c = letter_from_rank(r);
            if (prev != 0 && c == static_cast<std::int8_t>(-prev)) continue;
            if (c == l) return idx;
            ++idx;
        }
        throw SpecError("letter not allowed at this node");
    }

    static const Node& child(const Node& n, std::int8_t prev, std::int8_t l) {
        return n.kids[kid_slot(prev, l)];
    }

    // child when internal; the node itself when it is a leaf (constant region)
    static const Node& child_or_self(const Node& n, std::int8_t prev, std::int8_t l) {
        if (n.leaf) return n;
        return child(n, prev, l);
    }

    static void collapse(Node& n) {
        if (n.leaf) return;
        for (auto& k : n.kids) collapse(k);
        for (const auto& k : n.kids)
            if (!k.leaf || !(k.value == n.kids[0].value)) return;
        S v = n.kids[0].value;
        n.kids.clear();
        n.leaf = true;
        n.value = v;
    }

    template <typename Op>
    static Node combine_nodes(int rank, const Node& a, const Node& b, Op op, std::int8_t prev,
                              int depth) {
        check_depth_cap(depth);
        if (a.leaf && b.leaf) {
            Node n;
            n.leaf = true;
            n.value = op(a.value, b.value);
            return n;
        }
        Node n;
        n.leaf = false;
        int idx = 0;
        for (int r = 0; r < 2 * rank; ++r) {
            std::int8_t l = letter_from_rank(r);
            if (prev != 0 && l == static_cast<std::int8_t>(-prev)) continue;
            const Node& ca = a.leaf ? a : a.kids[idx];
            const Node& cb = b.leaf ? b : b.kids[idx];
            n.kids.push_back(combine_nodes(rank, ca, cb, op, l, depth + 1));
            ++idx;
        }
        collapse(n);
        return n;
    }

    template <typename Op>
    static Node map_node(const Node& a, Op op) {
        Node n;
        n.leaf = a.leaf;
        if (a.leaf) {
            n.value = op(a.value);
            return n;
        }
        for (const auto& k : a.kids) n.kids.push_back(map_node(k, op));
        collapse(n);
        return n;
    }

    static int node_depth(const Node& n) {
        if (n.leaf) return 0;
        int d = 0;
        for (const auto& k : n.kids) d = std::max(d, node_depth(k));
        return d + 1;
    }

    static void atom_walk(int rank, const std::vector<const Node*>& nodes, std::int8_t prev,
                          std::vector<S>& vals, const std::function<void(const std::vector<S>&)>& cb,
                          int depth) {
        check_depth_cap(depth);
        bool all_leaf = true;
        for (auto* n : nodes)
            if (!n->leaf) { all_leaf = false; break; }
        if (all_leaf) {
            for (std::size_t i = 0; i < nodes.size(); ++i) vals[i] = nodes[i]->value;
            cb(vals);
            return;
        }
        int idx = 0;
        for (int r = 0; r < 2 * rank; ++r) {
            std::int8_t l = letter_from_rank(r);
            if (prev != 0 && l == static_cast<std::int8_t>(-prev)) continue;
            std::vector<const Node*> next;
            next.reserve(nodes.size());
            for (auto* n : nodes) next.push_back(n->leaf ? n : &n->kids[idx]);
            atom_walk(rank, next, l, vals, cb, depth + 1);
            ++idx;
        }
    }

    void table_walk(const Node& n, std::int8_t prev, int remaining, std::vector<std::int8_t>& w,
                    std::vector<std::pair<std::vector<std::int8_t>, S>>& out) const {
        if (remaining == 0) {
            const Node* cur = &n;
            std::int8_t p = prev;
            while (!cur->leaf) {  // deeper structure: value at the canonical point
                std::int8_t l = canonical_next_letter(p);
                cur = &child(*cur, p, l);
                p = l;
            }
            out.emplace_back(w, cur->value);
            return;
        }
        for (int r = 0; r < 2 * rank_; ++r) {
            std::int8_t l = letter_from_rank(r);
            if (prev != 0 && l == static_cast<std::int8_t>(-prev)) continue;
            w.push_back(l);
            table_walk(n.leaf ? n : child(n, prev, l), l, remaining - 1, w, out);
            w.pop_back();
        }
    }
};

}  // namespace amencert
