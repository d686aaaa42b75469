#pragma once

#include <map>
#include <optional>
#include <tuple>
#include <vector>

#include "amencert/space.hpp"

namespace amencert {

/// Finitely supported element of C(X, l1(G)): a family of space functions
/// indexed by group elements. Entries are distinct, nonzero, and sorted in
/// ball order (word length, then lex canonical form).
template <typename S>
class Chain {
public:
    struct Entry {
        GroupElement g;
        int length = 0;
        SpaceFn<S> fn;
    };

    Chain(Group group, CompactSpace space)
        : group_(std::move(group)), space_(std::move(space)) {}

    static Chain from_entries(const Group& group, const CompactSpace& space,
                              std::vector<std::pair<GroupElement, SpaceFn<S>>> raw) {
        Chain c(group, space);
        for (auto& [g, fn] : raw) c.add_term(g, std::move(fn));
        return c;
    }

    const Group& group() const { return group_; }
    const CompactSpace& space() const { return space_; }
    const std::vector<Entry>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }

    /// Adds v at g, merging with an existing entry and pruning zeros.
    void add_term(const GroupElement& g, SpaceFn<S> fn) {
        if (fn.is_zero()) return;
        int len = group_.word_length(g);
        auto it = lower_bound(g, len);
        if (it != entries_.end() && it->g == g) {
            it->fn = add(it->fn, fn);
            if (it->fn.is_zero()) entries_.erase(it);
        } else {
            entries_.insert(it, Entry{g, len, std::move(fn)});
        }
    }

    const SpaceFn<S>* find(const GroupElement& g) const {
        int len = group_.word_length(g);
        auto it = const_cast<Chain*>(this)->lower_bound(g, len);
        if (it != entries_.end() && it->g == g) return &it->fn;
        return nullptr;
    }

    SpaceFn<S> at(const GroupElement& g) const {
        const SpaceFn<S>* f = find(g);
        return f ? *f : SpaceFn<S>::zero(space_);
    }

    bool operator==(const Chain& o) const {
        if (entries_.size() != o.entries_.size()) return false;
        for (std::size_t i = 0; i < entries_.size(); ++i)
            if (entries_[i].g != o.entries_[i].g || entries_[i].fn != o.entries_[i].fn)
                return false;
        return true;
    }
    bool operator!=(const Chain& o) const { return !(*this == o); }

private:
    Group group_;
    CompactSpace space_;
    std::vector<Entry> entries_;

    typename std::vector<Entry>::iterator lower_bound(const GroupElement& g, int len) {
        return std::lower_bound(entries_.begin(), entries_.end(), std::make_pair(len, &g),
                                [](const Entry& e, const std::pair<int, const GroupElement*>& k) {
                                    if (e.length != k.first) return e.length < k.first;
                                    return e.g.lex_less(*k.second);
                                });
    }
};

/// sigma(xi) = sum_g xi_g, pointwise on X.
template <typename S>
SpaceFn<S> sigma(const Chain<S>& xi) {
    SpaceFn<S> acc = SpaceFn<S>::zero(xi.space());
    for (const auto& e : xi.entries()) acc = add(acc, e.fn);
    return acc;
}

template <typename S>
struct W0Report {
    bool member = false;
    S value{};   // constant value of sigma when member
    S spread{};  // max - min of sigma (0 when member in exact mode)
};

/// Membership in W0 = sigma^{-1}(constants); exact when tol = 0.
template <typename S>
W0Report<S> is_w0(const Chain<S>& xi, const S& tol = S{}) {
    W0Report<S> rep;
    SpaceFn<S> s = sigma(xi);
    rep.member = is_constant_fn(s, tol, &rep.value, &rep.spread);
    return rep;
}

/// (g . xi)_h = g * xi_{g^{-1} h}: support relabeled by left multiplication,
/// each function translated.
template <typename S>
Chain<S> act_chain(const GroupElement& g, const Chain<S>& xi) {
    Chain<S> out(xi.group(), xi.space());
    for (const auto& e : xi.entries())
        out.add_term(xi.group().multiply(g, e.g), translate(xi.space(), g, e.fn));
    return out;
}

template <typename S>
Chain<S> chain_add(const Chain<S>& a, const Chain<S>& b) {
    Chain<S> out = a;
    for (const auto& e : b.entries()) out.add_term(e.g, e.fn);
    return out;
}

template <typename S>
Chain<S> chain_scale(const Chain<S>& a, const S& c) {
    Chain<S> out(a.group(), a.space());
    if (c == S{}) return out;
    for (const auto& e : a.entries()) out.add_term(e.g, scale(e.fn, c));
    return out;
}

template <typename S>
Chain<S> chain_sub(const Chain<S>& a, const Chain<S>& b) {
    S minus_one = ScalarTraits<S>::zero() - ScalarTraits<S>::one();
    return chain_add(a, chain_scale(b, minus_one));
}

/// One chain per generator: (delta xi)_s = xi - s.xi.
template <typename S>
struct CoboundaryImage {
    std::vector<Chain<S>> components;  // indexed in S order
};

template <typename S>
CoboundaryImage<S> coboundary(const Chain<S>& xi) {
    CoboundaryImage<S> img;
    for (const auto& s : xi.group().generators())
        img.components.push_back(chain_sub(xi, act_chain(s, xi)));
    return img;
}

/// sup-l1 norm: sup over x of sum_g |xi_g(x)|.
template <typename S>
S chain_norm(const Chain<S>& xi) {
    if (xi.empty()) return S{};
    std::vector<const SpaceFn<S>*> fns;
    fns.reserve(xi.entries().size());
    for (const auto& e : xi.entries()) fns.push_back(&e.fn);
    S best{};
    for_each_atom<S>(fns, [&best](const std::vector<S>& vals) {
        S sum{};
        for (const S& v : vals) sum = sum + ScalarTraits<S>::abs(v);
        if (best < sum) best = sum;
    });
    return best;
}

/// max_s ||xi - s.xi||.
template <typename S>
S chain_defect(const Chain<S>& xi) {
    S best{};
    for (const auto& s : xi.group().generators()) {
        S n = chain_norm(chain_sub(xi, act_chain(s, xi)));
        if (best < n) best = n;
    }
    return best;
}

/// xi'_g = |xi_g| / sigma(|xi|), defined when sigma(xi) is constant 1.
template <typename S>
Chain<S> normalize_chain(const Chain<S>& xi, const S& tol = S{}) {
    auto rep = is_w0(xi, tol);
    if (!rep.member || ScalarTraits<S>::abs(rep.value - ScalarTraits<S>::one()) > tol)
        throw SpecError("normalize_chain requires a W0 chain with sigma value 1");
    Chain<S> absd(xi.group(), xi.space());
    for (const auto& e : xi.entries()) absd.add_term(e.g, abs_fn(e.fn));
    SpaceFn<S> denom = sigma(absd);
    Chain<S> out(xi.group(), xi.space());
    for (const auto& e : absd.entries())
        out.add_term(e.g, combine(e.fn, denom, [](const S& a, const S& b) -> S { return S(a / b); }));
    return out;
}

// ---------------------------------------------------------------------------
// Dual functionals

enum class DualTag { Coefficients, Sigma, Evaluation };

/// Finitely supported representative of an element of W0(G,X)*: coefficients
/// over (group element, cell) pairs, or the sigma functional itself (which
/// pairs through the W0 value, not through coefficients).
template <typename S>
class DualFunctional {
public:
    using Triple = std::tuple<GroupElement, Cell, S>;

    DualFunctional(Group group, CompactSpace space, DualTag tag = DualTag::Coefficients)
        : group_(std::move(group)), space_(std::move(space)), tag_(tag) {
        if (tag_ == DualTag::Sigma && !coeffs_.empty())
            throw SpecError("sigma functional carries no coefficients");
    }

    static DualFunctional sigma_functional(const Group& g, const CompactSpace& sp) {
        return DualFunctional(g, sp, DualTag::Sigma);
    }

    /// ev_{g, cell}: point evaluation of the g coordinate.
    static DualFunctional evaluation(const Group& g, const CompactSpace& sp,
                                     const GroupElement& at, const Cell& cell) {
        DualFunctional f(g, sp, DualTag::Evaluation);
        f.add_term(at, cell, ScalarTraits<S>::one());
        return f;
    }

    const Group& group() const { return group_; }
    const CompactSpace& space() const { return space_; }
    DualTag tag() const { return tag_; }
    const std::vector<Triple>& coefficients() const { return coeffs_; }
    bool is_zero() const { return tag_ != DualTag::Sigma && coeffs_.empty(); }

    void add_term(const GroupElement& g, const Cell& cell, S v) {
        if (tag_ == DualTag::Sigma) throw SpecError("sigma functional carries no coefficients");
        if (v == S{}) return;
        auto it = std::lower_bound(coeffs_.begin(), coeffs_.end(), std::make_pair(&g, &cell),
                                   [](const Triple& t, const std::pair<const GroupElement*,
                                                                       const Cell*>& k) {
                                       if (std::get<0>(t) != *k.first)
                                           return std::get<0>(t).lex_less(*k.first);
                                       return std::get<1>(t).less(*k.second);
                                   });
        if (it != coeffs_.end() && std::get<0>(*it) == g && std::get<1>(*it) == cell) {
            std::get<2>(*it) = std::get<2>(*it) + v;
            if (std::get<2>(*it) == S{}) coeffs_.erase(it);
        } else {
            coeffs_.insert(it, Triple{g, cell, std::move(v)});
        }
    }

    bool operator==(const DualFunctional& o) const {
        return tag_ == o.tag_ && coeffs_ == o.coeffs_;
    }

private:
    Group group_;
    CompactSpace space_;
    DualTag tag_;
    std::vector<Triple> coeffs_;
};

/// Bilinear evaluation. The sigma functional returns the W0 value and rejects
/// non-members; coefficient functionals sum coefficient * value.
template <typename S>
S pair(const DualFunctional<S>& phi, const Chain<S>& xi, const S& tol = S{}) {
    if (phi.tag() == DualTag::Sigma) {
        auto rep = is_w0(xi, tol);
        if (!rep.member) throw SpecError("pairing sigma with a chain outside W0");
        return rep.value;
    }
    S acc{};
    for (const auto& [g, cell, v] : phi.coefficients()) {
        const SpaceFn<S>* fn = xi.find(g);
        if (fn) acc = acc + v * fn->evaluate(cell);
    }
    return acc;
}

/// Dual norm of a coefficient functional on the sup-l1 chain space: cells are
/// independent columns, so the norm is sum over distinct cells of max_g |c|.
/// ||sigma|| = 1.
template <typename S>
S dual_norm(const DualFunctional<S>& phi) {
    if (phi.tag() == DualTag::Sigma) return ScalarTraits<S>::one();
    std::vector<std::pair<Cell, S>> best;  // cell -> max abs coefficient
    for (const auto& [g, cell, v] : phi.coefficients()) {
        S a = ScalarTraits<S>::abs(v);
        bool found = false;
        for (auto& [c, m] : best) {
            if (c == cell) {
                if (m < a) m = a;
                found = true;
                break;
            }
        }
        if (!found) best.emplace_back(cell, a);
    }
    S sum{};
    for (const auto& [c, m] : best) sum = sum + m;
    return sum;
}

/// (g . phi)(xi) = phi(g^{-1} xi): coefficients move by (a, c) -> (g a, g c).
template <typename S>
DualFunctional<S> act_dual(const GroupElement& g, const DualFunctional<S>& phi) {
    if (phi.tag() == DualTag::Sigma) return phi;  // sigma is invariant
    DualFunctional<S> out(phi.group(), phi.space());
    for (const auto& [a, c, v] : phi.coefficients())
        out.add_term(phi.group().multiply(g, a), act_cell(phi.space(), g, c), v);
    return out;
}

/// delta* psi = sum_s (psi_s - s^{-1}.psi_s) as a coefficient functional:
/// value at (g, x) is sum_s [psi_s(g, x) - psi_s(s g, s x)].
template <typename S>
DualFunctional<S> adjoint_coboundary(const std::vector<DualFunctional<S>>& psi) {
    if (psi.empty()) throw SpecError("adjoint_coboundary needs one functional per generator");
    const Group& g = psi[0].group();
    const CompactSpace& sp = psi[0].space();
    if (psi.size() != g.generators().size())
        throw SpecError("adjoint_coboundary needs one functional per generator");
    DualFunctional<S> out(g, sp);
    for (std::size_t si = 0; si < psi.size(); ++si) {
        if (psi[si].tag() == DualTag::Sigma)
            throw SpecError("adjoint_coboundary components must be coefficient functionals");
        const auto& s = g.generators()[si];
        const auto s_inv = g.inverse(s);
        for (const auto& [a, c, v] : psi[si].coefficients()) {
            out.add_term(a, c, v);
            out.add_term(g.multiply(s_inv, a), act_cell(sp, s_inv, c), S(S{} - v));
        }
    }
    return out;
}

}  // namespace amencert
