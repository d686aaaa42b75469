#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "amencert/cylinder.hpp"
#include "amencert/group.hpp"
#include "amencert/rational.hpp"

namespace amencert {

enum class SpaceKind { Point, Finite, OnePoint, FreeBoundary };

struct ElementLexLess {
    bool operator()(const GroupElement& a, const GroupElement& b) const { return a.lex_less(b); }
};

/// Compact G-space at desk scale. Finite spaces carry one permutation per
/// generator (inverses derived); OnePoint is G together with a fixed point at
/// infinity; FreeBoundary is the cylinder algebra on the boundary of F_k.
class CompactSpace {
public:
    static CompactSpace point(const Group& g);
    static CompactSpace one_point(const Group& g);
    static CompactSpace free_boundary(const Group& g);
    static CompactSpace finite(const Group& g,
                               std::vector<std::vector<std::uint8_t>> positive_gen_perms);

    /// Descriptor grammar: point | onepoint | boundary |
    ///   finite:<gen><arrow><cycles>;...   with <arrow> one of "->", "↦".
    static CompactSpace parse(const Group& g, const std::string& spec);

    SpaceKind kind() const;
    const Group& group() const;
    const std::string& spec() const;

    std::size_t finite_size() const;   // Finite only
    int boundary_rank() const;         // FreeBoundary only

    /// Action of an arbitrary group element on a Finite-space point.
    std::size_t act_point(const GroupElement& g, std::size_t x) const;
    std::vector<std::uint8_t> permutation_of(const GroupElement& g) const;

    bool operator==(const CompactSpace& o) const;

private:
    struct Data;
    std::shared_ptr<const Data> d_;
    explicit CompactSpace(std::shared_ptr<const Data> d) : d_(std::move(d)) {}
};

/// A cell addresses the value of a space function: the unique point of a
/// Point space, an index of a Finite space, a group point or infinity of a
/// OnePoint space, or a cylinder word denoting its canonical boundary point.
struct Cell {
    enum class Kind { Unit, FinitePoint, GroupPoint, Infinity, Cylinder };
    Kind kind = Kind::Unit;
    std::size_t index = 0;
    GroupElement point;
    std::vector<std::int8_t> word;

    static Cell unit() { return {}; }
    static Cell finite_point(std::size_t i) {
        Cell c;
        c.kind = Kind::FinitePoint;
        c.index = i;
        return c;
    }
    static Cell group_point(GroupElement g) {
        Cell c;
        c.kind = Kind::GroupPoint;
        c.point = std::move(g);
        return c;
    }
    static Cell infinity() {
        Cell c;
        c.kind = Kind::Infinity;
        return c;
    }
    static Cell cylinder(std::vector<std::int8_t> w) {
        Cell c;
        c.kind = Kind::Cylinder;
        c.word = normalize_cylinder_cell(std::move(w));
        return c;
    }

    bool operator==(const Cell& o) const {
        if (kind != o.kind) return false;
        switch (kind) {
            case Kind::Unit:
            case Kind::Infinity: return true;
            case Kind::FinitePoint: return index == o.index;
            case Kind::GroupPoint: return point == o.point;
            case Kind::Cylinder: return word == o.word;
        }
        return false;
    }
    bool operator!=(const Cell& o) const { return !(*this == o); }

    bool less(const Cell& o) const {
        if (kind != o.kind) return static_cast<int>(kind) < static_cast<int>(o.kind);
        switch (kind) {
            case Kind::Unit:
            case Kind::Infinity: return false;
            case Kind::FinitePoint: return index < o.index;
            case Kind::GroupPoint: return point.lex_less(o.point);
            case Kind::Cylinder: {
                if (word.size() != o.word.size()) return word.size() < o.word.size();
                for (std::size_t i = 0; i < word.size(); ++i)
                    if (word[i] != o.word[i]) return letter_rank(word[i]) < letter_rank(o.word[i]);
                return false;
            }
        }
        return false;
    }
};

/// g . cell under the space's action (infinity is fixed; cylinder cells map to
/// the cell of the translated boundary point).
Cell act_cell(const CompactSpace& space, const GroupElement& g, const Cell& cell);

std::string cell_to_string(const CompactSpace& space, const Cell& cell);
Cell cell_from_string(const CompactSpace& space, const std::string& text);

/// A continuous function on a compact space, in the finite representation the
/// space supports: a scalar, a dense vector, finite support plus a tail value,
/// or a locally constant cylinder function.
template <typename S>
struct SpaceFn {
    SpaceKind kind = SpaceKind::Point;
    S scalar{};
    std::vector<S> values;                          // Finite
    std::map<GroupElement, S, ElementLexLess> support;  // OnePoint
    S tail{};                                       // OnePoint
    CylinderFn<S> cyl;                              // FreeBoundary

    static SpaceFn point(S v) {
        SpaceFn f;
        f.kind = SpaceKind::Point;
        f.scalar = std::move(v);
        return f;
    }
    static SpaceFn finite(std::vector<S> vals) {
        SpaceFn f;
        f.kind = SpaceKind::Finite;
        f.values = std::move(vals);
        return f;
    }
    static SpaceFn one_point(std::map<GroupElement, S, ElementLexLess> sup, S tail_value) {
        SpaceFn f;
        f.kind = SpaceKind::OnePoint;
        f.support = std::move(sup);
        f.tail = std::move(tail_value);
        f.prune();
        return f;
    }
    static SpaceFn boundary(CylinderFn<S> c) {
        SpaceFn f;
        f.kind = SpaceKind::FreeBoundary;
        f.cyl = std::move(c);
        return f;
    }

    static SpaceFn constant(const CompactSpace& sp, S v);
    static SpaceFn zero(const CompactSpace& sp) { return constant(sp, S{}); }

    /// Drops support entries equal to the tail (the tail value is never
    /// stored redundantly).
    void prune() {
        if (kind != SpaceKind::OnePoint) return;
        for (auto it = support.begin(); it != support.end();) {
            if (it->second == tail)
                it = support.erase(it);
            else
                ++it;
        }
    }

    bool is_zero() const {
        switch (kind) {
            case SpaceKind::Point: return scalar == S{};
            case SpaceKind::Finite:
                return std::all_of(values.begin(), values.end(),
                                   [](const S& v) { return v == S{}; });
            case SpaceKind::OnePoint: return support.empty() && tail == S{};
            case SpaceKind::FreeBoundary: return cyl.is_zero();
        }
        return false;
    }

    /// OnePoint lookup with tail fallback.
    S at_point(const GroupElement& k) const {
        auto it = support.find(k);
        return it == support.end() ? tail : it->second;
    }

    S evaluate(const Cell& cell) const {
        switch (kind) {
            case SpaceKind::Point: return scalar;
            case SpaceKind::Finite:
                if (cell.kind != Cell::Kind::FinitePoint || cell.index >= values.size())
                    throw SpecError("cell does not address this finite space");
                return values[cell.index];
            case SpaceKind::OnePoint: {
                if (cell.kind == Cell::Kind::Infinity) return tail;
                if (cell.kind != Cell::Kind::GroupPoint)
                    throw SpecError("cell does not address a one-point compactification");
                auto it = support.find(cell.point);
                return it == support.end() ? tail : it->second;
            }
            case SpaceKind::FreeBoundary:
                if (cell.kind != Cell::Kind::Cylinder)
                    throw SpecError("cell does not address the boundary");
                return cyl.value_at_cell(cell.word);
        }
        throw SpecError("unreachable");
    }

    bool operator==(const SpaceFn& o) const {
        if (kind != o.kind) return false;
        switch (kind) {
            case SpaceKind::Point: return scalar == o.scalar;
            case SpaceKind::Finite: return values == o.values;
            case SpaceKind::OnePoint: return support == o.support && tail == o.tail;
            case SpaceKind::FreeBoundary: return cyl == o.cyl;
        }
        return false;
    }
    bool operator!=(const SpaceFn& o) const { return !(*this == o); }
};

template <typename S>
SpaceFn<S> SpaceFn<S>::constant(const CompactSpace& sp, S v) {
    switch (sp.kind()) {
        case SpaceKind::Point: return point(std::move(v));
        case SpaceKind::Finite: return finite(std::vector<S>(sp.finite_size(), v));
        case SpaceKind::OnePoint: return one_point({}, std::move(v));
        case SpaceKind::FreeBoundary:
            return boundary(CylinderFn<S>::constant(sp.boundary_rank(), std::move(v)));
    }
    throw SpecError("unreachable");
}

template <typename S, typename Op>
SpaceFn<S> combine(const SpaceFn<S>& a, const SpaceFn<S>& b, Op op) {
    if (a.kind != b.kind) throw SpecError("space mismatch in function arithmetic");
    switch (a.kind) {
        case SpaceKind::Point: return SpaceFn<S>::point(op(a.scalar, b.scalar));
        case SpaceKind::Finite: {
            if (a.values.size() != b.values.size())
                throw SpecError("space mismatch in function arithmetic");
            std::vector<S> vals(a.values.size());
            for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = op(a.values[i], b.values[i]);
            return SpaceFn<S>::finite(std::move(vals));
        }
        case SpaceKind::OnePoint: {
            std::map<GroupElement, S, ElementLexLess> sup;
            for (const auto& [k, v] : a.support) sup.emplace(k, op(v, b.at_point(k)));
            for (const auto& [k, v] : b.support)
                if (!a.support.count(k)) sup.emplace(k, op(a.tail, v));
            return SpaceFn<S>::one_point(std::move(sup), op(a.tail, b.tail));
        }
        case SpaceKind::FreeBoundary:
            return SpaceFn<S>::boundary(CylinderFn<S>::combine(a.cyl, b.cyl, op));
    }
    throw SpecError("unreachable");
}

template <typename S, typename Op>
SpaceFn<S> map_fn(const SpaceFn<S>& a, Op op) {
    switch (a.kind) {
        case SpaceKind::Point: return SpaceFn<S>::point(op(a.scalar));
        case SpaceKind::Finite: {
            std::vector<S> vals(a.values.size());
            for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = op(a.values[i]);
            return SpaceFn<S>::finite(std::move(vals));
        }
        case SpaceKind::OnePoint: {
            std::map<GroupElement, S, ElementLexLess> sup;
            for (const auto& [k, v] : a.support) sup.emplace(k, op(v));
            return SpaceFn<S>::one_point(std::move(sup), op(a.tail));
        }
        case SpaceKind::FreeBoundary: return SpaceFn<S>::boundary(a.cyl.map(op));
    }
    throw SpecError("unreachable");
}

template <typename S>
SpaceFn<S> add(const SpaceFn<S>& a, const SpaceFn<S>& b) {
    return combine(a, b, [](const S& x, const S& y) -> S { return S(x + y); });
}
template <typename S>
SpaceFn<S> sub(const SpaceFn<S>& a, const SpaceFn<S>& b) {
    return combine(a, b, [](const S& x, const S& y) -> S { return S(x - y); });
}
template <typename S>
SpaceFn<S> scale(const SpaceFn<S>& a, const S& c) {
    return map_fn(a, [&c](const S& x) -> S { return S(x * c); });
}
template <typename S>
SpaceFn<S> abs_fn(const SpaceFn<S>& a) {
    return map_fn(a, [](const S& x) { return ScalarTraits<S>::abs(x); });
}

/// Calls cb once per atom of the joint partition of all given functions,
/// with the function values on that atom. All functions must share a kind.
template <typename S>
void for_each_atom(const std::vector<const SpaceFn<S>*>& fns,
                   const std::function<void(const std::vector<S>&)>& cb) {
    if (fns.empty()) return;
    SpaceKind kind = fns[0]->kind;
    for (auto* f : fns)
        if (f->kind != kind) throw SpecError("space mismatch in atom iteration");
    std::vector<S> vals(fns.size());
    switch (kind) {
        case SpaceKind::Point: {
            for (std::size_t i = 0; i < fns.size(); ++i) vals[i] = fns[i]->scalar;
            cb(vals);
            return;
        }
        case SpaceKind::Finite: {
            std::size_t m = fns[0]->values.size();
            for (std::size_t x = 0; x < m; ++x) {
                for (std::size_t i = 0; i < fns.size(); ++i) vals[i] = fns[i]->values[x];
                cb(vals);
            }
            return;
        }
        case SpaceKind::OnePoint: {
            std::map<GroupElement, bool, ElementLexLess> keys;
            for (auto* f : fns)
                for (const auto& [k, v] : f->support) keys.emplace(k, true);
            for (const auto& [k, unused] : keys) {
                for (std::size_t i = 0; i < fns.size(); ++i) {
                    auto it = fns[i]->support.find(k);
                    vals[i] = it == fns[i]->support.end() ? fns[i]->tail : it->second;
                }
                cb(vals);
            }
            for (std::size_t i = 0; i < fns.size(); ++i) vals[i] = fns[i]->tail;
            cb(vals);  // the tail class: every unlisted point and infinity
            return;
        }
        case SpaceKind::FreeBoundary: {
            std::vector<const CylinderFn<S>*> cs;
            cs.reserve(fns.size());
            for (auto* f : fns) cs.push_back(&f->cyl);
            CylinderFn<S>::for_each_atom(cs, cb);
            return;
        }
    }
}

/// Max of |f| over the space.
template <typename S>
S linf_norm(const SpaceFn<S>& f) {
    S best{};
    for_each_atom<S>({&f}, [&best](const std::vector<S>& v) {
        S a = ScalarTraits<S>::abs(v[0]);
        if (best < a) best = a;
    });
    return best;
}

/// Constancy within tol (exact when tol = 0); reports max - min and the value
/// on the lexicographically first atom.
template <typename S>
bool is_constant_fn(const SpaceFn<S>& f, const S& tol, S* value_out = nullptr, S* spread_out = nullptr) {
    bool first = true;
    S lo{}, hi{}, first_val{};
    for_each_atom<S>({&f}, [&](const std::vector<S>& v) {
        if (first) {
            lo = hi = first_val = v[0];
            first = false;
        } else {
            if (v[0] < lo) lo = v[0];
            if (hi < v[0]) hi = v[0];
        }
    });
    if (value_out) *value_out = first_val;
    if (spread_out) *spread_out = hi - lo;
    return hi - lo <= tol;
}

/// g * f with (g*f)(x) = f(g^{-1} x).
template <typename S>
SpaceFn<S> translate(const CompactSpace& space, const GroupElement& g, const SpaceFn<S>& f) {
    if (g.family() != space.group().family()) throw SpecError("family mismatch in translate");
    switch (space.kind()) {
        case SpaceKind::Point:
            if (f.kind != SpaceKind::Point) throw SpecError("function/space mismatch");
            return f;
        case SpaceKind::Finite: {
            if (f.kind != SpaceKind::Finite || f.values.size() != space.finite_size())
                throw SpecError("function/space mismatch");
            auto perm = space.permutation_of(space.group().inverse(g));
            std::vector<S> vals(f.values.size());
            for (std::size_t x = 0; x < vals.size(); ++x) vals[x] = f.values[perm[x]];
            return SpaceFn<S>::finite(std::move(vals));
        }
        case SpaceKind::OnePoint: {
            if (f.kind != SpaceKind::OnePoint) throw SpecError("function/space mismatch");
            std::map<GroupElement, S, ElementLexLess> sup;
            for (const auto& [k, v] : f.support) sup.emplace(space.group().multiply(g, k), v);
            return SpaceFn<S>::one_point(std::move(sup), f.tail);
        }
        case SpaceKind::FreeBoundary: {
            if (f.kind != SpaceKind::FreeBoundary) throw SpecError("function/space mismatch");
            CylinderFn<S> cur = f.cyl;
            const auto& w = g.letters();
            for (auto it = w.rbegin(); it != w.rend(); ++it) cur = cur.translate_letter(*it);
            return SpaceFn<S>::boundary(std::move(cur));
        }
    }
    throw SpecError("unreachable");
}

/// A continuous equivariant candidate map between Finite spaces over one
/// group; equivariance is established by check_equivariant, not assumed.
struct EquivariantMap {
    CompactSpace source;
    CompactSpace target;
    std::vector<std::size_t> table;  // x -> f(x)

    EquivariantMap(CompactSpace src, CompactSpace tgt, std::vector<std::size_t> tbl);
};

struct EquivarianceReport {
    bool equivariant = false;
    bool surjective = false;
    std::vector<std::size_t> fiber_sizes;  // indexed by target point
    std::vector<std::string> violations;
};

EquivarianceReport check_equivariant(const EquivariantMap& f);

}  // namespace amencert
