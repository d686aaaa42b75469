// Randomized exact-arithmetic property suite shared by the unit tests and the
// acceptance runner. Every check counts as one case; violations are collected
// with enough context to reproduce (scenario, round).
#pragma once

#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "amencert/certificates.hpp"

namespace amencert_tests {

using namespace amencert;
using RFn = SpaceFn<Rational>;

struct PropertyStats {
    long cases = 0;
    long violations = 0;
    std::vector<std::string> failures;

    void check(bool ok, const std::string& what) {
        ++cases;
        if (!ok) {
            ++violations;
            if (failures.size() < 20) failures.push_back(what);
        }
    }
};

class PropertySuite {
public:
    explicit PropertySuite(std::uint64_t seed = 20250808) : rng_(seed) {}

    PropertyStats run(int rounds_per_scenario = 15) {
        PropertyStats stats;
        struct Scenario {
            const char* group;
            const char* space;
        };
        const Scenario scenarios[] = {
            {"Z^1", "point"},
            {"Z^2", "point"},
            {"F_2", "point"},
            {"perm:[(0 1 2 3 4)]", "point"},
            {"prod(Z^1,perm:[(0 1)])", "point"},
            {"Z^1", "onepoint"},
            {"F_2", "onepoint"},
            {"F_2", "finite:a->(0 1 2);b->(0 1 2)"},
            {"Z^2", "finite:x->(0 1 2 3);y->(0 2)(1 3)"},
            {"perm:[(0 1 2)]", "finite:g1->(0 1 2)"},
            {"F_2", "boundary"},
        };
        for (const auto& sc : scenarios) {
            Group g = Group::parse(sc.group);
            CompactSpace sp = CompactSpace::parse(g, sc.space);
            for (int round = 0; round < rounds_per_scenario; ++round)
                run_algebra_round(stats, g, sp, sc.group, sc.space, round);
        }
        run_map_rounds(stats, 3 * rounds_per_scenario);
        return stats;
    }

private:
    std::mt19937_64 rng_;

    Rational rnd_rat() {
        long num = static_cast<long>(rng_() % 13) - 6;
        long den = 1 + static_cast<long>(rng_() % 5);
        return frac(num, den);
    }

    GroupElement rnd_elem(const Group& g, int radius) {
        auto b = g.ball(radius);
        return b->element(rng_() % b->size());
    }

    RFn rnd_fn(const Group& g, const CompactSpace& sp) {
        switch (sp.kind()) {
            case SpaceKind::Point: return RFn::point(rnd_rat());
            case SpaceKind::Finite: {
                std::vector<Rational> vals(sp.finite_size());
                for (auto& v : vals) v = rnd_rat();
                return RFn::finite(std::move(vals));
            }
            case SpaceKind::OnePoint: {
                std::map<GroupElement, Rational, ElementLexLess> sup;
                int k = static_cast<int>(rng_() % 3);
                for (int i = 0; i < k; ++i) sup[rnd_elem(g, 2)] = rnd_rat();
                Rational tail = rng_() % 2 ? Rational(0) : rnd_rat();
                return RFn::one_point(std::move(sup), tail);
            }
            case SpaceKind::FreeBoundary: {
                CylinderFn<Rational> f =
                    CylinderFn<Rational>::constant(sp.boundary_rank(), Rational(0));
                int k = 1 + static_cast<int>(rng_() % 2);
                for (int i = 0; i < k; ++i) {
                    auto w = rnd_elem(g, 2).letters();
                    Rational c = rnd_rat();
                    auto ind = CylinderFn<Rational>::indicator(sp.boundary_rank(), w);
                    f = CylinderFn<Rational>::combine(
                        f, ind, [&c](const Rational& a, const Rational& b) -> Rational {
                            return Rational(a + c * b);
                        });
                }
                return RFn::boundary(std::move(f));
            }
        }
        throw SpecError("unreachable");
    }

    RChain rnd_chain(const Group& g, const CompactSpace& sp) {
        RChain c(g, sp);
        int k = 1 + static_cast<int>(rng_() % 4);
        for (int i = 0; i < k; ++i) c.add_term(rnd_elem(g, 2), rnd_fn(g, sp));
        return c;
    }

    std::vector<RFunctional> rnd_psi(const Group& g, const CompactSpace& sp) {
        std::vector<RFunctional> psi;
        for (std::size_t si = 0; si < g.generators().size(); ++si) {
            RFunctional f(g, sp);
            int k = static_cast<int>(rng_() % 3);
            for (int i = 0; i < k; ++i) f.add_term(rnd_elem(g, 1), rnd_cell(g, sp), rnd_rat());
            psi.push_back(std::move(f));
        }
        return psi;
    }

    Cell rnd_cell(const Group& g, const CompactSpace& sp) {
        switch (sp.kind()) {
            case SpaceKind::Point: return Cell::unit();
            case SpaceKind::Finite: return Cell::finite_point(rng_() % sp.finite_size());
            case SpaceKind::OnePoint:
                return rng_() % 4 == 0 ? Cell::infinity() : Cell::group_point(rnd_elem(g, 2));
            case SpaceKind::FreeBoundary: return Cell::cylinder(rnd_elem(g, 2).letters());
        }
        throw SpecError("unreachable");
    }

    void run_algebra_round(PropertyStats& stats, const Group& g, const CompactSpace& sp,
                           const std::string& gname, const std::string& sname, int round) {
        auto tag = [&](const char* prop) {
            std::ostringstream os;
            os << prop << " [" << gname << ", " << sname << ", round " << round << "]";
            return os.str();
        };

        RChain xi = rnd_chain(g, sp);
        GroupElement a = rnd_elem(g, 2);
        GroupElement b = rnd_elem(g, 2);

        // the action is isometric
        stats.check(chain_norm(act_chain(a, xi)) == chain_norm(xi), tag("isometry"));
        // and composes exactly
        stats.check(act_chain(a, act_chain(b, xi)) == act_chain(g.multiply(a, b), xi),
                    tag("action composition"));
        // sigma is equivariant
        stats.check(sigma(act_chain(a, xi)) == translate(sp, a, sigma(xi)),
                    tag("sigma equivariance"));

        // adjointness of delta and delta*
        auto psi = rnd_psi(g, sp);
        Rational lhs = pair(adjoint_coboundary(psi), xi);
        auto img = coboundary(xi);
        Rational rhs(0);
        for (std::size_t si = 0; si < psi.size(); ++si)
            rhs += pair(psi[si], img.components[si]);
        stats.check(lhs == rhs, tag("adjointness"));

        // coboundary injectivity over the infinite families
        if (!g.is_finite() && !xi.empty()) {
            bool all_zero = true;
            for (const auto& comp : img.components) all_zero = all_zero && comp.empty();
            stats.check(!all_zero, tag("coboundary injectivity"));
        }

        // normalization: sigma-one chains renormalize with defect at most doubled
        RChain w0 = rnd_chain(g, sp);
        RFn correction = sub(RFn::constant(sp, Rational(1)), sigma(w0));
        w0.add_term(g.identity(), correction);
        auto w0rep = is_w0(w0);
        if (w0rep.member && w0rep.value == 1) {
            RChain normed = normalize_chain(w0);
            auto nrep = is_w0(normed);
            stats.check(nrep.member && nrep.value == 1, tag("normalize sigma"));
            bool nonneg = true;
            for (const auto& e : normed.entries())
                for_each_atom<Rational>({&e.fn}, [&nonneg](const std::vector<Rational>& v) {
                    nonneg = nonneg && v[0] >= 0;
                });
            stats.check(nonneg, tag("normalize nonnegativity"));
            stats.check(chain_defect(normed) <= 2 * chain_defect(w0), tag("normalize defect"));
        }
    }

    void run_map_rounds(PropertyStats& stats, int rounds) {
        Group f2 = Group::parse("F_2");
        auto x6 = CompactSpace::parse(f2, "finite:a->(0 1 2 3 4 5);b->(0 1 2 3 4 5)");
        auto x3 = CompactSpace::parse(f2, "finite:a->(0 1 2);b->(0 1 2)");
        auto x1 = CompactSpace::parse(f2, "finite:a->();b->()");
        Group z = Group::parse("Z^1");
        auto z4 = CompactSpace::parse(z, "finite:x->(0 1 2 3)");
        auto z2s = CompactSpace::parse(z, "finite:x->(0 1)");

        struct MapCase {
            Group g;
            EquivariantMap f;
        };
        std::vector<MapCase> maps;
        maps.push_back({f2, EquivariantMap(x6, x3, {0, 1, 2, 0, 1, 2})});
        maps.push_back({f2, EquivariantMap(x3, x1, {0, 0, 0})});
        maps.push_back({z, EquivariantMap(z4, z2s, {0, 1, 0, 1})});

        for (int round = 0; round < rounds; ++round) {
            const auto& mc = maps[round % maps.size()];
            auto tag = [&](const char* prop) {
                std::ostringstream os;
                os << prop << " [map case " << round % maps.size() << ", round " << round << "]";
                return os.str();
            };

            // pullback: isometry and sigma commutation for surjective maps
            RChain eta = rnd_chain(mc.g, mc.f.target);
            RChain pulled = pullback_chain(mc.f, eta);
            stats.check(chain_norm(pulled) == chain_norm(eta), tag("pullback isometry"));
            SpaceFn<Rational> sx = sigma(pulled);
            SpaceFn<Rational> sy = sigma(eta);
            bool commutes = true;
            for (std::size_t x = 0; x < mc.f.source.finite_size(); ++x)
                commutes = commutes && sx.values[x] == sy.values[mc.f.table[x]];
            stats.check(commutes, tag("pullback sigma commutation"));

            // transfer: sigma preserved, nonnegativity preserved, defect
            // non-expansive
            TransferMap mu(mc.f);
            RChain xi = rnd_chain(mc.g, mc.f.source);
            RChain pushed = transfer_chain(mu, xi);
            stats.check(chain_defect(pushed) <= chain_defect(xi), tag("transfer defect"));
            RChain absxi(mc.g, mc.f.source);
            for (const auto& e : xi.entries()) absxi.add_term(e.g, abs_fn(e.fn));
            RChain abspushed = transfer_chain(mu, absxi);
            bool nonneg = true;
            for (const auto& e : abspushed.entries())
                for (const auto& v : e.fn.values) nonneg = nonneg && v >= 0;
            stats.check(nonneg, tag("transfer positivity"));
            SpaceFn<Rational> spx = sigma(xi);
            SpaceFn<Rational> spy = sigma(pushed);
            bool sig_ok = true;
            std::vector<std::vector<std::size_t>> fibers(mc.f.target.finite_size());
            for (std::size_t x = 0; x < mc.f.table.size(); ++x)
                fibers[mc.f.table[x]].push_back(x);
            for (std::size_t y = 0; y < fibers.size(); ++y) {
                Rational acc(0);
                for (auto x : fibers[y]) acc += spx.values[x];
                sig_ok = sig_ok &&
                         spy.values[y] == acc / Rational(static_cast<long>(fibers[y].size()));
            }
            stats.check(sig_ok, tag("transfer sigma averaging"));
        }
    }
};

}  // namespace amencert_tests
