#include <doctest.h>

#include "amencert/chain.hpp"

using namespace amencert;
using RFn = SpaceFn<Rational>;
using RC = Chain<Rational>;
using RF = DualFunctional<Rational>;

namespace {

RC point_chain(const Group& g, const CompactSpace& sp,
               std::vector<std::pair<std::string, Rational>> terms) {
    RC c(g, sp);
    for (auto& [w, v] : terms) c.add_term(g.from_string(w), RFn::point(v));
    return c;
}

}  // namespace

TEST_CASE("sigma on basic chains") {
    Group z = Group::parse("Z^1");
    CompactSpace pt = CompactSpace::point(z);

    RC one(z, pt);
    one.add_term(z.identity(), RFn::point(Rational(1)));
    CHECK(sigma(one) == RFn::point(Rational(1)));

    // {e -> f, g1 -> -f} sums to zero
    CompactSpace op = CompactSpace::one_point(z);
    RC n0(z, op);
    std::map<GroupElement, Rational, ElementLexLess> sup{{z.identity(), Rational(1)}};
    n0.add_term(z.identity(), RFn::one_point(sup, Rational(0)));
    std::map<GroupElement, Rational, ElementLexLess> sup2{{z.identity(), Rational(-1)}};
    n0.add_term(z.from_string("(1)"), RFn::one_point(sup2, Rational(0)));
    CHECK(sigma(n0).is_zero());
    auto rep = is_w0(n0);
    CHECK(rep.member);
    CHECK(rep.value == 0);

    // convex weights
    RC cx = point_chain(z, pt, {{"(0)", frac(3, 10)}, {"(1)", frac(7, 10)}});
    auto rep2 = is_w0(cx);
    CHECK(rep2.member);
    CHECK(rep2.value == 1);
}

TEST_CASE("is_w0 detects non-constant sigma") {
    Group z = Group::parse("Z^1");
    auto x2 = CompactSpace::parse(z, "finite:x->(0 1)");
    RC c(z, x2);
    c.add_term(z.identity(), RFn::finite({Rational(1), Rational(0)}));
    auto rep = is_w0(c);
    CHECK(!rep.member);
    CHECK(rep.spread == 1);
}

TEST_CASE("act_chain relabels support and translates values") {
    Group z = Group::parse("Z^1");
    CompactSpace pt = CompactSpace::point(z);
    RC c = point_chain(z, pt, {{"(0)", Rational(1)}});
    CHECK(act_chain(z.identity(), c) == c);
    RC moved = act_chain(z.from_string("(2)"), c);
    REQUIRE(moved.entries().size() == 1);
    CHECK(moved.entries()[0].g == z.from_string("(2)"));

    // norm is preserved (isometry)
    RC mixed = point_chain(z, pt, {{"(0)", frac(1, 2)}, {"(1)", frac(-1, 3)}});
    CHECK(chain_norm(act_chain(z.from_string("(-5)"), mixed)) == chain_norm(mixed));
}

TEST_CASE("coboundary of the uniform chain") {
    // uniform over a finite group vanishes
    Group c5 = Group::parse("perm:[(0 1 2 3 4)]");
    CompactSpace pt5 = CompactSpace::point(c5);
    RC uniform(c5, pt5);
    for (const auto& el : c5.enumerate()) uniform.add_term(el, RFn::point(frac(1, 5)));
    for (const auto& comp : coboundary(uniform).components) CHECK(comp.empty());

    // Z uniform on B_1: each component has l1 mass 2/3
    Group z = Group::parse("Z^1");
    CompactSpace pt = CompactSpace::point(z);
    RC u3 = point_chain(z, pt, {{"(-1)", frac(1, 3)}, {"(0)", frac(1, 3)}, {"(1)", frac(1, 3)}});
    auto img = coboundary(u3);
    REQUIRE(img.components.size() == 2);
    for (const auto& comp : img.components) CHECK(chain_norm(comp) == frac(2, 3));
    CHECK(chain_defect(u3) == frac(2, 3));
}

TEST_CASE("coboundary is injective on nonzero chains over infinite families") {
    Group f2 = Group::parse("F_2");
    CompactSpace pt = CompactSpace::point(f2);
    RC c = point_chain(f2, pt, {{"a", Rational(1)}, {"ab", Rational(-2)}});
    bool all_zero = true;
    for (const auto& comp : coboundary(c).components) all_zero = all_zero && comp.empty();
    CHECK(!all_zero);
}

TEST_CASE("adjoint coboundary coefficients") {
    Group z = Group::parse("Z^1");
    CompactSpace pt = CompactSpace::point(z);
    // psi_{+1} = indicator coefficient at h = 0; psi_{-1} = 0
    RF psi_plus(z, pt);
    psi_plus.add_term(z.from_string("(0)"), Cell::unit(), Rational(1));
    RF psi_minus(z, pt);
    RF d = adjoint_coboundary<Rational>({psi_plus, psi_minus});
    // D(g) = psi(g) - psi(s g): +1 at g = 0, -1 at g = -1
    REQUIRE(d.coefficients().size() == 2);
    CHECK(std::get<0>(d.coefficients()[0]) == z.from_string("(-1)"));
    CHECK(std::get<2>(d.coefficients()[0]) == -1);
    CHECK(std::get<0>(d.coefficients()[1]) == z.from_string("(0)"));
    CHECK(std::get<2>(d.coefficients()[1]) == 1);

    // all-zero input
    RF zero(z, pt);
    CHECK(adjoint_coboundary<Rational>({zero, zero}).is_zero());
}

TEST_CASE("adjointness identity on a hand case") {
    Group z = Group::parse("Z^1");
    CompactSpace pt = CompactSpace::point(z);
    RF psi_plus(z, pt);
    psi_plus.add_term(z.from_string("(0)"), Cell::unit(), frac(2, 3));
    psi_plus.add_term(z.from_string("(1)"), Cell::unit(), frac(-1, 2));
    RF psi_minus(z, pt);
    psi_minus.add_term(z.from_string("(-1)"), Cell::unit(), frac(5, 7));
    RC xi = point_chain(z, pt, {{"(0)", frac(1, 2)}, {"(1)", frac(1, 3)}, {"(2)", frac(-3, 4)}});

    Rational lhs = pair(adjoint_coboundary<Rational>({psi_plus, psi_minus}), xi);
    auto img = coboundary(xi);
    Rational rhs = pair(psi_plus, img.components[0]) + pair(psi_minus, img.components[1]);
    CHECK(lhs == rhs);
}

TEST_CASE("chain_norm across kinds") {
    Group f2 = Group::parse("F_2");
    for (const char* sp : {"point", "onepoint", "finite:a->(0 1 2);b->(0 1 2)"}) {
        CompactSpace space = CompactSpace::parse(f2, sp);
        RC c(f2, space);
        c.add_term(f2.identity(), RFn::constant(space, Rational(1)));
        CHECK(chain_norm(c) == 1);
    }
    // OnePoint tail-aware norm: mass on the tail counts at unlisted points
    Group z = Group::parse("Z^1");
    CompactSpace op = CompactSpace::one_point(z);
    RC c(z, op);
    std::map<GroupElement, Rational, ElementLexLess> sup{{z.identity(), frac(1, 2)}};
    c.add_term(z.identity(), RFn::one_point(sup, frac(1, 5)));
    // at the listed point: 1/2; at any unlisted point and infinity: 1/5
    CHECK(chain_norm(c) == frac(1, 2));
}

TEST_CASE("pair with distinguished functionals") {
    Group z = Group::parse("Z^1");
    CompactSpace pt = CompactSpace::point(z);
    RC folner = point_chain(z, pt, {{"(-1)", frac(1, 3)}, {"(0)", frac(1, 3)}, {"(1)", frac(1, 3)}});
    RF sig = RF::sigma_functional(z, pt);
    CHECK(pair(sig, folner) == 1);
    RF zero(z, pt);
    CHECK(pair(zero, folner) == 0);

    RC bad = point_chain(z, pt, {{"(0)", Rational(1)}});
    CHECK(pair(sig, bad) == 1);  // point space: every chain is W0

    Group f2 = Group::parse("F_2");
    auto x2 = CompactSpace::parse(f2, "finite:a->(0 1);b->()");
    RC nonw0(f2, x2);
    nonw0.add_term(f2.identity(), RFn::finite({Rational(1), Rational(0)}));
    RF sig2 = RF::sigma_functional(f2, x2);
    CHECK_THROWS_AS(pair(sig2, nonw0), SpecError);
}

TEST_CASE("normalize_chain") {
    Group z = Group::parse("Z^1");
    CompactSpace pt = CompactSpace::point(z);

    // already nonnegative with sigma 1: unchanged
    RC good = point_chain(z, pt, {{"(0)", frac(1, 2)}, {"(1)", frac(1, 2)}});
    CHECK(normalize_chain(good) == good);

    // {0 -> 2, 1 -> -1} normalizes to {0 -> 2/3, 1 -> 1/3}
    RC mixed = point_chain(z, pt, {{"(0)", Rational(2)}, {"(1)", Rational(-1)}});
    RC norm = normalize_chain(mixed);
    CHECK(norm == point_chain(z, pt, {{"(0)", frac(2, 3)}, {"(1)", frac(1, 3)}}));

    // sigma != 1 is rejected
    RC off = point_chain(z, pt, {{"(0)", Rational(2)}});
    CHECK_THROWS_AS(normalize_chain(off), SpecError);
}

TEST_CASE("dual norms and the dual action") {
    Group z = Group::parse("Z^1");
    CompactSpace pt = CompactSpace::point(z);
    RF phi(z, pt);
    phi.add_term(z.from_string("(0)"), Cell::unit(), Rational(2));
    phi.add_term(z.from_string("(1)"), Cell::unit(), Rational(-3));
    // point space: one cell, norm = max |coef|
    CHECK(dual_norm(phi) == 3);

    auto x2 = CompactSpace::parse(z, "finite:x->(0 1)");
    RF psi(z, x2);
    psi.add_term(z.from_string("(0)"), Cell::finite_point(0), Rational(2));
    psi.add_term(z.from_string("(1)"), Cell::finite_point(1), Rational(-3));
    // independent cells add
    CHECK(dual_norm(psi) == 5);

    // (g.phi) pairs as phi(g^{-1}.xi)
    RC xi(z, x2);
    xi.add_term(z.from_string("(2)"), RFn::finite({frac(1, 2), frac(1, 7)}));
    auto g = z.from_string("(1)");
    CHECK(pair(act_dual(g, psi), xi) == pair(psi, act_chain(z.inverse(g), xi)));
}
