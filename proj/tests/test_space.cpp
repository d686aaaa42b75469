#include <doctest.h>

#include <random>

#include <set>

#include "amencert/space.hpp"

using namespace amencert;
using RFn = SpaceFn<Rational>;

TEST_CASE("space parsing and validation") {
    Group z2 = Group::parse("Z^2");
    CHECK(CompactSpace::parse(z2, "point").kind() == SpaceKind::Point);
    CHECK(CompactSpace::parse(z2, "onepoint").kind() == SpaceKind::OnePoint);

    Group f2 = Group::parse("F_2");
    CHECK(CompactSpace::parse(f2, "boundary").kind() == SpaceKind::FreeBoundary);
    // free groups accept any permutations
    auto x3 = CompactSpace::parse(f2, "finite:a->(0 1 2);b->(0 1 2)");
    CHECK(x3.finite_size() == 3);

    // Z^2 needs commuting permutations
    CHECK_THROWS_AS(CompactSpace::parse(z2, "finite:x->(0 1);y->(0 1 2)"), SpecError);
    CHECK(CompactSpace::parse(z2, "finite:x->(0 1 2);y->(0 2 1)").finite_size() == 3);

    // boundary only over free groups; onepoint only over infinite families
    CHECK_THROWS_AS(CompactSpace::parse(z2, "boundary"), SpecError);
    Group c3 = Group::parse("perm:[(0 1 2)]");
    CHECK_THROWS_AS(CompactSpace::parse(c3, "onepoint"), SpecError);

    // permutation groups must respect their own relations on X
    CHECK_THROWS_AS(CompactSpace::parse(c3, "finite:g1->(0 1)"), SpecError);  // order 2 != 3
    CHECK(CompactSpace::parse(c3, "finite:g1->(0 1 2)").finite_size() == 3);

    CHECK_THROWS_AS(CompactSpace::parse(z2, "finite:x->(0 1)"), SpecError);  // y missing
    CHECK_THROWS_AS(CompactSpace::parse(z2, "torus"), SpecError);
}

TEST_CASE("translate on Point and OnePoint") {
    Group z = Group::parse("Z^1");
    CompactSpace pt = CompactSpace::point(z);
    RFn c = RFn::point(Rational(5));
    CHECK(translate(pt, z.from_string("(3)"), c) == c);

    CompactSpace op = CompactSpace::one_point(z);
    std::map<GroupElement, Rational, ElementLexLess> sup{{z.from_string("(0)"), Rational(1)}};
    RFn ind = RFn::one_point(std::move(sup), Rational(0));
    RFn shifted = translate(op, z.from_string("(1)"), ind);
    CHECK(shifted.at_point(z.from_string("(1)")) == 1);
    CHECK(shifted.at_point(z.from_string("(0)")) == 0);
    CHECK(shifted.tail == 0);
}

TEST_CASE("translate on Finite permutes values and multisets") {
    Group f2 = Group::parse("F_2");
    auto x = CompactSpace::parse(f2, "finite:a->(0 1 2);b->(0 2 1)");
    RFn f = RFn::finite({Rational(1), Rational(2), Rational(3)});
    auto g = f2.from_string("ab");
    RFn tf = translate(x, g, f);
    std::multiset<Rational> before(f.values.begin(), f.values.end());
    std::multiset<Rational> after(tf.values.begin(), tf.values.end());
    CHECK(before == after);
    CHECK(linf_norm(tf) == linf_norm(f));
    // (g*f)(x) = f(g^{-1} x) pointwise
    for (std::size_t p = 0; p < 3; ++p)
        CHECK(tf.values[p] == f.values[x.act_point(f2.inverse(g), p)]);
}

TEST_CASE("boundary translate against the pointwise oracle") {
    Group f2 = Group::parse("F_2");
    CompactSpace bd = CompactSpace::free_boundary(f2);
    // input: the indicator of Cyl(a^{-1})
    RFn f = RFn::boundary(CylinderFn<Rational>::indicator(2, {-1}));
    for (const char* gw : {"a", "b", "A", "ab", "aB", "ba"}) {
        auto g = f2.from_string(gw);
        RFn tf = translate(bd, g, f);
        // oracle: evaluate both sides at every depth-3 cylinder point
        auto table = tf.cyl.to_table(3);
        auto g_inv = f2.inverse(g);
        for (const auto& [w, v] : table) {
            Cell cw = Cell::cylinder(w);
            Cell moved = act_cell(bd, g_inv, cw);
            CHECK(v == f.evaluate(moved));
        }
    }
}

TEST_CASE("boundary translate composition is exact") {
    Group f2 = Group::parse("F_2");
    CompactSpace bd = CompactSpace::free_boundary(f2);
    RFn f = RFn::boundary(CylinderFn<Rational>::indicator(2, {1, 2}));  // Cyl(ab)
    auto g = f2.from_string("Ba");
    auto h = f2.from_string("ab");
    RFn lhs = translate(bd, g, translate(bd, h, f));
    RFn rhs = translate(bd, f2.multiply(g, h), f);
    CHECK(lhs == rhs);
}

TEST_CASE("translate(e) is the identity on every kind") {
    Group f2 = Group::parse("F_2");
    for (const char* sp : {"point", "onepoint", "boundary", "finite:a->(0 1);b->(1 2)"}) {
        CompactSpace space = CompactSpace::parse(f2, sp);
        RFn f = RFn::constant(space, frac(3, 7));
        CHECK(translate(space, f2.identity(), f) == f);
    }
}

TEST_CASE("dense table has the advertised cardinality") {
    CylinderFn<Rational> f = CylinderFn<Rational>::indicator(2, {1, -2});
    // 2k (2k-1)^{d-1} entries at depth d
    CHECK(f.to_table(1).size() == 4);
    CHECK(f.to_table(2).size() == 12);
    CHECK(f.to_table(3).size() == 36);
    CylinderFn<Rational> g3 = CylinderFn<Rational>::indicator(3, {1});
    CHECK(g3.to_table(2).size() == 30);  // 6 * 5
}

TEST_CASE("check_equivariant reports") {
    Group f2 = Group::parse("F_2");
    auto x6 = CompactSpace::parse(f2, "finite:a->(0 1 2 3 4 5);b->(0 1 2 3 4 5)");
    auto x3 = CompactSpace::parse(f2, "finite:a->(0 1 2);b->(0 1 2)");
    auto x1 = CompactSpace::parse(f2, "finite:a->();b->()");

    // identity
    auto id_rep = check_equivariant(EquivariantMap(x3, x3, {0, 1, 2}));
    CHECK(id_rep.equivariant);
    CHECK(id_rep.surjective);
    CHECK(id_rep.fiber_sizes == std::vector<std::size_t>{1, 1, 1});

    // constant map onto the one-point finite space
    auto c_rep = check_equivariant(EquivariantMap(x3, x1, {0, 0, 0}));
    CHECK(c_rep.equivariant);
    CHECK(c_rep.surjective);
    CHECK(c_rep.fiber_sizes == std::vector<std::size_t>{3});

    // f(i) = i mod 3 from the 6-cycle to the 3-cycle
    auto m_rep = check_equivariant(EquivariantMap(x6, x3, {0, 1, 2, 0, 1, 2}));
    CHECK(m_rep.equivariant);
    CHECK(m_rep.surjective);
    CHECK(m_rep.fiber_sizes == std::vector<std::size_t>{2, 2, 2});

    // a non-equivariant table is reported, not thrown
    auto bad = check_equivariant(EquivariantMap(x3, x3, {0, 0, 1}));
    CHECK(!bad.equivariant);
    CHECK(!bad.violations.empty());
}

TEST_CASE("cylinder cells act correctly") {
    Group f2 = Group::parse("F_2");
    CompactSpace bd = CompactSpace::free_boundary(f2);
    // a . (canonical point of Cyl(A)) = the same point (a A A A ... = A A A ...)
    Cell cA = Cell::cylinder({-1});
    CHECK(act_cell(bd, f2.from_string("a"), cA) == cA);
    // b . omega_e = omega_b since omega_e = aaa...
    Cell ce = Cell::cylinder({});
    Cell moved = act_cell(bd, f2.from_string("b"), ce);
    CHECK(moved == Cell::cylinder({2}));
    // a . omega_e = omega_e
    CHECK(act_cell(bd, f2.from_string("a"), ce) == ce);
}

TEST_CASE("nested cylinder supports combine correctly") {
    // 1_{Cyl(a)} + 1_{Cyl(ab)} peaks at 2 on Cyl(ab)
    auto f = CylinderFn<Rational>::combine(
        CylinderFn<Rational>::indicator(2, {1}), CylinderFn<Rational>::indicator(2, {1, 2}),
        [](const Rational& x, const Rational& y) -> Rational { return Rational(x + y); });
    SpaceFn<Rational> fn = SpaceFn<Rational>::boundary(f);
    CHECK(linf_norm(fn) == 2);
    CHECK(fn.evaluate(Cell::cylinder({1, 2})) == 2);
    CHECK(fn.evaluate(Cell::cylinder({1, -2})) == 1);
    CHECK(fn.evaluate(Cell::cylinder({2})) == 0);
}

TEST_CASE("cylinder depth cap guards table growth") {
    Guards saved = guards();
    Guards g = saved;
    g.boundary_depth_cap = 3;
    set_guards(g);
    CHECK_THROWS_AS(CylinderFn<Rational>::indicator(2, {1, 2, 1, 2}), GuardError);
    Group f2 = Group::parse("F_2");
    CompactSpace bd = CompactSpace::free_boundary(f2);
    SpaceFn<Rational> f =
        SpaceFn<Rational>::boundary(CylinderFn<Rational>::indicator(2, {1, 2, 1}));
    CHECK_THROWS_AS(translate(bd, f2.from_string("ba"), f), GuardError);
    set_guards(saved);
}
