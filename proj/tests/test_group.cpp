#include <doctest.h>

#include <random>

#include "amencert/group.hpp"

using namespace amencert;

TEST_CASE("make_group canonical generating sets") {
    Group z2 = Group::parse("Z^2");
    REQUIRE(z2.generators().size() == 4);
    CHECK(z2.to_string(z2.generators()[0]) == "(1,0)");
    CHECK(z2.to_string(z2.generators()[1]) == "(0,1)");
    CHECK(z2.to_string(z2.generators()[2]) == "(-1,0)");
    CHECK(z2.to_string(z2.generators()[3]) == "(0,-1)");
    CHECK(z2.positive_generator_count() == 2);

    Group f2 = Group::parse("F_2");
    REQUIRE(f2.generators().size() == 4);
    CHECK(f2.to_string(f2.generators()[0]) == "a");
    CHECK(f2.to_string(f2.generators()[1]) == "b");
    CHECK(f2.to_string(f2.generators()[2]) == "A");
    CHECK(f2.to_string(f2.generators()[3]) == "B");

    Group c3 = Group::parse("perm:[(0 1 2)]");
    REQUIRE(c3.generators().size() == 2);
    CHECK(c3.to_string(c3.generators()[0]) == "(0 1 2)");
    CHECK(c3.to_string(c3.generators()[1]) == "(0 2 1)");
    CHECK(c3.enumerate().size() == 3);

    // involutions are not duplicated (S = S^{-1} without repeats)
    Group c2 = Group::parse("perm:[(0 1)]");
    CHECK(c2.generators().size() == 1);
}

TEST_CASE("make_group rejections") {
    CHECK_THROWS_AS(Group::parse("Z^0"), SpecError);
    CHECK_THROWS_AS(Group::parse("F_0"), SpecError);
    CHECK_THROWS_AS(Group::parse("F_-1"), SpecError);
    CHECK_THROWS_AS(Group::parse("perm:[(0 0 1)]"), SpecError);  // repeated index
    CHECK_THROWS_AS(Group::parse("perm:[()]"), SpecError);       // identity generator
    CHECK_THROWS_AS(Group::parse("sl2"), SpecError);
    CHECK_THROWS_AS(Group::parse("Z^x"), SpecError);
}

TEST_CASE("multiplication in the three families") {
    Group z2 = Group::parse("Z^2");
    CHECK(z2.to_string(z2.multiply(z2.from_string("(1,2)"), z2.from_string("(3,-1)"))) ==
          "(4,1)");

    Group f2 = Group::parse("F_2");
    auto w = f2.multiply(f2.from_string("abA"), f2.from_string("ab"));
    CHECK(f2.to_string(w) == "abb");

    Group c3 = Group::parse("perm:[(0 1 2)]");
    auto prod = c3.multiply(c3.from_string("(0 1 2)"), c3.from_string("(0 2 1)"));
    CHECK(prod == c3.identity());

    CHECK_THROWS_AS(z2.multiply(z2.identity(), f2.identity()), SpecError);
}

TEST_CASE("ball contents and growth") {
    Group z2 = Group::parse("Z^2");
    auto b1 = z2.ball(1);
    REQUIRE(b1->size() == 5);
    CHECK(b1->contains(z2.from_string("(0,0)")));
    CHECK(b1->contains(z2.from_string("(1,0)")));
    CHECK(b1->contains(z2.from_string("(-1,0)")));
    CHECK(b1->contains(z2.from_string("(0,1)")));
    CHECK(b1->contains(z2.from_string("(0,-1)")));

    for (int n = 1; n <= 10; ++n)
        CHECK(z2.ball(n)->size() == static_cast<std::size_t>(2 * n * n + 2 * n + 1));

    Group f2 = Group::parse("F_2");
    std::size_t expected = 1;
    for (int n = 1; n <= 6; ++n) {
        expected = 1;
        for (int i = 1; i <= n; ++i) expected += (i == 1 ? 4u : 0u);
        // closed form 2*3^n - 1 against BFS
        std::size_t closed = 2;
        for (int i = 0; i < n; ++i) closed *= 3;
        closed -= 1;
        CHECK(f2.ball(n)->size() == closed);
    }
}

TEST_CASE("ball ordering is deterministic and prefix-stable") {
    Group f2 = Group::parse("F_2");
    auto b2 = f2.ball(2);
    auto b3 = f2.ball(3);
    for (std::size_t i = 0; i < b2->size(); ++i)
        CHECK(b2->element(i) == b3->element(i));
    // sorted by (length, lex)
    for (std::size_t i = 1; i < b3->size(); ++i) {
        int dl = b3->distance(i - 1), dr = b3->distance(i);
        CHECK(dl <= dr);
        if (dl == dr) CHECK(b3->element(i - 1).lex_less(b3->element(i)));
    }
}

TEST_CASE("word metric properties") {
    std::mt19937_64 rng(3);
    for (const char* spec : {"Z^2", "F_2", "perm:[(0 1 2 3 4)]"}) {
        Group g = Group::parse(spec);
        auto b = g.ball(3);
        for (int trial = 0; trial < 50; ++trial) {
            const auto& x = b->element(rng() % b->size());
            const auto& y = b->element(rng() % b->size());
            const auto& z = b->element(rng() % b->size());
            // associativity and identity on canonical forms
            CHECK(g.multiply(g.multiply(x, y), z) == g.multiply(x, g.multiply(y, z)));
            CHECK(g.multiply(g.identity(), x) == x);
            CHECK(g.multiply(x, g.inverse(x)) == g.identity());
            // d(e, g^{-1}) = d(e, g)
            CHECK(g.word_length(g.inverse(x)) == g.word_length(x));
            // d(e, gs) <= d(e,g) + 1
            for (const auto& s : g.generators())
                CHECK(g.word_length(g.multiply(x, s)) <= g.word_length(x) + 1);
        }
        // BFS distance agrees with the closed-form word length
        for (std::size_t i = 0; i < b->size(); ++i)
            CHECK(b->distance(i) == g.word_length(b->element(i)));
    }
}

TEST_CASE("ball size guard") {
    Guards saved = guards();
    Guards g = saved;
    g.ball_cap = 20;
    set_guards(g);
    Group f2 = Group::parse("F_2");
    CHECK_THROWS_AS(f2.ball(4), GuardError);
    set_guards(saved);
}

TEST_CASE("product groups") {
    Group p = Group::parse("prod(Z^1,perm:[(0 1)])");
    // positives: (1)x(), ()x(0 1); inverses: (-1)x() only ((0 1) is involutive)
    REQUIRE(p.generators().size() == 3);
    CHECK(p.positive_generator_count() == 2);
    CHECK(!p.is_finite());
    auto e = p.identity();
    auto s0 = p.generators()[0];
    CHECK(p.word_length(p.multiply(s0, s0)) == 2);
    // round trip
    auto g = p.from_string(p.to_string(p.multiply(s0, p.generators()[1])));
    CHECK(g == p.multiply(s0, p.generators()[1]));
    CHECK(Group::parse("prod(perm:[(0 1)],perm:[(0 1 2)])").is_finite());
}

TEST_CASE("prod(Z^1,Z^1) matches Z^2 ball growth") {
    Group p = Group::parse("prod(Z^1,Z^1)");
    Group z2 = Group::parse("Z^2");
    for (int n = 0; n <= 5; ++n) CHECK(p.ball(n)->size() == z2.ball(n)->size());
}

TEST_CASE("element string round trips") {
    for (const char* spec : {"Z^2", "F_3", "perm:[(0 1 2 3)]"}) {
        Group g = Group::parse(spec);
        auto b = g.ball(2);
        for (const auto& el : b->elements())
            CHECK(g.from_string(g.to_string(el)) == el);
    }
    Group f2 = Group::parse("F_2");
    CHECK_THROWS_AS(f2.from_string("aA"), SpecError);  // unreduced
    CHECK_THROWS_AS(f2.from_string("ac"), SpecError);  // letter out of rank
}
