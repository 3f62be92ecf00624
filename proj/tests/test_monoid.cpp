#include "doctest.h"

#include "pscalc/monoid.hpp"
#include "support.hpp"

#include <set>

using namespace pscalc;

TEST_CASE("group law examples") {
    auto z2 = Monoid::lattice_cone(2);
    CHECK(z2.mul(z2.vec({1, 0}), z2.vec({0, 1})) == z2.vec({1, 1}));

    auto aff = Monoid::affine({});
    auto x = aff.affine_elem(2, 1, 3, 1);
    auto y = aff.affine_elem(5, 1, 7, 1);
    CHECK(aff.mul(x, y) == aff.affine_elem(2 + 3 * 5, 1, 21, 1));

    auto f2 = Monoid::free_monoid(2);
    CHECK(f2.mul(f2.word("a"), f2.word("A")) == f2.identity());
}

TEST_CASE("membership examples") {
    auto s23 = Monoid::numerical({2, 3});
    CHECK_FALSE(s23.in_monoid(s23.integer(1)));
    CHECK(s23.in_monoid(s23.integer(7)));
    CHECK(s23.frobenius() == 1);
    auto n2 = Monoid::lattice_cone(2);
    CHECK_FALSE(n2.in_monoid(n2.vec({-1, 2})));
}

TEST_CASE("ball examples") {
    auto n1 = Monoid::lattice_cone(1);
    Ball b1(n1, 3);
    REQUIRE(b1.size() == 4);
    for (long long i = 0; i < 4; ++i) CHECK(b1[i] == n1.vec({i}));

    auto f2 = Monoid::free_monoid(2);
    Ball bf(f2, 2);
    std::vector<std::string> got;
    for (const auto& g : bf.elements()) got.push_back(f2.format(g));
    CHECK(got == std::vector<std::string>{"e", "a", "b", "aa", "ab", "ba", "bb"});

    auto s23 = Monoid::numerical({2, 3});
    Ball bs(s23, 2);
    std::vector<long long> vals;
    for (const auto& g : bs.elements()) vals.push_back(g.v[0]);
    CHECK(vals == std::vector<long long>{0, 2, 3, 4, 5, 6});
}

TEST_CASE("ball cap is a resource error naming the cap") {
    auto f2 = Monoid::free_monoid(2);
    try {
        Ball b(f2, 12, 100);
        FAIL("expected a resource error");
    } catch (const ResourceError& e) {
        CHECK(std::string(e.what()).find("100") != std::string::npos);
    }
}

TEST_CASE("family mismatch is a structural error") {
    auto n2 = Monoid::lattice_cone(2);
    auto f2 = Monoid::free_monoid(2);
    CHECK_THROWS_AS(n2.mul(n2.vec({1, 0}), f2.word("a")), StructuralError);
}

TEST_CASE("numerical membership matches brute-force sums") {
    for (auto gens : std::vector<std::vector<long long>>{{2, 3}, {3, 5}, {4, 6, 9}, {5, 7, 11}, {1}}) {
        auto m = Monoid::numerical(gens);
        // Oracle: dynamic programming over sums of generators.
        const int N = 80;
        std::vector<char> reach(N + 1, 0);
        reach[0] = 1;
        for (int n = 1; n <= N; ++n)
            for (long long g : gens)
                if (n >= g && reach[n - g]) reach[n] = 1;
        for (int n = -3; n <= N; ++n) CHECK(m.in_monoid(m.integer(n)) == (n >= 0 && reach[n]));
        long long frob = -1;
        for (int n = 0; n <= N; ++n)
            if (!reach[n]) frob = n;
        CHECK(m.frobenius() == frob);
    }
}

TEST_CASE("property: group axioms and semigroup closure on balls") {
    test::Rng rng(11);
    for (auto* name : {"N", "N2", "F2", "S23", "Aff"}) {
        auto m = test::family(name);
        Ball b(m, 4);
        const auto& el = b.elements();
        for (int t = 0; t < 300; ++t) {
            const Elem& g = el[rng.below(el.size())];
            const Elem& h = el[rng.below(el.size())];
            const Elem& k = el[rng.below(el.size())];
            CHECK(m.mul(m.mul(g, h), k) == m.mul(g, m.mul(h, k)));
            CHECK(m.mul(g, m.inv(g)) == m.identity());
            CHECK(m.mul(m.inv(g), g) == m.identity());
            CHECK(m.in_monoid(m.mul(g, h)));
        }
        for (const auto& g : el) CHECK(m.in_monoid(g));
    }
}

TEST_CASE("property: balls grow monotonically and deterministically") {
    for (auto* name : {"N", "N2", "F2", "S23", "Aff"}) {
        auto m = test::family(name);
        Ball a(m, 3), b(m, 4), again(m, 4);
        CHECK(b.elements() == again.elements());
        for (const auto& g : a.elements()) CHECK(b.contains(g));
        // Downward closure: every prefix of the recorded factorization is present.
        for (std::size_t i = 0; i < b.size(); ++i) {
            Elem acc = m.identity();
            for (int gi : b.factorization(i)) {
                acc = m.mul(acc, m.generators()[gi]);
                CHECK(b.contains(acc));
            }
            CHECK(acc == b[i]);
        }
    }
}

TEST_CASE("custom family through callbacks") {
    // Z/1 x N written through the five callbacks: a copy of N.
    CustomOps ops;
    ops.name = "N-custom";
    ops.identity = Elem{Family::Custom, {0}};
    ops.mul = [](const Elem& a, const Elem& b) { return Elem{Family::Custom, {a.v[0] + b.v[0]}}; };
    ops.inv = [](const Elem& a) { return Elem{Family::Custom, {-a.v[0]}}; };
    ops.eq = [](const Elem& a, const Elem& b) { return a.v == b.v; };
    ops.in_monoid = [](const Elem& a) { return a.v[0] >= 0; };
    ops.generators = [] { return std::vector<Elem>{Elem{Family::Custom, {1}}}; };
    auto m = Monoid::custom(ops);
    Ball b(m, 5);
    CHECK(b.size() == 6);
    CHECK(m.left_divides(Elem{Family::Custom, {2}}, Elem{Family::Custom, {5}}));
}
