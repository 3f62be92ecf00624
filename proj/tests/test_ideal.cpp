#include "doctest.h"

#include "pscalc/ideal.hpp"
#include "support.hpp"

#include <set>

using namespace pscalc;

namespace {

// Set-based oracle: evaluates q_n^{-1} p_n ... q_1^{-1} p_1 P on a big ball
// by explicit subsets, independent of both the chain and the backends.
// Results are trusted for elements far below the ball radius.
std::set<Elem> oracle_ideal(const Monoid& m, const Ball& big, const Word& w) {
    std::set<Elem> z(big.elements().begin(), big.elements().end());
    for (const auto& [p, q] : w.pairs) {
        std::set<Elem> pz;
        for (const auto& x : z) pz.insert(m.mul(p, x));
        std::set<Elem> next;
        for (const auto& y : big.elements())
            if (pz.count(m.mul(q, y))) next.insert(y);
        z = std::move(next);
    }
    return z;
}

std::vector<long long> members_upto(const IdealEngine& eng, const Ideal& x, long long n) {
    std::vector<long long> out;
    for (long long i = 0; i <= n; ++i)
        if (eng.member(eng.monoid().integer(i), x)) out.push_back(i);
    return out;
}

}  // namespace

TEST_CASE("K_of_word examples") {
    SUBCASE("N, (2,3) gives N") {
        auto m = Monoid::lattice_cone(1);
        Ball ref(m, 12);
        IdealEngine eng(m, ref);
        auto x = eng.K_of_word(make_word(m, {m.vec({2}), m.vec({3})}));
        CHECK(eng.equal(x, eng.whole()) == Tri::True);
    }
    SUBCASE("<2,3>, (3,2,2,3) gives {2,3,4,...}") {
        auto m = Monoid::numerical({2, 3});
        Ball ref(m, 12);
        IdealEngine eng(m, ref);
        auto x = eng.K_of_word(make_word(m, {m.integer(3), m.integer(2), m.integer(2), m.integer(3)}));
        CHECK(members_upto(eng, x, 8) == std::vector<long long>{2, 3, 4, 5, 6, 7, 8});
        CHECK(eng.describe(x) == "{2,...}");
    }
    SUBCASE("F2+, (e,a,a,e,e,b,b,e) is empty") {
        auto m = Monoid::free_monoid(2);
        Ball ref(m, 6);
        IdealEngine eng(m, ref);
        auto e = m.identity(), a = m.word("a"), b = m.word("b");
        auto x = eng.K_of_word(make_word(m, {e, a, a, e, e, b, b, e}));
        CHECK(eng.is_empty(x).status == EmptyStatus::Empty);
    }
}

TEST_CASE("preimage and left multiplication examples") {
    auto n = Monoid::lattice_cone(1);
    Ball refn(n, 10);
    IdealEngine en(n, refn);
    auto P = en.whole();
    CHECK(en.key(en.preimage(n.identity(), P)) == en.key(P));
    auto two = en.left_mult(n.vec({2}), P);
    CHECK_FALSE(en.member(n.vec({1}), two));
    CHECK(en.member(n.vec({2}), two));
    CHECK(en.member(n.vec({7}), two));

    auto s = Monoid::numerical({2, 3});
    Ball refs(s, 12);
    IdealEngine es(s, refs);
    auto x = es.preimage(s.integer(3), es.left_mult(s.integer(2), es.whole()));
    CHECK(members_upto(es, x, 9) == std::vector<long long>{2, 3, 4, 5, 6, 7, 8, 9});
    CHECK_FALSE(es.principal_generator(x).has_value());
}

TEST_CASE("intersection examples") {
    auto m = Monoid::lattice_cone(2);
    Ball ref(m, 8);
    IdealEngine eng(m, ref);
    auto x = eng.principal(m.vec({1, 0}));
    auto y = eng.principal(m.vec({0, 1}));
    CHECK(eng.key(eng.intersect(x, eng.whole())) == eng.key(x));
    CHECK(eng.key(eng.intersect(x, y)) == eng.key(eng.principal(m.vec({1, 1}))));

    auto f = Monoid::free_monoid(2);
    Ball reff(f, 6);
    IdealEngine ef(f, reff);
    auto aP = ef.principal(f.word("a"));
    auto bP = ef.principal(f.word("b"));
    CHECK(ef.is_empty(ef.intersect(aP, bP)).status == EmptyStatus::Empty);
    CHECK_FALSE(ef.member(f.word("ba"), aP));
    CHECK(ef.member(f.identity(), ef.whole()));
}

TEST_CASE("neutrality and closure examples") {
    auto m = Monoid::lattice_cone(1);
    CHECK(is_neutral(m, make_word(m, {m.vec({2}), m.vec({3}), m.vec({3}), m.vec({2})})));
    auto n2 = Monoid::lattice_cone(2);
    Ball ref(n2, 8);
    IdealEngine eng(n2, ref);
    auto fam = eng.cap_closure({eng.principal(n2.vec({1, 0})), eng.principal(n2.vec({0, 1}))});
    CHECK(fam.ideals.size() == 3);
    CHECK(eng.key(fam.ideals[2]) == eng.key(eng.principal(n2.vec({1, 1}))));
    auto again = eng.cap_closure(fam.ideals);
    CHECK(again.ideals.size() == fam.ideals.size());
}

TEST_CASE("right LCM verdicts") {
    SUBCASE("N2 joins are componentwise maxima") {
        auto m = Monoid::lattice_cone(2);
        Ball ref(m, 8);
        IdealEngine eng(m, ref);
        auto v = is_right_lcm_up_to(eng, 3);
        REQUIRE(v.status == LcmStatus::Yes);
        Ball b(m, 3);
        for (const auto& e : v.table) {
            REQUIRE(e.join.has_value());
            CHECK(e.join->v[0] == std::max(b[e.p].v[0], b[e.q].v[0]));
            CHECK(e.join->v[1] == std::max(b[e.p].v[1], b[e.q].v[1]));
        }
    }
    SUBCASE("F2+ joins are the longer comparable prefix") {
        auto m = Monoid::free_monoid(2);
        Ball ref(m, 6);
        IdealEngine eng(m, ref);
        auto v = is_right_lcm_up_to(eng, 3);
        REQUIRE(v.status == LcmStatus::Yes);
        Ball b(m, 3);
        for (const auto& e : v.table) {
            const auto& p = b[e.p].v;
            const auto& q = b[e.q].v;
            std::size_t k = std::min(p.size(), q.size());
            bool pq = std::equal(p.begin(), p.begin() + k, q.begin());
            CHECK(e.join.has_value() == pq);
            if (e.join) CHECK(e.join->v == (p.size() >= q.size() ? p : q));
        }
    }
    SUBCASE("<2,3> is not right LCM") {
        auto m = Monoid::numerical({2, 3});
        Ball ref(m, 12);
        IdealEngine eng(m, ref);
        auto v = is_right_lcm_up_to(eng, 12);
        REQUIRE(v.status == LcmStatus::No);
        CHECK(v.witness_pair->first == m.integer(2));
        CHECK(v.witness_pair->second == m.integer(3));
        CHECK(eng.describe(*v.witness_ideal) == "{2,...}");
    }
}

TEST_CASE("property: backends, chain and set oracle agree") {
    test::Rng rng(2024);
    for (auto* name : {"N", "N2", "F2", "S23", "Aff"}) {
        CAPTURE(name);
        auto m = test::family(name);
        Ball letters(m, 2);
        Ball ref(m, 5);
        Ball big(m, 9);
        IdealEngine eng(m, ref);
        IdealEngine gen(m, ref, true);
        for (int t = 0; t < 60; ++t) {
            Word w = test::random_word(rng, letters, 2);
            auto x = eng.K_of_word(w);
            auto g = gen.K_of_word(w);
            auto oracle = oracle_ideal(m, big, w);
            for (std::size_t i = 0; i < ref.size(); ++i) {
                const Elem& r = ref[i];
                bool chain = chain_member(m, w, r);
                CHECK(eng.member(r, x) == chain);
                CHECK(gen.member(r, g) == chain);
                if (ref.length(i) <= 3) CHECK(oracle.count(r) == static_cast<std::size_t>(chain));
            }
        }
    }
}

TEST_CASE("property: intersection is pointwise conjunction; ideals are right ideals") {
    test::Rng rng(7);
    for (auto* name : {"N", "N2", "F2", "S23", "Aff"}) {
        CAPTURE(name);
        auto m = test::family(name);
        Ball letters(m, 2);
        Ball ref(m, 6);
        IdealEngine eng(m, ref);
        for (int t = 0; t < 40; ++t) {
            auto x = eng.K_of_word(test::random_word(rng, letters, 2));
            auto y = eng.K_of_word(test::random_word(rng, letters, 2));
            auto xy = eng.intersect(x, y);
            for (std::size_t i = 0; i < ref.size(); ++i) {
                const Elem& r = ref[i];
                CHECK(eng.member(r, xy) == (eng.member(r, x) && eng.member(r, y)));
                CHECK(chain_member(m, xy.word, r) == eng.member(r, xy));
                if (eng.member(r, x))
                    for (const auto& s : m.generators()) CHECK(eng.member(m.mul(r, s), x));
            }
        }
    }
}

TEST_CASE("property: reduced-form law") {
    test::Rng rng(99);
    for (auto* name : {"N", "N2", "F2", "S23", "Aff"}) {
        CAPTURE(name);
        auto m = test::family(name);
        Ball letters(m, 2);
        Ball ref(m, 6);
        IdealEngine eng(m, ref);
        for (int t = 0; t < 40; ++t) {
            Word a = test::random_word(rng, letters, 2);
            auto z = eng.K_of_word(test::random_word(rng, letters, 2));
            auto lhs = eng.apply_word(compose(a, mirror(a)), z);
            auto rhs = eng.intersect(eng.K_of_word(a), z);
            CHECK(is_neutral(m, compose(a, mirror(a))));
            for (const auto& r : ref.elements()) CHECK(eng.member(r, lhs) == eng.member(r, rhs));
        }
    }
}

TEST_CASE("property: closure is idempotent") {
    test::Rng rng(5);
    for (auto* name : {"N2", "F2", "S23", "Aff"}) {
        CAPTURE(name);
        auto m = test::family(name);
        Ball letters(m, 2);
        Ball ref(m, 6);
        IdealEngine eng(m, ref);
        std::vector<Ideal> f;
        for (int t = 0; t < 4; ++t) f.push_back(eng.K_of_word(test::random_word(rng, letters, 2)));
        auto c1 = eng.cap_closure(f);
        auto c2 = eng.cap_closure(c1.ideals);
        CHECK(c1.ideals.size() == c2.ideals.size());
        for (std::size_t i = 0; i < c1.ideals.size(); ++i)
            for (std::size_t j = 0; j < c1.ideals.size(); ++j) {
                auto k = eng.key(eng.intersect(c1.ideals[i], c1.ideals[j]));
                bool found = false;
                for (const auto& x : c1.ideals) found = found || eng.key(x) == k;
                CHECK(found);
            }
    }
}

TEST_CASE("generic backend never certifies emptiness") {
    auto m = Monoid::free_monoid(2);
    Ball ref(m, 4);
    IdealEngine gen(m, ref, true);
    auto x = gen.intersect(gen.principal(m.word("a")), gen.principal(m.word("b")));
    auto v = gen.is_empty(x);
    CHECK(v.status == EmptyStatus::UnknownUpTo);
    CHECK(v.horizon == 4);
    CHECK(gen.equal(x, x) == Tri::Unknown);
}

TEST_CASE("neutral lattice grouping") {
    auto m = Monoid::numerical({2, 3});
    Ball ref(m, 12);
    Ball letters(m, 4);
    IdealEngine eng(m, ref);
    auto lat = build_lattice(eng, letters, 4);
    auto e = m.identity();
    auto k = eng.key(eng.K_of_word(make_word(m, {m.integer(3), m.integer(2), m.integer(2), m.integer(3)})));
    auto idx = lat.find(k);
    REQUIRE(idx.has_value());
    for (const auto& w : lat.entries[*idx].words) CHECK(is_neutral(m, w));
    CHECK(lat.find(eng.key(eng.K_of_word(make_word(m, {e, m.integer(2), m.integer(2), e})))).has_value());
}
