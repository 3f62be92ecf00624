#include "doctest.h"

#include "fixtures.hpp"
#include "pscalc/fock.hpp"
#include "support.hpp"

#include <algorithm>

using namespace pscalc;
using test::FockFixture;
using test::Q;

namespace {

SpMat<Q> step_matrix(const Representation<Q>& rep, const Elem& p, bool star) {
    return eval_steps(rep, {Step{p, 0, star}}).value;
}

std::size_t count(const std::vector<char>& mask) {
    std::size_t n = 0;
    for (char c : mask) n += c != 0;
    return n;
}

OperatorWord random_operator_word(test::Rng& rng, const Ball& letters, const FiberAlgebra<Q>& fa, int max_pairs) {
    while (true) {
        Word w = test::random_word(rng, letters, max_pairs);
        auto o = semigroup_word(w);
        bool ok = true;
        for (std::size_t i = 0; i < o.cp.size() && ok; ++i) {
            for (int* c : {&o.cp[i], &o.cq[i]}) {
                if (*c < 0) continue;
                const Elem& letter = c == &o.cp[i] ? w.pairs[i].first : w.pairs[i].second;
                auto d = fa.dim(static_cast<std::size_t>(fa.ball().index_of(letter)));
                if (d == 0) {
                    ok = false;
                    break;
                }
                *c = static_cast<int>(rng.below(d));
            }
        }
        if (ok) return o;
    }
}

}  // namespace

TEST_CASE("creation matrices on small balls") {
    SUBCASE("N, L=3: lambda(v_1) is the subdiagonal shift") {
        FockFixture f(Monoid::lattice_cone(1), 3);
        auto v = step_matrix(*f.rep, f.m.vec({1}), false);
        REQUIRE(v.rows() == 4);
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j) CHECK(v.at(i, j) == Field<Q>::from_int(i == j + 1 ? 1 : 0));
        auto ev = eval_operator_word(*f.rep, semigroup_word(make_word(f.m, {f.m.vec({1}), f.m.vec({1})})));
        CHECK(ev.interior == std::vector<char>{1, 1, 1, 0});
        CHECK(ev.value.equal_on(SpMat<Q>::identity(4), ev.interior));
    }
    SUBCASE("F2+, L=2: lambda(v_a) lambda(v_b) sends delta_e to delta_ab") {
        FockFixture f(Monoid::free_monoid(2), 2);
        auto ev = eval_steps(*f.rep, {Step{f.m.word("a"), 0, false}, Step{f.m.word("b"), 0, false}});
        const Ball& b = f.fs->ball();
        auto ab = static_cast<std::size_t>(b.index_of(f.m.word("ab")));
        CHECK(ev.interior[0]);
        REQUIRE(ev.value.col(0).e.size() == 1);
        CHECK(ev.value.col(0).e[0].first == ab);
    }
}

TEST_CASE("operator word examples") {
    SUBCASE("F2+: lambda(v_a)lambda(v_a)^* lambda(v_b)lambda(v_b)^* is zero") {
        FockFixture f(Monoid::free_monoid(2), 4);
        auto e = f.m.identity(), a = f.m.word("a"), b = f.m.word("b");
        auto ev = eval_operator_word(*f.rep, semigroup_word(make_word(f.m, {e, a, a, e, e, b, b, e})));
        CHECK(ev.ok);
        CHECK(count(ev.interior) > 0);
        CHECK(ev.value.is_zero_on(ev.interior));
    }
    SUBCASE("<2,3>: alpha = (3,2,2,3) equals E_[{2,3,...}] on the interior") {
        auto m = Monoid::numerical({2, 3});
        FockFixture f(m, 12);
        Ball ref(f.m, 12);
        IdealEngine eng(f.m, ref);
        Word alpha = make_word(f.m, {f.m.integer(3), f.m.integer(2), f.m.integer(2), f.m.integer(3)});
        auto ev = eval_operator_word(*f.rep, semigroup_word(alpha));
        auto E = projection_E<Q>(eng, eng.K_of_word(alpha), f.fs->ball());
        CHECK(count(ev.interior) > 10);
        CHECK(ev.value.equal_on(E, ev.interior));
        CHECK(E.at(0, 0) == Field<Q>::zero());
        CHECK(E.at(1, 1) == Field<Q>::one());
    }
    SUBCASE("N: V_2 V_2^* = diag(0,0,1,1,...)") {
        FockFixture f(Monoid::lattice_cone(1), 6);
        auto e = f.m.identity(), two = f.m.vec({2});
        auto ev = eval_operator_word(*f.rep, semigroup_word(make_word(f.m, {e, two, two, e})));
        for (std::size_t j = 0; j < 7; ++j)
            if (ev.interior[j]) CHECK(ev.value.at(j, j) == Field<Q>::from_int(j >= 2 ? 1 : 0));
    }
    SUBCASE("words longer than the ball are inconclusive") {
        FockFixture f(Monoid::lattice_cone(1), 2);
        auto ev = eval_steps(*f.rep, {Step{f.m.vec({2}), 0, false}, Step{f.m.vec({1}), 0, false}});
        CHECK_FALSE(ev.ok);
        CHECK(ev.radius < 0);
    }
}

TEST_CASE("projection algebra") {
    auto m = Monoid::numerical({2, 3});
    Ball b(m, 8);
    IdealEngine eng(m, b);
    CHECK(projection_E<Q>(eng, eng.whole(), b).equal_on(SpMat<Q>::identity(b.size()), std::vector<char>(b.size(), 1)));
    auto x = eng.principal(m.integer(2));
    auto y = eng.principal(m.integer(3));
    auto lhs = projection_E<Q>(eng, x, b) * projection_E<Q>(eng, y, b);
    auto rhs = projection_E<Q>(eng, eng.intersect(x, y), b);
    CHECK((lhs - rhs).is_zero());
}

TEST_CASE("nilpotent shift product system") {
    auto n = Monoid::lattice_cone(1);
    FiberSystem<Q> good(n, test::nilpotent_spec(), 4);
    auto r = check_product_system_axioms(good);
    CHECK(r.pass);
    CHECK(good.dim(0) == 3);
    CHECK(good.dim(1) == 2);
    CHECK(good.dim(2) == 1);
    CHECK(good.dim(3) == 0);

    FiberSystem<Q> bad(n, test::nilpotent_spec(true), 4);
    auto rb = check_product_system_axioms(bad);
    CHECK_FALSE(rb.pass);
    CHECK(rb.violation == "X_(1)^* X_(2) not in X_(1)");
    CHECK(rb.residual > 0);
}

TEST_CASE("X_P passes the product system axioms") {
    for (auto* name : {"N", "N2", "F2", "S23", "Aff"}) {
        CAPTURE(name);
        auto m = test::family(name);
        FiberSystem<Q> fs(m, ProductSystemSpec<Q>::semigroup(m), 3);
        CHECK(check_product_system_axioms(fs).pass);
        CHECK(fs.semigroup_case());
    }
}

TEST_CASE("property: interior evaluation matches the closed form") {
    test::Rng rng(31);
    struct Case {
        const char* name;
        bool nilpotent;
    };
    for (auto c : {Case{"N", false}, Case{"N2", false}, Case{"F2", false}, Case{"S23", false}, Case{"Aff", false},
                   Case{"N", true}}) {
        CAPTURE(c.name);
        CAPTURE(c.nilpotent);
        auto m = test::family(c.name);
        int L = std::string(c.name) == "F2" ? 5 : 6;
        FockFixture f(m, c.nilpotent ? test::nilpotent_spec() : ProductSystemSpec<Q>::semigroup(m), L);
        Ball letters(f.m, 2);
        std::size_t checked = 0;
        for (int t = 0; t < 200; ++t) {
            auto w = random_operator_word(rng, letters, *f.fs, 2);
            auto ev = eval_operator_word(*f.rep, w);
            if (!ev.ok) continue;
            const Ball& b = f.fs->ball();
            for (std::size_t s = 0; s < b.size(); ++s) {
                for (std::size_t l = 0; l < f.fs->dim(s); ++l) {
                    std::size_t j = f.rep->offset(s) + l;
                    if (!ev.interior[j]) continue;
                    auto cf = fock_closed_form(*f.fs, *f.rep, w, s, l);
                    REQUIRE(cf.has_value());
                    CHECK(ev.value.col(j).e == cf->e);
                    ++checked;
                }
            }
        }
        CHECK(checked > 200);
    }
}

TEST_CASE("property: adjoint coherence under the block Frobenius inner product") {
    test::Rng rng(8);
    auto n = Monoid::lattice_cone(1);
    for (bool nil : {false, true}) {
        FockFixture f(n, nil ? test::nilpotent_spec() : ProductSystemSpec<Q>::semigroup(n), 6);
        const Ball& b = f.fs->ball();
        std::size_t N = f.rep->dim();
        // Gram matrix of the flat basis: tr(x^* y) within a block, 0 across blocks.
        SpMat<Q> G(N, N);
        for (std::size_t r = 0; r < b.size(); ++r)
            for (std::size_t k = 0; k < f.fs->dim(r); ++k)
                for (std::size_t l = 0; l < f.fs->dim(r); ++l) {
                    auto prod = f.fs->element(r, k).adjoint() * f.fs->element(r, l);
                    Q tr = Field<Q>::zero();
                    for (std::size_t i = 0; i < prod.rows(); ++i) tr += prod.at(i, i);
                    if (!tr.is_zero()) G.add(f.rep->offset(r) + k, f.rep->offset(r) + l, tr);
                }
        Ball letters(f.m, 2);
        for (int t = 0; t < 60; ++t) {
            auto w = random_operator_word(rng, letters, *f.fs, 2);
            auto a = eval_operator_word(*f.rep, w);
            auto as = eval_operator_word(*f.rep, adjoint_word(w));
            if (!a.ok || !as.ok) continue;
            auto lhs = a.value.adjoint() * G;
            auto rhs = G * as.value;
            for (std::size_t i = 0; i < N; ++i)
                for (std::size_t j = 0; j < N; ++j)
                    if (a.interior[i] && as.interior[j]) CHECK(lhs.at(i, j) == rhs.at(i, j));
        }
    }
}

TEST_CASE("core words") {
    SUBCASE("K_P over N contains the identity word") {
        FockFixture f(Monoid::lattice_cone(1), 4);
        Ball ref(f.m, 8), letters(f.m, 2);
        IdealEngine eng(f.m, ref);
        auto lat = build_lattice(eng, letters, 2);
        auto ws = enumerate_core_words(eng, lat, eng.whole(), *f.fs);
        bool found = false;
        for (const auto& w : ws) found = found || steps_of(w).empty();
        CHECK(found);
        auto cs = core_span(*f.rep, ws, 2);
        CHECK(cs.ok);
        CHECK(cs.rank == 1);
    }
    SUBCASE("(1,1)N2 core contains lambda(v_w) lambda(v_w)^*") {
        FockFixture f(Monoid::lattice_cone(2), 6);
        Ball ref(f.m, 8), letters(f.m, 4);
        IdealEngine eng(f.m, ref);
        auto lat = build_lattice(eng, letters, 4);
        auto w = f.m.vec({1, 1});
        auto ws = enumerate_core_words(eng, lat, eng.principal(w), *f.fs);
        auto target = semigroup_word(make_word(f.m, {f.m.identity(), w, w, f.m.identity()}));
        CHECK(std::find(ws.begin(), ws.end(), target) != ws.end());
    }
    SUBCASE("empty core over F2+ has zero span") {
        FockFixture f(Monoid::free_monoid(2), 6);
        Ball ref(f.m, 6), letters(f.m, 4);
        IdealEngine eng(f.m, ref);
        auto lat = build_lattice(eng, letters, 4);
        auto e = f.m.identity(), a = f.m.word("a"), b = f.m.word("b");
        auto empty = eng.intersect(eng.principal(a), eng.principal(b));
        auto ws = enumerate_core_words(eng, lat, empty, *f.fs);
        // Interior e letters are collapsed: (e,a,a,e,e,b,b,e) is enumerated as (e,a,a,b,b,e).
        auto target = semigroup_word(make_word(f.m, {e, a, a, b, b, e}));
        auto ev = eval_operator_word(*f.rep, semigroup_word(make_word(f.m, {e, a, a, e, e, b, b, e})));
        CHECK(ev.value.equal_on(eval_operator_word(*f.rep, target).value, ev.interior));
        CHECK(std::find(ws.begin(), ws.end(), target) != ws.end());
        auto cs = core_span(*f.rep, ws, 4);
        CHECK(cs.ok);
        CHECK(cs.rank == 0);
    }
}

TEST_CASE("every K_empty word vanishes in the Fock representation") {
    for (auto* name : {"F2", "Aff"}) {
        CAPTURE(name);
        auto m = test::family(name);
        FockFixture f(m, 6);
        Ball ref(f.m, 6), letters(f.m, 4);
        IdealEngine eng(f.m, ref);
        auto lat = build_lattice(eng, letters, 4);
        std::size_t words = 0;
        for (const auto& entry : lat.entries) {
            if (eng.is_empty(entry.ideal).status != EmptyStatus::Empty) continue;
            for (const auto& w : entry.words) {
                auto ev = eval_operator_word(*f.rep, semigroup_word(w));
                REQUIRE(ev.ok);
                CHECK(ev.value.is_zero_on(ev.interior));
                ++words;
            }
        }
        if (std::string(name) == "F2") CHECK(words > 0);
    }
}

TEST_CASE("property: cores multiply into the core of the intersection") {
    auto m = Monoid::lattice_cone(2);
    FockFixture f(m, 10);
    Ball ref(f.m, 10), small(f.m, 2), big(f.m, 4);
    IdealEngine eng(f.m, ref);
    auto lat2 = build_lattice(eng, small, 2);
    auto lat4 = build_lattice(eng, big, 4);
    std::size_t checked = 0;
    for (const auto& ex : lat2.entries) {
        for (const auto& ey : lat2.entries) {
            auto xy = eng.intersect(ex.ideal, ey.ideal);
            auto target = core_span(*f.rep, enumerate_core_words(eng, lat4, xy, *f.fs), 4);
            REQUIRE(target.ok);
            for (const auto& wx : enumerate_core_words(eng, lat2, ex.ideal, *f.fs)) {
                for (const auto& wy : enumerate_core_words(eng, lat2, ey.ideal, *f.fs)) {
                    auto steps = steps_of(wx);
                    auto sy = steps_of(wy);
                    steps.insert(steps.end(), sy.begin(), sy.end());
                    auto ev = eval_steps(*f.rep, steps);
                    std::vector<char> mask(ev.interior.size());
                    for (std::size_t j = 0; j < mask.size(); ++j) mask[j] = ev.interior[j] && target.interior[j];
                    Span<Q> s;
                    for (const auto& v : target.values) s.insert(v.vectorize(&mask));
                    CHECK(s.contains(ev.value.vectorize(&mask)));
                    ++checked;
                }
            }
        }
    }
    CHECK(checked > 10);
}
