#include "doctest.h"

#include "fixtures.hpp"
#include "pscalc/covariance.hpp"
#include "support.hpp"

using namespace pscalc;
using test::Q;

namespace {

std::string words_of(const Monoid& m, const std::vector<Word>& ws) {
    std::string s;
    for (const auto& w : ws) s += format_word(m, w) + ";";
    return s;
}

}  // namespace

TEST_CASE("representation axioms") {
    auto s23 = Monoid::numerical({2, 3});
    CHECK(check_rep_axioms(*test::rep_factory(s23, "fock")(6)).status == Status::Pass);
    CHECK(check_rep_axioms(*test::rep_factory(s23, "shift-power")(6)).status == Status::Pass);
    auto broken = check_rep_axioms(*test::rep_factory(s23, "broken-shift")(6));
    REQUIRE(broken.status == Status::Violation);
    REQUIRE(broken.witness.has_value());
    CHECK(broken.witness->rank > 0);
    CHECK(replay_expression(*test::rep_factory(s23, "broken-shift")(6), broken.witness->expr, 0) == Status::Violation);

    auto n = Monoid::lattice_cone(1);
    test::FockFixture nil(n, test::nilpotent_spec(), 6);
    CHECK(check_rep_axioms(*nil.rep).status == Status::Pass);

    // Generator-prefixed tuples reach the same verdict as all tuples.
    for (auto* name : {"fock", "shift-power", "broken-shift", "left-regular"}) {
        CAPTURE(name);
        auto rep = test::rep_factory(s23, name)(6);
        CHECK(check_rep_axioms(*rep, {}, 1).status == check_rep_axioms(*rep).status);
    }
    CHECK(check_rep_axioms(*nil.rep, {}, 1).status == Status::Pass);
}

TEST_CASE("T-conditions") {
    SUBCASE("<2,3>: left regular passes, shift powers fail (T4)") {
        auto m = Monoid::numerical({2, 3});
        Ball ref(m, 12), letters(m, 4);
        IdealEngine eng(m, ref);
        auto lat = build_lattice(eng, letters, 4);
        auto lr = test::left_regular(m, 12);
        for (const auto& v : check_T_conditions(*lr, eng, lat)) {
            CAPTURE(v.check);
            CAPTURE(v.message);
            CHECK(v.status == Status::Pass);
        }
        auto sh = test::rep_factory(m, "shift-power")(12);
        auto vs = check_T_conditions(*sh, eng, lat);
        CHECK(vs[0].status == Status::Pass);
        CHECK(vs[1].status == Status::Pass);
        REQUIRE(vs[3].status == Status::Violation);
        const auto& w = *vs[3].witness;
        auto e = m.identity();
        auto two = m.integer(2), three = m.integer(3);
        CHECK(words_of(m, w.ideals) ==
              words_of(m, {make_word(m, {three, two, two, three}), make_word(m, {e, two, two, e}),
                           make_word(m, {e, three, three, e})}));
        CHECK(w.rank == 2);
        // The residual is a projection: idempotent on its interior.
        auto val = eval_expression(*sh, w.expr);
        auto sq = val.value * val.value;
        CHECK(sq.equal_on(val.value, val.interior));
    }
    SUBCASE("N: (2,2) and (3,3) both give P and agree") {
        auto m = Monoid::lattice_cone(1);
        auto lr = test::left_regular(m, 8);
        Word a = make_word(m, {m.vec({2}), m.vec({2})});
        Word b = make_word(m, {m.vec({3}), m.vec({3})});
        auto val = eval_expression(*lr, detail::difference<Q>(steps_of(semigroup_word(a)), steps_of(semigroup_word(b))));
        CHECK(any_set(val.interior));
        CHECK(val.value.is_zero_on(val.interior));
    }
}

TEST_CASE("Nica covariance and compact alignment") {
    auto n2 = Monoid::lattice_cone(2);
    Ball ref2(n2, 8);
    IdealEngine e2(n2, ref2);
    auto fock2 = test::rep_factory(n2, "fock")(8);
    CHECK(check_compact_alignment(*fock2, e2, 4).status == Status::Pass);
    CHECK(check_nica(*test::left_regular(n2, 8), *fock2, e2, 4).status == Status::Pass);
    auto same = check_nica(*test::rep_factory(n2, "collapsed")(8), *fock2, e2, 4);
    CHECK(same.status == Status::Violation);
    REQUIRE(same.witness.has_value());
    CHECK(replay_expression(*test::rep_factory(n2, "collapsed")(8), same.witness->expr, 0) == Status::Violation);

    SUBCASE("N2: V_a V_a^* V_b V_b^* = V_ab V_ab^*") {
        auto a = n2.vec({1, 0}), b = n2.vec({0, 1}), ab = n2.vec({1, 1});
        auto lhs = eval_steps(*fock2, {Step{a, 0, false}, Step{a, 0, true}, Step{b, 0, false}, Step{b, 0, true}});
        auto rhs = eval_steps(*fock2, {Step{ab, 0, false}, Step{ab, 0, true}});
        CHECK(lhs.value.equal_on(rhs.value, lhs.interior));
    }
    SUBCASE("F2+: V_a V_a^* V_b V_b^* = 0") {
        auto f2 = Monoid::free_monoid(2);
        Ball ref(f2, 6);
        IdealEngine ef(f2, ref);
        auto fock = test::rep_factory(f2, "fock")(6);
        auto lhs = eval_steps(*fock, {Step{f2.word("a"), 0, false}, Step{f2.word("a"), 0, true}, Step{f2.word("b"), 0, false},
                                      Step{f2.word("b"), 0, true}});
        CHECK(lhs.value.is_zero_on(lhs.interior));
        CHECK(check_nica(*test::left_regular(f2, 6), *fock, ef, 4).status == Status::Pass);
        CHECK(check_nica(*test::rep_factory(f2, "collapsed")(6), *fock, ef, 4).status == Status::Violation);
    }
    SUBCASE("nilpotent shift Fock representation") {
        auto n = Monoid::lattice_cone(1);
        Ball ref(n, 8);
        IdealEngine en(n, ref);
        test::FockFixture nil(n, test::nilpotent_spec(), 6);
        CHECK(check_compact_alignment(*nil.rep, en, 4).status == Status::Pass);
        CHECK(check_nica(*nil.rep, *nil.rep, en, 4).status == Status::Pass);
    }
    SUBCASE("<2,3> is rejected") {
        auto s = Monoid::numerical({2, 3});
        Ball ref(s, 12);
        IdealEngine es(s, ref);
        auto fock = test::rep_factory(s, "fock")(8);
        CHECK_THROWS_AS(check_nica(*fock, *fock, es, 4), StructuralError);
    }
}

TEST_CASE("Wick normal form examples") {
    auto n2 = Monoid::lattice_cone(2);
    Ball ref(n2, 8);
    IdealEngine e2(n2, ref);
    auto a = n2.vec({1, 0}), b = n2.vec({0, 1});
    auto r = wick_normal_form(e2, {{a, true}, {b, false}});
    REQUIRE(r.ok);
    CHECK_FALSE(r.zero);
    CHECK(r.r == b);
    CHECK(r.s == a);

    auto f2 = Monoid::free_monoid(2);
    Ball reff(f2, 6);
    IdealEngine ef(f2, reff);
    CHECK(wick_normal_form(ef, {{f2.word("a"), true}, {f2.word("b"), false}}).zero);
    auto id = wick_normal_form(ef, {{f2.word("ab"), true}, {f2.word("ab"), false}});
    CHECK_FALSE(id.zero);
    CHECK(id.r == f2.identity());
    CHECK(id.s == f2.identity());
}

TEST_CASE("property: Wick normal forms agree with the Fock evaluation") {
    for (auto* name : {"N2", "F2"}) {
        CAPTURE(name);
        auto m = test::family(name);
        Ball ref(m, 10);
        IdealEngine eng(m, ref);
        auto fock = test::rep_factory(m, "fock")(std::string(name) == "F2" ? 6 : 8);
        std::vector<WickLetter> alphabet;
        for (const auto& g : m.generators())
            for (bool s : {false, true}) alphabet.push_back({g, s});
        std::size_t words = 0;
        for (std::size_t len = 1; len <= 6; ++len) {
            std::vector<std::size_t> at(len, 0);
            while (true) {
                std::vector<WickLetter> w;
                for (auto i : at) w.push_back(alphabet[i]);
                auto nf = wick_normal_form(eng, w);
                REQUIRE(nf.ok);
                auto orig = eval_steps(*fock, wick_steps(w));
                std::vector<Step> ns;
                if (!nf.zero) ns = {Step{nf.r, 0, false}, Step{nf.s, 0, true}};
                auto norm = eval_steps(*fock, ns);
                std::vector<char> mask(orig.interior.size());
                for (std::size_t j = 0; j < mask.size(); ++j) mask[j] = orig.interior[j] && norm.interior[j];
                if (nf.zero)
                    CHECK(orig.value.is_zero_on(orig.interior));
                else
                    CHECK(orig.value.equal_on(norm.value, mask));
                ++words;
                std::size_t c = 0;
                while (c < len && ++at[c] == alphabet.size()) at[c++] = 0;
                if (c == len) break;
            }
        }
        CHECK(words == 4 + 16 + 64 + 256 + 1024 + 4096);
    }
}

TEST_CASE("Fock covariance conditions") {
    FockCovBounds nb{4, 8, 12, 2};
    SUBCASE("lambda passes") {
        for (auto* name : {"N", "N2", "F2", "S23"}) {
            CAPTURE(name);
            auto m = test::family(name);
            FockCovBounds bd = nb;
            if (std::string(name) == "F2") bd = {4, 6, 8, 2};
            auto v = check_theoremA(test::rep_factory(m, "fock"), m, bd);
            CAPTURE(v.message);
            CHECK(v.status == Status::Pass);
        }
    }
    SUBCASE("nilpotent shift Fock representation passes") {
        auto n = Monoid::lattice_cone(1);
        RepFactory<Q> f = [&n](int L) -> std::shared_ptr<Representation<Q>> {
            auto fs = std::make_shared<FiberSystem<Q>>(n, test::nilpotent_spec(), L);
            return std::make_shared<FockRep<Q>>(fs);
        };
        auto v = check_theoremA(f, n, nb);
        CAPTURE(v.message);
        CHECK(v.status == Status::Pass);
    }
    SUBCASE("<2,3> shift powers violate (ii), stably") {
        auto m = Monoid::numerical({2, 3});
        auto v = check_theoremA(test::rep_factory(m, "shift-power"), m, nb);
        CAPTURE(v.message);
        REQUIRE(v.status == Status::Violation);
        CHECK(v.stability.size() == 2);
        CHECK(v.witness->kind == "theorem-a-ii");
        auto big = test::rep_factory(m, "shift-power")(nb.L_big);
        Ball ref(m, nb.L_big + 2);
        IdealEngine eng(m, ref);
        CHECK(theoremA_hypothesis_holds(*big, eng, *v.witness));
        CHECK(replay_expression(*test::rep_factory(m, "shift-power")(nb.L), v.witness->expr, 0) == Status::Violation);
    }
    SUBCASE("F2+ collapsed shift violates (i)") {
        auto m = Monoid::free_monoid(2);
        auto v = check_theoremA(test::rep_factory(m, "collapsed"), m, {4, 6, 8, 2});
        REQUIRE(v.status == Status::Violation);
        CHECK(v.witness->kind == "theorem-a-i");
    }
    SUBCASE("broken homomorphism is not a representation") {
        auto m = Monoid::numerical({2, 3});
        auto v = check_theoremA(test::rep_factory(m, "broken-shift"), m, nb);
        CHECK(v.status == Status::Inconclusive);
    }
}

TEST_CASE("kernel inclusion") {
    FockCovBounds bd{4, 8, 12, 2};
    auto m = Monoid::numerical({2, 3});
    auto fock = test::rep_factory(m, "fock");
    CHECK(check_kernel_inclusion(fock, fock, m, bd).status == Status::Pass);
    auto v = check_kernel_inclusion(test::rep_factory(m, "shift-power"), fock, m, bd);
    CHECK(v.status == Status::Violation);
    auto n = Monoid::lattice_cone(1);
    CHECK(check_kernel_inclusion(test::rep_factory(n, "trivial"), test::rep_factory(n, "fock"), n, bd).status ==
          Status::Pass);
}

TEST_CASE("cross-validation: Nica against Fock covariance, T-conditions against Fock covariance") {
    for (auto* name : {"N", "N2", "F2"}) {
        auto m = test::family(name);
        FockCovBounds bd = std::string(name) == "F2" ? FockCovBounds{4, 6, 8, 2} : FockCovBounds{4, 8, 12, 2};
        Ball ref(m, bd.L_big + bd.step);
        IdealEngine eng(m, ref);
        Ball letters(m, bd.W);
        auto lat = build_lattice(eng, letters, bd.W);
        auto fock = test::rep_factory(m, "fock")(bd.L);
        for (auto* rep : {"fock", "left-regular", "collapsed", "trivial"}) {
            CAPTURE(name);
            CAPTURE(rep);
            auto f = test::rep_factory(m, rep);
            auto ta = check_theoremA(f, m, bd);
            auto nica = check_nica(*f(bd.L), *fock, eng, bd.W);
            auto tc = combine<Q>("T", check_T_conditions(*f(bd.L), eng, lat));
            CAPTURE(ta.message);
            CAPTURE(nica.message);
            CAPTURE(tc.message);
            CHECK(ta.status != Status::Inconclusive);
            CHECK(ta.status == nica.status);
            CHECK(ta.status == tc.status);
        }
    }
}
