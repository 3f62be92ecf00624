#pragma once
// Batch checks over whole families: ideal membership against the chain
// condition, the reduced-form law, the projection algebra, Fock formulas
// against the closed form, and Wick normal forms. Shared by the CLI and the
// acceptance runner.

#include "pscalc/covariance.hpp"
#include "pscalc/fock.hpp"

#include <random>

namespace pscalc {

// Words of 1..max_pairs pairs with letters from `letters`, resampled until the
// total generator length is at most max_len.
inline Word random_word(std::mt19937_64& rng, const Ball& letters, int max_pairs, int max_len) {
    const Monoid& m = letters.monoid();
    auto below = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
    while (true) {
        std::size_t n = 1 + below(static_cast<std::size_t>(max_pairs));
        std::vector<Elem> flat;
        for (std::size_t i = 0; i < 2 * n; ++i) flat.push_back(letters[below(letters.size())]);
        Word w = make_word(m, flat);
        int len = word_length(letters, w);
        if (len >= 0 && len <= max_len) return w;
    }
}

namespace detail {

template <class T>
CheckVerdict<T> named(std::string check) {
    CheckVerdict<T> v;
    v.check = std::move(check);
    return v;
}

}  // namespace detail

// Backend membership in K(w) against the chain condition on every element of
// `ball`, for `count` random words of length <= max_len.
template <class T>
CheckVerdict<T> check_ideal_oracle(const IdealEngine& eng, const Ball& ball, int count, int max_len, std::uint64_t seed) {
    auto v = detail::named<T>("ideal-oracle");
    const Monoid& m = eng.monoid();
    Ball letters(m, max_len);
    std::mt19937_64 rng(seed);
    v.notes.push_back({"seed", std::to_string(seed)});
    for (int t = 0; t < count; ++t) {
        Word w = random_word(rng, letters, std::max(1, max_len / 2), max_len);
        auto x = eng.K_of_word(w);
        for (const auto& r : ball.elements()) {
            ++v.instances;
            if (eng.member(r, x) != chain_member(m, w, r)) {
                v.status = Status::Violation;
                v.message = "membership of " + m.format(r) + " in K" + format_word(m, w) + " disagrees with the chain";
                v.witness = Witness<T>{"ideal-membership", {}, {w}, v.message, 0};
                return v;
            }
        }
    }
    v.message = std::to_string(count) + " words agree with the chain condition on " + std::to_string(ball.size()) +
                " elements";
    v.stability = {ball.radius()};
    return v;
}

// alpha mirror(alpha) applied to Z equals K(alpha) cap Z pointwise.
template <class T>
CheckVerdict<T> check_reduced_form(const IdealEngine& eng, const Ball& ball, int count, int max_len, std::uint64_t seed) {
    auto v = detail::named<T>("reduced-form");
    const Monoid& m = eng.monoid();
    Ball letters(m, max_len);
    std::mt19937_64 rng(seed);
    v.notes.push_back({"seed", std::to_string(seed)});
    for (int t = 0; t < count; ++t) {
        Word a = random_word(rng, letters, std::max(1, max_len / 2), max_len);
        Word zw = random_word(rng, letters, std::max(1, max_len / 2), max_len);
        auto z = eng.K_of_word(zw);
        Word am = compose(a, mirror(a));
        auto lhs = eng.apply_word(am, z);
        auto rhs = eng.intersect(eng.K_of_word(a), z);
        for (const auto& r : ball.elements()) {
            ++v.instances;
            if (eng.member(r, lhs) != eng.member(r, rhs)) {
                v.status = Status::Violation;
                v.message = "reduced form fails at " + m.format(r) + " for alpha=" + format_word(m, a);
                v.witness = Witness<T>{"reduced-form", {}, {a, zw}, v.message, 0};
                return v;
            }
        }
    }
    v.message = std::to_string(count) + " pairs (alpha, Z) satisfy the reduced-form law";
    v.stability = {ball.radius()};
    return v;
}

// E_[x] E_[y] = E_[x cap y] for all lattice pairs, and every neutral word's
// V-product equals E_[K(word)] on its interior (semigroup case).
template <class T>
CheckVerdict<T> check_projection_algebra(const FockRep<T>& fock, const IdealEngine& eng, const NeutralLattice& lat) {
    auto v = detail::named<T>("projection-algebra");
    v.stability = {fock.truncation()};
    if (!fock.fibers().semigroup_case()) {
        v.status = Status::Inconclusive;
        v.message = "projection algebra needs the semigroup product system";
        return v;
    }
    const Monoid& m = eng.monoid();
    const Ball& b = fock.fibers().ball();
    std::vector<SpMat<T>> E;
    for (const auto& e : lat.entries) E.push_back(projection_E<T>(eng, e.ideal, b));
    for (std::size_t i = 0; i < lat.entries.size(); ++i) {
        for (std::size_t j = i; j < lat.entries.size(); ++j) {
            ++v.instances;
            auto cap = projection_E<T>(eng, eng.intersect(lat.entries[i].ideal, lat.entries[j].ideal), b);
            if (!(E[i] * E[j] - cap).is_zero()) {
                v.status = Status::Violation;
                v.message = "E_[x] E_[y] != E_[x cap y] for x=" + eng.describe(lat.entries[i].ideal) +
                            ", y=" + eng.describe(lat.entries[j].ideal);
                v.witness = Witness<T>{"projection-product", {}, {lat.entries[i].ideal.word, lat.entries[j].ideal.word},
                                       v.message, 0};
                return v;
            }
        }
        for (const auto& w : lat.entries[i].words) {
            ++v.instances;
            auto ev = eval_operator_word(fock, semigroup_word(w));
            if (!ev.ok) continue;
            if (!ev.value.equal_on(E[i], ev.interior)) {
                v.status = Status::Violation;
                v.message = "V-product of " + format_word(m, w) + " differs from E_[K] on the interior";
                v.witness = Witness<T>{"projection-formula", {}, {w}, v.message, 0};
                return v;
            }
        }
    }
    v.message = "projection algebra holds for " + std::to_string(lat.entries.size()) + " lattice ideals";
    return v;
}

// Interior evaluation against the closed form for random operator words, and
// every enumerated K_empty word vanishing in lambda.
template <class T>
CheckVerdict<T> check_fock_formulas(const FiberSystem<T>& fs, const FockRep<T>& fock, const IdealEngine& eng,
                                    const NeutralLattice& lat, int count, std::uint64_t seed, Tolerance tol = {}) {
    auto v = detail::named<T>("fock-formulas");
    v.stability = {fock.truncation()};
    v.notes.push_back({"seed", std::to_string(seed)});
    const Monoid& m = eng.monoid();
    const Ball& b = fs.ball();
    Ball letters(m, std::min(2, b.radius()));
    std::mt19937_64 rng(seed);
    auto below = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
    const double dtol = Field<T>::backend == Backend::Exact ? 0.0 : tol.tol;
    std::size_t columns = 0;
    for (int t = 0; t < count; ++t) {
        OperatorWord o;
        while (true) {
            o = semigroup_word(random_word(rng, letters, 2, 4));
            bool ok = true;
            for (std::size_t i = 0; i < o.cp.size() && ok; ++i) {
                for (int side = 0; side < 2 && ok; ++side) {
                    int& c = side == 0 ? o.cp[i] : o.cq[i];
                    if (c < 0) continue;
                    const Elem& letter = side == 0 ? o.word.pairs[i].first : o.word.pairs[i].second;
                    auto li = b.index_of(letter);
                    auto d = li < 0 ? 0 : fs.dim(static_cast<std::size_t>(li));
                    if (d == 0) ok = false;
                    else c = static_cast<int>(below(d));
                }
            }
            if (ok) break;
        }
        auto ev = eval_operator_word(fock, o);
        if (!ev.ok) continue;
        for (std::size_t s = 0; s < b.size(); ++s) {
            for (std::size_t l = 0; l < fs.dim(s); ++l) {
                std::size_t j = fock.offset(s) + l;
                if (!ev.interior[j]) continue;
                ++columns;
                auto cf = fock_closed_form(fs, fock, o, s, l);
                bool same = cf.has_value() && max_magnitude(axpy(ev.value.col(j), -Field<T>::one(), *cf)) <= dtol;
                if (!same) {
                    v.status = Status::Violation;
                    v.message = "evaluation of " + format_operator_word(m, o) + " differs from the closed form at " +
                                m.format(b[s]);
                    v.witness = Witness<T>{"fock-closed-form", {}, {o.word}, v.message, 0};
                    return v;
                }
            }
        }
    }
    v.instances = columns;
    std::size_t empty_words = 0;
    for (const auto& e : lat.entries) {
        if (eng.is_empty(e.ideal).status != EmptyStatus::Empty) continue;
        for (const auto& w : enumerate_core_words(eng, lat, e.ideal, fs)) {
            ++empty_words;
            auto ev = eval_operator_word(fock, w);
            if (!ev.ok) continue;
            if (!ev.value.is_zero_on(ev.interior, dtol)) {
                v.status = Status::Violation;
                v.message = "K_empty word " + format_operator_word(m, w) + " is nonzero in lambda";
                v.witness = detail::make_witness(fock, "k-empty", detail::single<T>(steps_of(w)), v.message, tol.tol);
                return v;
            }
        }
    }
    v.notes.push_back({"interior columns", std::to_string(columns)});
    v.notes.push_back({"K_empty words", std::to_string(empty_words)});
    v.message = "closed form matches on " + std::to_string(columns) + " interior columns; " +
                std::to_string(empty_words) + " K_empty words vanish";
    return v;
}

// Every word of length <= max_len over the letters v_g, v_g^* has a Wick
// normal form that agrees with it on the common Fock interior.
template <class T>
CheckVerdict<T> check_wick(const Representation<T>& fock, const IdealEngine& eng, int max_len, Tolerance tol = {}) {
    auto v = detail::named<T>("wick");
    v.stability = {fock.truncation()};
    const Monoid& m = eng.monoid();
    const double dtol = Field<T>::backend == Backend::Exact ? 0.0 : tol.tol;
    std::vector<WickLetter> alphabet;
    for (const auto& g : m.generators())
        for (bool s : {false, true}) alphabet.push_back({g, s});
    std::size_t rewrites = 0;
    for (int len = 1; len <= max_len; ++len) {
        std::vector<std::size_t> at(static_cast<std::size_t>(len), 0);
        while (true) {
            std::vector<WickLetter> w;
            for (auto i : at) w.push_back(alphabet[i]);
            ++v.instances;
            auto nf = wick_normal_form(eng, w);
            if (!nf.ok) {
                v.status = Status::Inconclusive;
                v.message = "Wick rewrite stopped: " + nf.reason;
                return v;
            }
            rewrites += nf.rewrites;
            auto orig_steps = wick_steps(w);
            std::vector<Step> ns;
            if (!nf.zero) ns = {Step{nf.r, 0, false}, Step{nf.s, 0, true}};
            auto orig = eval_steps(fock, orig_steps);
            auto norm = eval_steps(fock, ns);
            if (!orig.ok || !norm.ok) {
                v.status = Status::Inconclusive;
                v.message = "Fock truncation too small for words of length " + std::to_string(len);
                return v;
            }
            std::vector<char> mask(orig.interior.size());
            for (std::size_t j = 0; j < mask.size(); ++j) mask[j] = orig.interior[j] && norm.interior[j];
            bool agree = nf.zero ? orig.value.is_zero_on(orig.interior, dtol) : orig.value.equal_on(norm.value, mask, dtol);
            if (!agree) {
                Expression<T> e = nf.zero ? detail::single<T>(orig_steps) : detail::difference<T>(orig_steps, ns);
                v.status = Status::Violation;
                v.message = "Wick normal form disagrees with the word on the interior";
                v.witness = detail::make_witness(fock, "wick", std::move(e), v.message, tol.tol);
                return v;
            }
            std::size_t c = 0;
            while (c < at.size() && ++at[c] == alphabet.size()) at[c++] = 0;
            if (c == at.size()) break;
        }
    }
    v.notes.push_back({"rewrites", std::to_string(rewrites)});
    v.message = std::to_string(v.instances) + " words reduce to ordered normal forms that agree on the interior";
    return v;
}

}  // namespace pscalc
