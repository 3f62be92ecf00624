#pragma once
// Checkers on representations: representation axioms, the (T1)-(T4)
// conditions, Nica covariance with compact alignment, Wick normal forms,
// the two conditions of the Fock covariance theorem and the kernel-inclusion
// oracle. Every verdict is relative to the truncation and word-length bounds.

#include "pscalc/fock.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

namespace pscalc {

enum class Status { Pass, Inconclusive, Violation };

inline std::string status_name(Status s) {
    switch (s) {
        case Status::Pass: return "pass";
        case Status::Violation: return "violation";
        case Status::Inconclusive: return "inconclusive";
    }
    return "?";
}

inline Status worst(Status a, Status b) { return static_cast<int>(a) >= static_cast<int>(b) ? a : b; }

inline std::string scalar_key(const GaussRat& x) {
    if (x.is_real()) return format_rational(x.re());
    return format_rational(x.re()) + "+" + format_rational(x.im()) + "i";
}
inline std::string scalar_key(const CFloat& x) {
    std::ostringstream os;
    os.precision(17);
    os << x.real() << "," << x.imag();
    return os.str();
}

template <class T>
struct Term {
    T coef;
    std::vector<Step> steps;
};

// A linear combination of operator products.
template <class T>
struct Expression {
    std::vector<Term<T>> terms;
};

template <class T>
struct ExprValue {
    bool ok = true;
    std::string reason;
    SpMat<T> value;
    std::vector<char> interior;  // columns where every term is truncation-free
};

template <class T>
ExprValue<T> eval_expression(const Representation<T>& rep, const Expression<T>& e) {
    ExprValue<T> out;
    out.value = SpMat<T>(rep.dim(), rep.dim());
    out.interior.assign(rep.dim(), 1);
    for (const auto& t : e.terms) {
        auto ev = eval_steps(rep, t.steps);
        if (!ev.ok) {
            out.ok = false;
            out.reason = ev.reason;
            return out;
        }
        out.value = out.value.plus(ev.value, t.coef);
        for (std::size_t j = 0; j < rep.dim(); ++j) out.interior[j] = out.interior[j] && ev.interior[j];
    }
    return out;
}

inline bool any_set(const std::vector<char>& m) {
    for (char c : m)
        if (c) return true;
    return false;
}

// A violation claims that `expr` is nonzero on its interior although the
// condition named by `kind` requires it to vanish. `ideals` carries the
// defining words of the ideals attached to the terms when the kind needs them.
template <class T>
struct Witness {
    std::string kind;
    Expression<T> expr;
    std::vector<Word> ideals;
    std::string detail;
    std::size_t rank = 0;  // rank of the residual on the interior
};

template <class T>
struct CheckVerdict {
    std::string check;
    Status status = Status::Pass;
    std::string message;
    std::optional<Witness<T>> witness;
    std::vector<int> stability;  // truncations at which the verdict held
    std::vector<std::pair<std::string, std::string>> notes;
    std::size_t instances = 0;
};

template <class T>
CheckVerdict<T> combine(const std::string& name, const std::vector<CheckVerdict<T>>& parts) {
    CheckVerdict<T> out;
    out.check = name;
    for (const auto& p : parts) {
        out.instances += p.instances;
        if (static_cast<int>(p.status) > static_cast<int>(out.status)) {
            out.status = p.status;
            out.message = p.check + ": " + p.message;
            out.witness = p.witness;
            out.stability = p.stability;
        }
    }
    if (out.status == Status::Pass) out.message = "all conditions hold";
    return out;
}

// Re-evaluates a witness expression: Violation when it is still nonzero on
// its interior.
template <class T>
Status replay_expression(const Representation<T>& rep, const Expression<T>& e, double tol) {
    auto v = eval_expression(rep, e);
    if (!v.ok || !any_set(v.interior)) return Status::Inconclusive;
    return v.value.is_zero_on(v.interior, tol) ? Status::Pass : Status::Violation;
}

namespace detail {

template <class T>
Witness<T> make_witness(const Representation<T>& rep, std::string kind, Expression<T> e, std::string detail, double tol) {
    Witness<T> w{std::move(kind), std::move(e), {}, std::move(detail), 0};
    auto v = eval_expression(rep, w.expr);
    if (v.ok) w.rank = matrix_rank(v.value, &v.interior, Tolerance{tol, tol * 100});
    return w;
}

template <class T>
Expression<T> single(const std::vector<Step>& s) {
    return Expression<T>{{Term<T>{Field<T>::one(), s}}};
}

template <class T>
Expression<T> difference(const std::vector<Step>& a, const std::vector<Step>& b) {
    return Expression<T>{{Term<T>{Field<T>::one(), a}, Term<T>{-Field<T>::one(), b}}};
}

inline std::vector<Step> concat(std::vector<Step> a, const std::vector<Step>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

}  // namespace detail

// t_r(xi) t_s(eta) = t_rs(xi eta) and t_r(xi)^* t_rs(eta) = t_s(xi^* eta) on
// every ball-composable tuple, compared on the interior of both sides.
// prefix_radius >= 0 restricts r to that length; with r of length <= 1 the
// rest follows by induction once X_g X_r spans X_gr.
template <class T>
CheckVerdict<T> check_rep_axioms(const Representation<T>& rep, Tolerance tol = {}, int prefix_radius = -1) {
    CheckVerdict<T> v;
    v.check = "rep-axioms";
    const FiberAlgebra<T>& fa = rep.fibers();
    const Ball& b = fa.ball();
    const Monoid& m = b.monoid();
    auto fail = [&](Expression<T> e, const std::string& what) {
        v.status = Status::Violation;
        v.message = what;
        v.witness = detail::make_witness(rep, "rep-axiom", std::move(e), what, tol.tol);
        v.stability = {rep.truncation()};
    };
    for (std::size_t r = 0; r < b.size(); ++r) {
        if (prefix_radius >= 0 && b.length(r) > prefix_radius) continue;
        for (std::size_t s = 0; s < b.size(); ++s) {
            auto rs = b.index_of(m.mul(b[r], b[s]));
            if (rs < 0) continue;
            for (std::size_t k = 0; k < fa.dim(r); ++k) {
                for (std::size_t l = 0; l < fa.dim(s); ++l) {
                    ++v.instances;
                    auto c = fa.mul(r, k, s, l);
                    Expression<T> e = detail::single<T>({Step{b[r], int(k), false}, Step{b[s], int(l), false}});
                    for (const auto& [i, x] : c->e) e.terms.push_back({-x, {Step{b[rs], int(i), false}}});
                    auto val = eval_expression(rep, e);
                    if (val.ok && !val.value.is_zero_on(val.interior, tol.tol)) {
                        fail(e, "t_" + m.format(b[r]) + " t_" + m.format(b[s]) + " != t_" + m.format(b[rs]));
                        return v;
                    }
                }
                for (std::size_t l = 0; l < fa.dim(static_cast<std::size_t>(rs)); ++l) {
                    ++v.instances;
                    auto c = fa.adj_mul(r, k, static_cast<std::size_t>(rs), l);
                    if (!c) continue;
                    Expression<T> e = detail::single<T>({Step{b[r], int(k), true}, Step{b[rs], int(l), false}});
                    for (const auto& [i, x] : c->e) e.terms.push_back({-x, {Step{b[s], int(i), false}}});
                    auto val = eval_expression(rep, e);
                    if (val.ok && !val.value.is_zero_on(val.interior, tol.tol)) {
                        fail(e, "t_" + m.format(b[r]) + "^* t_" + m.format(b[rs]) + " != t_" + m.format(b[s]));
                        return v;
                    }
                }
            }
        }
    }
    v.message = "representation axioms hold on the ball";
    v.stability = {rep.truncation()};
    return v;
}

// Ideal membership of every reference-ball element, as a bitmask key.
inline std::vector<char> ideal_profile(const IdealEngine& eng, const Ideal& x) {
    const Ball& b = eng.reference();
    std::vector<char> out(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) out[i] = eng.member(b[i], x);
    return out;
}

// (T1)-(T4) for a semigroup representation on the neutral lattice. (T4)
// instances are found from the lattice: for each ideal, a pair of proper
// sub-ideals whose union is the ideal on the reference ball, else the set of
// all maximal proper sub-ideals when their union is the ideal.
template <class T>
std::vector<CheckVerdict<T>> check_T_conditions(const Representation<T>& rep, const IdealEngine& eng,
                                                const NeutralLattice& lat, Tolerance tol = {}) {
    const Monoid& m = eng.monoid();
    std::vector<CheckVerdict<T>> out(4);
    for (int i = 0; i < 4; ++i) out[i].check = "T" + std::to_string(i + 1);
    const int L = rep.truncation();
    auto violate = [&](CheckVerdict<T>& v, Expression<T> e, const std::string& msg, std::vector<Word> ideals = {}) {
        v.status = Status::Violation;
        v.message = msg;
        v.witness = detail::make_witness(rep, v.check, std::move(e), msg, tol.tol);
        v.witness->ideals = std::move(ideals);
        v.stability = {L};
    };
    auto word_steps = [](const Word& w) { return steps_of(semigroup_word(w)); };
    auto inconclusive = [&](CheckVerdict<T>& v, const std::string& why) {
        if (v.status == Status::Pass) {
            v.status = Status::Inconclusive;
            v.message = why;
        }
    };

    // T1
    {
        auto& v = out[0];
        v.instances = 1;
        auto ev = eval_steps(rep, {Step{m.identity(), 0, false}});
        if (!ev.value.equal_on(SpMat<T>::identity(rep.dim()), std::vector<char>(rep.dim(), 1), tol.tol))
            violate(v, detail::difference<T>({Step{m.identity(), 0, false}}, {}), "w_e is not the identity");
    }
    // T2, T3
    for (const auto& entry : lat.entries) {
        bool empty = eng.is_empty(entry.ideal).status == EmptyStatus::Empty;
        const Word& first = entry.words.front();
        for (const auto& w : entry.words) {
            if (empty) {
                auto& v = out[1];
                if (v.status == Status::Violation) break;
                ++v.instances;
                auto ev = eval_operator_word(rep, semigroup_word(w));
                if (!ev.ok || !any_set(ev.interior)) {
                    inconclusive(v, "interior empty for " + format_word(m, w));
                    continue;
                }
                if (!ev.value.is_zero_on(ev.interior, tol.tol))
                    violate(v, detail::single<T>(word_steps(w)), "w_alpha != 0 with K(alpha) empty: " + format_word(m, w),
                            {w});
            } else if (!(w == first)) {
                auto& v = out[2];
                if (v.status == Status::Violation) break;
                ++v.instances;
                auto e = detail::difference<T>(word_steps(first), word_steps(w));
                auto val = eval_expression(rep, e);
                if (!val.ok || !any_set(val.interior)) {
                    inconclusive(v, "interior empty for " + format_word(m, w));
                    continue;
                }
                if (!val.value.is_zero_on(val.interior, tol.tol))
                    violate(v, e, "w_alpha != w_beta with equal ideals: " + format_word(m, first) + " vs " + format_word(m, w),
                            {first, w});
            }
        }
    }
    // T4
    {
        auto& v = out[3];
        std::vector<std::vector<char>> prof;
        for (const auto& e : lat.entries) prof.push_back(ideal_profile(eng, e.ideal));
        auto subset = [](const std::vector<char>& a, const std::vector<char>& b) {
            for (std::size_t i = 0; i < a.size(); ++i)
                if (a[i] && !b[i]) return false;
            return true;
        };
        // Shortest word of an entry: total length, then number of pairs.
        auto rank_of_word = [&](const Word& w) {
            int l = word_length(eng.reference(), w);
            return std::make_pair(l < 0 ? 1 << 30 : l, w.pairs.size());
        };
        auto shortest = [&](const LatticeEntry& e) {
            const Word* best = &e.words.front();
            for (const auto& w : e.words)
                if (rank_of_word(w) < rank_of_word(*best)) best = &w;
            return *best;
        };
        std::vector<std::size_t> order(lat.entries.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        // Shorter words first; among equals, larger ideals first.
        auto weight = [&](std::size_t i) {
            auto [l, n] = rank_of_word(shortest(lat.entries[i]));
            long members = std::count(prof[i].begin(), prof[i].end(), 1);
            return std::make_tuple(l, n, -members);
        };
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return weight(a) < weight(b); });
        for (std::size_t xi = 0; xi < order.size() && v.status != Status::Violation; ++xi) {
            const std::size_t x = order[xi];
            if (!any_set(prof[x])) continue;
            std::vector<std::size_t> proper;
            for (std::size_t y : order)
                if (y != x && any_set(prof[y]) && subset(prof[y], prof[x]) && prof[y] != prof[x]) proper.push_back(y);
            auto covers = [&](const std::vector<std::size_t>& f) {
                for (std::size_t i = 0; i < prof[x].size(); ++i) {
                    if (!prof[x][i]) continue;
                    bool hit = false;
                    for (auto y : f) hit = hit || prof[y][i];
                    if (!hit) return false;
                }
                return true;
            };
            std::vector<std::size_t> family;
            for (std::size_t a = 0; a < proper.size() && family.empty(); ++a)
                for (std::size_t c = a + 1; c < proper.size() && family.empty(); ++c)
                    if (covers({proper[a], proper[c]})) family = {proper[a], proper[c]};
            if (family.empty()) {
                std::vector<std::size_t> maximal;
                for (auto y : proper) {
                    bool is_max = true;
                    for (auto z : proper)
                        if (z != y && subset(prof[y], prof[z]) && prof[y] != prof[z]) is_max = false;
                    if (is_max) maximal.push_back(y);
                }
                if (maximal.size() >= 2 && covers(maximal)) family = maximal;
            }
            if (family.empty()) continue;
            ++v.instances;
            Word alpha = shortest(lat.entries[x]);
            std::vector<Word> betas;
            for (auto y : family) betas.push_back(shortest(lat.entries[y]));
            // Expand prod_beta (w_alpha - w_beta) into signed products.
            Expression<T> e;
            for (std::size_t mask = 0; mask < (std::size_t(1) << betas.size()); ++mask) {
                std::vector<Step> steps;
                T sign = Field<T>::one();
                for (std::size_t i = 0; i < betas.size(); ++i) {
                    if (mask >> i & 1) {
                        steps = detail::concat(steps, word_steps(betas[i]));
                        sign = -sign;
                    } else {
                        steps = detail::concat(steps, word_steps(alpha));
                    }
                }
                e.terms.push_back({sign, steps});
            }
            auto val = eval_expression(rep, e);
            if (!val.ok || !any_set(val.interior)) {
                inconclusive(v, "interior empty for the family of " + format_word(m, alpha));
                continue;
            }
            if (!val.value.is_zero_on(val.interior, tol.tol)) {
                std::string msg = "prod (w_alpha - w_beta) != 0 for alpha = " + format_word(m, alpha) + ", F = {";
                for (std::size_t i = 0; i < betas.size(); ++i) msg += (i ? ", " : "") + format_word(m, betas[i]);
                msg += "}";
                std::vector<Word> ids{alpha};
                ids.insert(ids.end(), betas.begin(), betas.end());
                violate(v, e, msg, ids);
            }
        }
    }
    for (auto& v : out) {
        if (v.status == Status::Pass) v.message = std::to_string(v.instances) + " instances hold";
        if (v.stability.empty()) v.stability = {L};
    }
    return out;
}

// Rank-one products lambda(xi)lambda(eta)^* over X_p, as step lists.
template <class T>
std::vector<std::vector<Step>> rank_ones(const FiberAlgebra<T>& fa, const Elem& p) {
    std::vector<std::vector<Step>> out;
    auto r = fa.ball().index_of(p);
    if (r < 0) return out;
    std::size_t d = fa.dim(static_cast<std::size_t>(r));
    for (std::size_t k = 0; k < d; ++k)
        for (std::size_t l = 0; l < d; ++l) out.push_back({Step{p, int(k), false}, Step{p, int(l), true}});
    return out;
}

namespace detail {

struct NicaInstance {
    Elem p, q;
    std::optional<Elem> w;  // pP cap qP = wP, nullopt when empty
};

inline std::vector<NicaInstance> nica_instances(const IdealEngine& eng, int W) {
    const Monoid& m = eng.monoid();
    auto lcm = is_right_lcm_up_to(eng, std::max(1, W / 2));
    if (lcm.status == LcmStatus::No)
        throw StructuralError("Nica covariance needs a right LCM monoid; " + m.format(lcm.witness_pair->first) + " and " +
                              m.format(lcm.witness_pair->second) +
                              " have no least common multiple. Use the T-conditions or the Fock covariance check instead.");
    Ball b(m, std::max(1, W / 2));
    std::vector<NicaInstance> out;
    for (const auto& e : lcm.table) out.push_back({b[e.p], b[e.q], e.join});
    return out;
}

}  // namespace detail

// Solves lambda(xi)lambda(eta)^* lambda(xi')lambda(eta')^* = sum c lambda(zeta)lambda(theta)^*
// over X_w on the Fock interior. Returns the coefficients per rank-one of X_w,
// or nullopt when the product is outside that span.
template <class T>
struct AlignmentSolution {
    bool ok = true;
    std::vector<std::vector<Step>> basis;  // rank-ones of X_w
    std::optional<SparseVec<T>> coeffs;
    std::vector<char> mask;
};

template <class T>
AlignmentSolution<T> solve_alignment(const Representation<T>& fock, const std::vector<Step>& lhs, const std::optional<Elem>& w,
                                     Tolerance tol) {
    AlignmentSolution<T> s;
    auto ev = eval_steps(fock, lhs);
    if (!ev.ok) {
        s.ok = false;
        return s;
    }
    s.mask = ev.interior;
    std::vector<SpMat<T>> vals;
    if (w) {
        s.basis = rank_ones(fock.fibers(), *w);
        for (const auto& st : s.basis) {
            auto e = eval_steps(fock, st);
            if (!e.ok) {
                s.ok = false;
                return s;
            }
            for (std::size_t j = 0; j < s.mask.size(); ++j) s.mask[j] = s.mask[j] && e.interior[j];
            vals.push_back(std::move(e.value));
        }
    }
    if (!any_set(s.mask)) {
        s.ok = false;
        return s;
    }
    Span<T> span(tol);
    for (const auto& v : vals) span.insert(v.vectorize(&s.mask));
    s.coeffs = span.coords(ev.value.vectorize(&s.mask));
    return s;
}

// The lambda-side inclusion: products of rank-ones over X_p and X_q lie in
// the span of rank-ones over X_w (zero when pP cap qP is empty).
template <class T>
CheckVerdict<T> check_compact_alignment(const Representation<T>& fock, const IdealEngine& eng, int W, Tolerance tol = {}) {
    CheckVerdict<T> v;
    v.check = "compact-alignment";
    const Monoid& m = eng.monoid();
    for (const auto& inst : detail::nica_instances(eng, W)) {
        for (const auto& a : rank_ones(fock.fibers(), inst.p)) {
            for (const auto& c : rank_ones(fock.fibers(), inst.q)) {
                ++v.instances;
                auto lhs = detail::concat(a, c);
                auto sol = solve_alignment(fock, lhs, inst.w, tol);
                if (!sol.ok) {
                    if (v.status == Status::Pass) {
                        v.status = Status::Inconclusive;
                        v.message = "Fock interior empty for " + m.format(inst.p) + ", " + m.format(inst.q);
                    }
                    continue;
                }
                if (!sol.coeffs) {
                    v.status = Status::Violation;
                    v.message = "product over " + m.format(inst.p) + ", " + m.format(inst.q) + " is not in the span over " +
                                (inst.w ? m.format(*inst.w) : std::string("(empty)"));
                    Expression<T> e = detail::single<T>(lhs);
                    v.witness = detail::make_witness(fock, "compact-alignment", e, v.message, tol.tol);
                    v.stability = {fock.truncation()};
                    return v;
                }
            }
        }
    }
    if (v.status == Status::Pass) v.message = std::to_string(v.instances) + " products aligned";
    v.stability = {fock.truncation()};
    return v;
}

// Nica covariance of rep, with the coefficients solved in the Fock
// representation built on the same product system.
template <class T>
CheckVerdict<T> check_nica(const Representation<T>& rep, const Representation<T>& fock, const IdealEngine& eng, int W,
                           Tolerance tol = {}) {
    CheckVerdict<T> v;
    v.check = "nica";
    const Monoid& m = eng.monoid();
    for (const auto& inst : detail::nica_instances(eng, W)) {
        for (const auto& a : rank_ones(rep.fibers(), inst.p)) {
            for (const auto& c : rank_ones(rep.fibers(), inst.q)) {
                ++v.instances;
                auto lhs = detail::concat(a, c);
                auto sol = solve_alignment(fock, lhs, inst.w, tol);
                if (!sol.ok) {
                    if (v.status == Status::Pass) {
                        v.status = Status::Inconclusive;
                        v.message = "Fock interior empty for " + m.format(inst.p) + ", " + m.format(inst.q);
                    }
                    continue;
                }
                Expression<T> e = detail::single<T>(lhs);
                if (!sol.coeffs) {
                    v.status = Status::Violation;
                    v.message = "compact alignment fails for " + m.format(inst.p) + ", " + m.format(inst.q);
                    v.witness = detail::make_witness(fock, "compact-alignment", e, v.message, tol.tol);
                    v.stability = {rep.truncation()};
                    return v;
                }
                for (const auto& [i, x] : sol.coeffs->e) e.terms.push_back({-x, sol.basis[i]});
                auto val = eval_expression(rep, e);
                if (!val.ok || !any_set(val.interior)) {
                    if (v.status == Status::Pass) {
                        v.status = Status::Inconclusive;
                        v.message = "interior empty for " + m.format(inst.p) + ", " + m.format(inst.q);
                    }
                    continue;
                }
                if (!val.value.is_zero_on(val.interior, tol.tol)) {
                    v.status = Status::Violation;
                    v.message = "Nica relation fails for p = " + m.format(inst.p) + ", q = " + m.format(inst.q) +
                                (inst.w ? ", w = " + m.format(*inst.w) : std::string(", pP cap qP empty"));
                    v.witness = detail::make_witness(rep, "nica", e, v.message, tol.tol);
                    v.stability = {rep.truncation()};
                    return v;
                }
            }
        }
    }
    if (v.status == Status::Pass) v.message = std::to_string(v.instances) + " Nica relations hold";
    v.stability = {rep.truncation()};
    return v;
}

// Symbolic Wick ordering of X_P monomials.
struct WickLetter {
    Elem p;
    bool star = false;
};

struct WickResult {
    bool ok = true;      // false: an LCM lookup failed
    std::string reason;
    bool zero = false;
    Elem r, s;           // t_r t_s^*
    int rewrites = 0;
};

inline WickResult wick_normal_form(const IdealEngine& eng, std::vector<WickLetter> w) {
    const Monoid& m = eng.monoid();
    WickResult res;
    auto merge = [&] {
        std::vector<WickLetter> out;
        for (auto& l : w) {
            if (l.p == m.identity()) continue;
            if (!out.empty() && out.back().star == l.star) {
                out.back().p = l.star ? m.mul(l.p, out.back().p) : m.mul(out.back().p, l.p);
            } else {
                out.push_back(l);
            }
        }
        w = std::move(out);
    };
    merge();
    while (true) {
        std::size_t i = 0;
        while (i + 1 < w.size() && !(w[i].star && !w[i + 1].star)) ++i;
        if (i + 1 >= w.size()) break;
        const Elem p = w[i].p, q = w[i + 1].p;
        Ideal cap = eng.intersect(eng.principal(p), eng.principal(q));
        ++res.rewrites;
        if (eng.is_empty(cap).status == EmptyStatus::Empty) {
            res.zero = true;
            return res;
        }
        auto g = eng.principal_generator(cap);
        if (!g) {
            res.ok = false;
            res.reason = "no least common multiple found for " + m.format(p) + ", " + m.format(q);
            return res;
        }
        w[i] = {m.mul(m.inv(p), *g), false};
        w[i + 1] = {m.mul(m.inv(q), *g), true};
        merge();
    }
    res.r = m.identity();
    res.s = m.identity();
    for (const auto& l : w) (l.star ? res.s : res.r) = l.p;
    return res;
}

inline std::vector<Step> wick_steps(const std::vector<WickLetter>& w) {
    std::vector<Step> out;
    for (const auto& l : w) out.push_back({l.p, 0, l.star});
    return out;
}

// ---- Fock covariance conditions ------------------------------------------

template <class T>
using RepFactory = std::function<std::shared_ptr<Representation<T>>(int L)>;

struct FockCovBounds {
    int W = 4;
    int L = 8;
    int L_big = 12;
    int step = 2;
};

namespace detail {

template <class T>
struct Unknown {
    OperatorWord word;
    std::size_t ideal;
};

// Core words for every ideal of the family, keeping one word per group of
// words that agree on their common interior in `probe`.
template <class T>
std::vector<Unknown<T>> core_unknowns(const Representation<T>& probe, const IdealEngine& eng, const NeutralLattice& lat,
                                      const IdealFamily& fam, double tol) {
    std::vector<Unknown<T>> out;
    for (std::size_t i = 0; i < fam.ideals.size(); ++i) {
        std::vector<std::pair<SpMat<T>, std::vector<char>>> reps;
        for (auto& w : enumerate_core_words(eng, lat, fam.ideals[i], probe.fibers())) {
            auto ev = eval_operator_word(probe, w);
            bool dup = false;
            if (ev.ok) {
                for (const auto& [val, mask] : reps) {
                    std::vector<char> both(mask.size());
                    for (std::size_t j = 0; j < both.size(); ++j) both[j] = mask[j] && ev.interior[j];
                    if (val.equal_on(ev.value, both, tol) && both == ev.interior && both == mask) {
                        dup = true;
                        break;
                    }
                }
                if (!dup) reps.emplace_back(ev.value, ev.interior);
            }
            if (!dup) out.push_back({std::move(w), i});
        }
    }
    return out;
}

// Hypothesis vectors: for each unknown u, the concatenation over constraints
// (S, v) of [u in S] t(omega_u) v, where S is the set of family members
// containing some r and v a column of t_r(xi). Constraints touching a
// non-interior column of any involved word are dropped.
template <class T>
struct Hypothesis {
    bool ok = true;
    std::string reason;
    std::vector<SparseVec<T>> vectors;
    std::size_t constraints = 0;
};

template <class T>
Hypothesis<T> hypothesis_vectors(const Representation<T>& big, const IdealEngine& eng, const std::vector<Ideal>& ideals,
                                 const std::vector<Unknown<T>>& unk) {
    Hypothesis<T> h;
    std::vector<SpMat<T>> M;
    std::vector<std::vector<char>> mask;
    for (const auto& u : unk) {
        auto ev = eval_operator_word(big, u.word);
        if (!ev.ok) {
            h.ok = false;
            h.reason = ev.reason;
            return h;
        }
        M.push_back(std::move(ev.value));
        mask.push_back(std::move(ev.interior));
    }
    const FiberAlgebra<T>& fa = big.fibers();
    const Ball& b = fa.ball();
    std::map<std::pair<std::vector<char>, std::string>, std::pair<std::vector<char>, SparseVec<T>>> cons;
    for (std::size_t r = 0; r < b.size(); ++r) {
        std::vector<char> sig(ideals.size());
        bool any = false;
        for (std::size_t i = 0; i < ideals.size(); ++i) any = (sig[i] = eng.member(b[r], ideals[i])) || any;
        if (!any) continue;
        for (std::size_t k = 0; k < fa.dim(r); ++k) {
            const auto& C = big.create(r, k);
            auto cm = big.interior({Step{b[r], int(k), false}});
            for (std::size_t j = 0; j < C.cols(); ++j) {
                if (!cm[j] || C.col(j).empty()) continue;
                std::string key;
                for (const auto& [i, x] : C.col(j).e) key += std::to_string(i) + ":" + scalar_key(x) + ";";
                cons.emplace(std::make_pair(sig, key), std::make_pair(sig, C.col(j)));
            }
        }
    }
    const std::size_t N = big.dim();
    std::vector<std::vector<std::pair<std::size_t, T>>> raw(unk.size());
    std::size_t block = 0;
    for (const auto& [key, sv] : cons) {
        const auto& [sig, v] = sv;
        bool reliable = true;
        for (std::size_t u = 0; u < unk.size() && reliable; ++u) {
            if (!sig[unk[u].ideal]) continue;
            for (const auto& [i, x] : v.e) reliable = reliable && mask[u][i];
        }
        if (!reliable) continue;
        for (std::size_t u = 0; u < unk.size(); ++u) {
            if (!sig[unk[u].ideal]) continue;
            for (const auto& [i, x] : v.e)
                for (const auto& [row, y] : M[u].col(i).e) raw[u].emplace_back(block * N + row, y * x);
        }
        ++block;
    }
    h.constraints = block;
    for (auto& r : raw) h.vectors.push_back(make_sparse(std::move(r)));
    return h;
}

template <class T>
Expression<T> combination(const SparseVec<T>& n, const std::vector<Unknown<T>>& unk) {
    Expression<T> e;
    for (const auto& [u, c] : n.e) e.terms.push_back({c, steps_of(unk[u].word)});
    return e;
}

template <class T>
SparseVec<T> hypothesis_residual(const Hypothesis<T>& h, const SparseVec<T>& n) {
    SparseVec<T> acc;
    for (const auto& [u, c] : n.e) acc = axpy(acc, c, h.vectors[u]);
    return acc;
}

}  // namespace detail

// Outcome of the (ii)-style search: null combinations of the hypothesis whose
// conclusion fails on the interior of `small`.
template <class T>
struct ConclusionSearch {
    Status status = Status::Pass;
    std::string message;
    std::optional<SparseVec<T>> witness;
    std::size_t nullity = 0;
    std::size_t unknowns = 0;
    std::size_t constraints = 0;
};

namespace detail {

template <class T>
ConclusionSearch<T> search_conclusion(const Representation<T>& small, const std::vector<SparseVec<T>>& hyp,
                                      const std::vector<Unknown<T>>& unk, Tolerance tol) {
    ConclusionSearch<T> cs;
    cs.unknowns = unk.size();
    auto null = nullspace(hyp, tol);
    cs.nullity = null.size();
    for (const auto& n : null) {
        auto val = eval_expression(small, combination(n, unk));
        if (!val.ok || !any_set(val.interior)) {
            if (cs.status == Status::Pass) {
                cs.status = Status::Inconclusive;
                cs.message = "interior too small for the core words; increase the truncation";
            }
            continue;
        }
        if (!val.value.is_zero_on(val.interior, tol.tol)) {
            cs.status = Status::Violation;
            cs.witness = n;
            return cs;
        }
    }
    return cs;
}

}  // namespace detail

// The two conditions of the Fock covariance theorem. (i): every K_empty word
// vanishes. (ii): on the cap-closure of the lattice ideals, every combination
// of core words satisfying the hypothesis on Ball(L_big) has vanishing sum on
// the interior at L. Violations of (ii) must survive one growth step of both
// balls, else the verdict is inconclusive.
template <class T>
CheckVerdict<T> check_theoremA(const RepFactory<T>& factory, const Monoid& m, FockCovBounds bd, Tolerance tol = {}) {
    CheckVerdict<T> v;
    v.check = "theorem-a";
    auto small = factory(bd.L);
    auto big = factory(bd.L_big);
    if (small->declared_grading)
        v.notes.push_back({"assumption", "equivariance declared: " + *small->declared_grading});
    else
        v.notes.push_back({"assumption", "equivariance not declared; assumed"});
    v.notes.push_back({"word-length bound", std::to_string(bd.W)});

    auto axioms = check_rep_axioms(*small, tol, 1);
    v.notes.push_back({"axioms", "checked for generator-prefixed tuples"});
    if (axioms.status != Status::Pass) {
        v.status = Status::Inconclusive;
        v.message = "precondition failed (representation axioms): " + axioms.message;
        return v;
    }
    // Injectivity on A.
    {
        const FiberAlgebra<T>& fa = small->fibers();
        std::vector<SparseVec<T>> as;
        for (std::size_t k = 0; k < fa.dim(0); ++k) as.push_back(small->create(0, k).vectorize());
        if (rank_of(as, tol) != fa.dim(0)) {
            v.status = Status::Inconclusive;
            v.message = "precondition failed: representation is not injective on A";
            return v;
        }
    }

    Ball ref(m, std::max(bd.L_big + bd.step, 2 * bd.W));
    IdealEngine eng(m, ref);
    Ball letters(m, bd.W);
    auto lat = build_lattice(eng, letters, bd.W);

    // (i)
    for (const auto& entry : lat.entries) {
        if (eng.is_empty(entry.ideal).status != EmptyStatus::Empty) continue;
        for (const auto& w : entry.words) {
            for (const auto& ow : instantiate(w, small->fibers())) {
                ++v.instances;
                auto ev = eval_operator_word(*small, ow);
                if (!ev.ok || !any_set(ev.interior)) {
                    if (v.status == Status::Pass) {
                        v.status = Status::Inconclusive;
                        v.message = "(i): interior empty for " + format_operator_word(m, ow);
                    }
                    continue;
                }
                if (!ev.value.is_zero_on(ev.interior, tol.tol)) {
                    v.status = Status::Violation;
                    v.message = "(i): K_empty word " + format_operator_word(m, ow) + " does not vanish";
                    v.witness = detail::make_witness(*small, "theorem-a-i", detail::single<T>(steps_of(ow)), v.message, tol.tol);
                    v.witness->ideals = {w};
                    v.stability = {bd.L};
                    return v;
                }
            }
        }
    }

    // (ii)
    std::vector<Ideal> base;
    for (const auto& e : lat.entries)
        if (eng.is_empty(e.ideal).status != EmptyStatus::Empty) base.push_back(e.ideal);
    auto fam = eng.cap_closure(base);
    std::vector<Ideal> members;
    for (const auto& x : fam.ideals)
        if (eng.is_empty(x).status != EmptyStatus::Empty) members.push_back(x);
    IdealFamily nonempty{members, true};
    auto unk = detail::core_unknowns(*big, eng, lat, nonempty, tol.tol);
    auto hyp = detail::hypothesis_vectors(*big, eng, members, unk);
    if (!hyp.ok) {
        v.status = Status::Inconclusive;
        v.message = "(ii): " + hyp.reason;
        return v;
    }
    auto cs = detail::search_conclusion(*small, hyp.vectors, unk, tol);
    v.instances += unk.size();
    v.notes.push_back({"family size", std::to_string(members.size())});
    v.notes.push_back({"core words", std::to_string(unk.size())});
    v.notes.push_back({"hypothesis constraints", std::to_string(hyp.constraints)});
    v.notes.push_back({"null combinations", std::to_string(cs.nullity)});
    if (cs.status == Status::Violation) {
        // Double-ball: the same combination at grown balls.
        auto small2 = factory(bd.L + bd.step);
        auto big2 = factory(bd.L_big + bd.step);
        auto hyp2 = detail::hypothesis_vectors(*big2, eng, members, unk);
        bool stable = hyp2.ok && detail::hypothesis_residual(hyp2, *cs.witness).empty() &&
                      replay_expression(*small2, detail::combination(*cs.witness, unk), tol.tol) == Status::Violation;
        auto e = detail::combination(*cs.witness, unk);
        if (!stable) {
            v.status = Status::Inconclusive;
            v.message = "(ii): violation at L=" + std::to_string(bd.L) + " did not survive growth to L=" +
                        std::to_string(bd.L + bd.step);
            v.stability = {bd.L};
            return v;
        }
        v.status = Status::Violation;
        v.message = "(ii): a combination of core words satisfies the hypothesis but its sum does not vanish";
        v.witness = detail::make_witness(*small, "theorem-a-ii", e, v.message, tol.tol);
        for (const auto& [u, c] : cs.witness->e) v.witness->ideals.push_back(members[unk[u].ideal].word);
        v.stability = {bd.L, bd.L + bd.step};
        return v;
    }
    if (cs.status == Status::Inconclusive && v.status == Status::Pass) {
        v.status = Status::Inconclusive;
        v.message = "(ii): " + cs.message;
    }
    if (v.status == Status::Pass) v.message = "conditions (i) and (ii) hold up to W=" + std::to_string(bd.W);
    v.stability = {bd.L};
    return v;
}

// Re-checks the hypothesis of a (ii) witness on a ball: the terms' words with
// their attached ideals must satisfy the hypothesis exactly.
template <class T>
bool theoremA_hypothesis_holds(const Representation<T>& big, const IdealEngine& eng, const Witness<T>& w) {
    std::vector<Ideal> members;
    std::map<std::string, std::size_t> index;
    std::vector<detail::Unknown<T>> unk;
    SparseVec<T> n;
    std::vector<std::pair<std::size_t, T>> raw;
    for (std::size_t t = 0; t < w.expr.terms.size(); ++t) {
        Ideal x = eng.K_of_word(w.ideals.at(t));
        auto key = eng.key(x);
        if (!index.count(key)) {
            index[key] = members.size();
            members.push_back(x);
        }
        // Terms were produced from operator words; rebuild them from the steps.
        OperatorWord ow;
        const auto& st = w.expr.terms[t].steps;
        std::size_t i = 0;
        const Monoid& m = eng.monoid();
        while (i < st.size()) {
            Elem p = m.identity(), q = m.identity();
            int cp = -1, cq = -1;
            if (st[i].star) {
                p = st[i].p;
                cp = st[i].k;
                ++i;
            }
            if (i < st.size() && !st[i].star) {
                q = st[i].p;
                cq = st[i].k;
                ++i;
            }
            ow.word.pairs.push_back({p, q});
            ow.cp.push_back(cp);
            ow.cq.push_back(cq);
        }
        if (!ow.word.pairs.empty()) {
            ow.word.eps_left = ow.cp.front() >= 0;
            ow.word.eps_right = ow.cq.back() >= 0;
        }
        unk.push_back({ow, index[key]});
        raw.emplace_back(t, w.expr.terms[t].coef);
    }
    n = make_sparse(std::move(raw));
    auto hyp = detail::hypothesis_vectors(big, eng, members, unk);
    return hyp.ok && detail::hypothesis_residual(hyp, n).empty();
}

// Kernel inclusion: combinations of B-core words killed by lambda on its
// interior must be killed by the representation. Lambda's relations are
// computed on Ball(L_big) and re-certified after one growth step.
template <class T>
CheckVerdict<T> check_kernel_inclusion(const RepFactory<T>& factory, const RepFactory<T>& fock_factory, const Monoid& m,
                                       FockCovBounds bd, Tolerance tol = {}) {
    CheckVerdict<T> v;
    v.check = "kernel-inclusion";
    v.notes.push_back({"word-length bound", std::to_string(bd.W)});
    auto small = factory(bd.L);
    auto lam = fock_factory(bd.L_big);
    Ball ref(m, std::max(bd.L_big + bd.step, 2 * bd.W));
    IdealEngine eng(m, ref);
    Ball letters(m, bd.W);
    auto lat = build_lattice(eng, letters, bd.W);
    std::vector<Ideal> base;
    for (const auto& e : lat.entries) base.push_back(e.ideal);
    auto fam = eng.cap_closure(base);
    auto unk = detail::core_unknowns(*lam, eng, lat, fam, tol.tol);

    auto lambda_vectors = [&](const Representation<T>& fock, std::vector<SparseVec<T>>& out) -> bool {
        std::vector<SpMat<T>> vals;
        std::vector<char> mask(fock.dim(), 1);
        for (const auto& u : unk) {
            auto ev = eval_operator_word(fock, u.word);
            if (!ev.ok) return false;
            for (std::size_t j = 0; j < mask.size(); ++j) mask[j] = mask[j] && ev.interior[j];
            vals.push_back(std::move(ev.value));
        }
        if (!any_set(mask)) return false;
        for (const auto& x : vals) out.push_back(x.vectorize(&mask));
        return true;
    };
    std::vector<SparseVec<T>> lv;
    if (!lambda_vectors(*lam, lv)) {
        v.status = Status::Inconclusive;
        v.message = "Fock interior too small for the core words";
        return v;
    }
    auto cs = detail::search_conclusion(*small, lv, unk, tol);
    v.instances = unk.size();
    v.notes.push_back({"core words", std::to_string(unk.size())});
    v.notes.push_back({"lambda null combinations", std::to_string(cs.nullity)});
    if (cs.status == Status::Violation) {
        auto lam2 = fock_factory(bd.L_big + bd.step);
        auto small2 = factory(bd.L + bd.step);
        auto e = detail::combination(*cs.witness, unk);
        bool stable = replay_expression(*lam2, e, tol.tol) == Status::Pass &&
                      replay_expression(*small2, e, tol.tol) == Status::Violation;
        if (!stable) {
            v.status = Status::Inconclusive;
            v.message = "kernel violation did not survive ball growth";
            v.stability = {bd.L};
            return v;
        }
        v.status = Status::Violation;
        v.message = "a B-core element in the kernel of lambda is not in the kernel of the representation";
        v.witness = detail::make_witness(*small, "kernel-inclusion", e, v.message, tol.tol);
        v.stability = {bd.L, bd.L + bd.step};
        return v;
    }
    v.status = cs.status;
    v.message = cs.status == Status::Pass ? "ker lambda is contained in ker t on the B-core" : cs.message;
    v.stability = {bd.L};
    return v;
}

}  // namespace pscalc
