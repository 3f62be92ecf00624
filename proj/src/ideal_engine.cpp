#include "pscalc/ideal.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>

namespace pscalc {

namespace {

using i128 = __int128;

long long fit(i128 x) {
    if (x > std::numeric_limits<long long>::max() || x < std::numeric_limits<long long>::min())
        throw ResourceError("ideal datum overflows 64 bits");
    return static_cast<long long>(x);
}
long long pmod(i128 a, i128 m) {
    i128 r = a % m;
    return fit(r < 0 ? r + m : r);
}
i128 ceil_div(i128 a, i128 b) {  // b > 0
    i128 q = a / b;
    if (q * b < a) ++q;
    return q;
}
long long lcm64(long long a, long long b) { return fit(static_cast<i128>(a) / std::gcd(a, b) * b); }

// Extended gcd for the congruence solver.
i128 egcd(i128 a, i128 b, i128& x, i128& y) {
    if (b == 0) {
        x = 1;
        y = 0;
        return a;
    }
    i128 x1, y1;
    i128 g = egcd(b, a % b, x1, y1);
    x = y1;
    y = x1 - (a / b) * y1;
    return g;
}

// Smallest value >= lo congruent to res mod m.
long long lift(long long lo, long long res, long long m) {
    i128 d = pmod(static_cast<i128>(res) - lo, m);
    return fit(static_cast<i128>(lo) + d);
}

backend::Affine normalize(backend::Affine a) {
    a.res = pmod(a.res, a.m);
    if (a.bounded) a.lo = lift(a.lo, a.res, a.m);
    return a;
}

bool is_prefix(const std::vector<long long>& u, const std::vector<long long>& v) {
    return u.size() <= v.size() && std::equal(u.begin(), u.end(), v.begin());
}

backend::Numerical canonical(const Monoid& m, backend::Numerical z) {
    std::sort(z.below.begin(), z.below.end());
    z.below.erase(std::unique(z.below.begin(), z.below.end()), z.below.end());
    while (z.threshold - 1 >= m.conductor() && !z.below.empty() && z.below.back() == z.threshold - 1) {
        z.below.pop_back();
        --z.threshold;
    }
    return z;
}

bool num_member(const backend::Numerical& z, long long n) {
    if (n >= z.threshold) return true;
    return std::binary_search(z.below.begin(), z.below.end(), n);
}

}  // namespace

IdealEngine::IdealEngine(const Monoid& m, const Ball& reference, bool force_generic)
    : m_(&m), ref_(&reference), generic_(force_generic || m.family() == Family::Custom) {}

Ideal IdealEngine::generic_from_word(const Word& w) const {
    backend::Generic g{std::vector<char>(ref_->size(), 0), ref_->radius()};
    for (std::size_t i = 0; i < ref_->size(); ++i) g.chi[i] = chain_member(*m_, w, (*ref_)[i]) ? 1 : 0;
    return Ideal{w, g};
}

Ideal IdealEngine::whole() const {
    Word w;
    w.pairs.emplace_back(m_->identity(), m_->identity());
    w.eps_left = w.eps_right = false;
    if (generic_) return generic_from_word(w);
    switch (m_->family()) {
        case Family::LatticeCone: return Ideal{w, backend::Lattice{std::vector<long long>(m_->rank(), 0)}};
        case Family::FreeMonoid: return Ideal{w, backend::Free{{}}};
        case Family::NumericalSemigroup: {
            backend::Numerical z{m_->conductor(), {}};
            for (long long n = 0; n < z.threshold; ++n)
                if (m_->in_monoid(m_->integer(n))) z.below.push_back(n);
            return Ideal{w, canonical(*m_, z)};
        }
        case Family::Affine:
            return Ideal{w, backend::Affine{!m_->affine_full(), 0, 0, 1, 1}};
        case Family::Custom: break;
    }
    return generic_from_word(w);
}

Ideal IdealEngine::left_mult(const Elem& p, const Ideal& z) const {
    Word pw;
    pw.pairs.emplace_back(p, m_->identity());
    Word w = compose(pw, z.word);
    if (generic_) return generic_from_word(w);
    return std::visit(
        [&](const auto& d) -> Ideal {
            using D = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<D, backend::Empty>) {
                return Ideal{w, d};
            } else if constexpr (std::is_same_v<D, backend::Lattice>) {
                backend::Lattice r = d;
                for (int i = 0; i < m_->rank(); ++i) r.w[i] += p.v[i];
                return Ideal{w, r};
            } else if constexpr (std::is_same_v<D, backend::Free>) {
                return Ideal{w, backend::Free{m_->mul(p, Elem{Family::FreeMonoid, d.w}).v}};
            } else if constexpr (std::is_same_v<D, backend::Numerical>) {
                long long s = p.v[0];
                backend::Numerical r{d.threshold + s, {}};
                for (long long x : d.below) r.below.push_back(x + s);
                return Ideal{w, canonical(*m_, r)};
            } else if constexpr (std::is_same_v<D, backend::Affine>) {
                // p = (b0, c): (B, A) -> (b0 + c B, c A)
                long long b0 = p.v[0], c = p.v[2];
                long long ac = c < 0 ? -c : c;
                backend::Affine r;
                r.bounded = d.bounded && c > 0;
                r.m = fit(static_cast<i128>(d.m) * ac);
                r.n = fit(static_cast<i128>(d.n) * ac);
                r.res = pmod(static_cast<i128>(b0) + static_cast<i128>(c) * d.res, r.m);
                r.lo = r.bounded ? fit(static_cast<i128>(b0) + static_cast<i128>(c) * d.lo) : 0;
                return Ideal{w, normalize(r)};
            } else {
                return generic_from_word(w);
            }
        },
        z.data);
}

Ideal IdealEngine::preimage(const Elem& q, const Ideal& z) const {
    Word qw;
    qw.pairs.emplace_back(m_->identity(), q);
    Word w = compose(qw, z.word);
    if (generic_) return generic_from_word(w);
    return std::visit(
        [&](const auto& d) -> Ideal {
            using D = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<D, backend::Empty>) {
                return Ideal{w, d};
            } else if constexpr (std::is_same_v<D, backend::Lattice>) {
                backend::Lattice r = d;
                for (int i = 0; i < m_->rank(); ++i) r.w[i] = std::max(0LL, d.w[i] - q.v[i]);
                return Ideal{w, r};
            } else if constexpr (std::is_same_v<D, backend::Free>) {
                if (is_prefix(d.w, q.v)) return Ideal{w, backend::Free{{}}};
                if (is_prefix(q.v, d.w)) return Ideal{w, backend::Free{std::vector<long long>(d.w.begin() + q.v.size(), d.w.end())}};
                return Ideal{w, backend::Empty{"prefixes " + m_->format(q) + " and " +
                                               m_->format(Elem{Family::FreeMonoid, d.w}) + " are incomparable"}};
            } else if constexpr (std::is_same_v<D, backend::Numerical>) {
                long long s = q.v[0];
                backend::Numerical r{std::max({d.threshold - s, m_->conductor(), 0LL}), {}};
                for (long long y = 0; y < r.threshold; ++y)
                    if (m_->in_monoid(m_->integer(y)) && num_member(d, y + s)) r.below.push_back(y);
                return Ideal{w, canonical(*m_, r)};
            } else if constexpr (std::is_same_v<D, backend::Affine>) {
                // q = (b0, c): (y, x) with (b0 + c y, c x) in z.
                i128 b0 = q.v[0], c = q.v[2];
                i128 ac = c < 0 ? -c : c;
                backend::Affine r;
                r.n = fit(d.n / std::gcd(static_cast<long long>(d.n), static_cast<long long>(ac)));
                i128 g = std::gcd(static_cast<long long>(ac), d.m);
                i128 rhs = static_cast<i128>(d.res) - b0;
                if (rhs % g != 0) {
                    std::ostringstream os;
                    os << "congruence " << static_cast<long long>(c) << "*y = " << static_cast<long long>(rhs)
                       << " mod " << d.m << " has no solution (gcd " << static_cast<long long>(g) << ")";
                    return Ideal{w, backend::Empty{os.str()}};
                }
                i128 mg = d.m / g;
                i128 x, y;
                egcd(((c / g) % mg + mg) % mg, mg, x, y);
                r.m = fit(mg);
                r.res = pmod((rhs / g) % mg * (x % mg), mg);
                r.bounded = !m_->affine_full();
                r.lo = 0;
                if (r.bounded && d.bounded) r.lo = fit(std::max<i128>(0, ceil_div(static_cast<i128>(d.lo) - b0, c)));
                return Ideal{w, normalize(r)};
            } else {
                return generic_from_word(w);
            }
        },
        z.data);
}

Ideal IdealEngine::apply_word(const Word& w, const Ideal& z) const {
    Ideal cur = z;
    for (const auto& [p, q] : w.pairs) cur = preimage(q, left_mult(p, cur));
    // The composite word is recorded with the flags of w on the outside.
    cur.word = compose(w, z.word);
    if (generic_) return generic_from_word(cur.word);
    return cur;
}

Word IdealEngine::neutral_rep(const Word& w) const {
    if (is_neutral(*m_, w)) return w;
    return compose(w, mirror(w));
}

Ideal IdealEngine::intersect(const Ideal& x, const Ideal& y) const {
    Word w = compose(neutral_rep(x.word), y.word);
    if (generic_) return generic_from_word(w);
    if (auto* e = std::get_if<backend::Empty>(&x.data)) return Ideal{w, *e};
    if (auto* e = std::get_if<backend::Empty>(&y.data)) return Ideal{w, *e};
    return std::visit(
        [&](const auto& a) -> Ideal {
            using D = std::decay_t<decltype(a)>;
            if constexpr (std::is_same_v<D, backend::Lattice>) {
                const auto& b = std::get<backend::Lattice>(y.data);
                backend::Lattice r = a;
                for (int i = 0; i < m_->rank(); ++i) r.w[i] = std::max(a.w[i], b.w[i]);
                return Ideal{w, r};
            } else if constexpr (std::is_same_v<D, backend::Free>) {
                const auto& b = std::get<backend::Free>(y.data);
                if (is_prefix(a.w, b.w)) return Ideal{w, b};
                if (is_prefix(b.w, a.w)) return Ideal{w, a};
                return Ideal{w, backend::Empty{"prefixes " + m_->format(Elem{Family::FreeMonoid, a.w}) + " and " +
                                               m_->format(Elem{Family::FreeMonoid, b.w}) + " are incomparable"}};
            } else if constexpr (std::is_same_v<D, backend::Numerical>) {
                const auto& b = std::get<backend::Numerical>(y.data);
                backend::Numerical r{std::max(a.threshold, b.threshold), {}};
                for (long long n = 0; n < r.threshold; ++n)
                    if (num_member(a, n) && num_member(b, n)) r.below.push_back(n);
                return Ideal{w, canonical(*m_, r)};
            } else if constexpr (std::is_same_v<D, backend::Affine>) {
                const auto& b = std::get<backend::Affine>(y.data);
                i128 g = std::gcd(a.m, b.m);
                if ((static_cast<i128>(a.res) - b.res) % g != 0) {
                    std::ostringstream os;
                    os << "B = " << a.res << " mod " << a.m << " and B = " << b.res << " mod " << b.m
                       << " are incompatible";
                    return Ideal{w, backend::Empty{os.str()}};
                }
                backend::Affine r;
                r.m = lcm64(a.m, b.m);
                i128 x, yy;
                egcd(a.m, b.m, x, yy);
                // res = a.res + a.m * t with t = (b.res - a.res)/g * x mod (b.m/g)
                i128 bg = b.m / g;
                i128 t = ((static_cast<i128>(b.res) - a.res) / g % bg) * (x % bg) % bg;
                r.res = pmod(static_cast<i128>(a.res) + static_cast<i128>(a.m) * t, r.m);
                r.n = lcm64(a.n, b.n);
                r.bounded = a.bounded || b.bounded;
                r.lo = std::max(a.bounded ? a.lo : 0, b.bounded ? b.lo : 0);
                return Ideal{w, normalize(r)};
            } else {
                return generic_from_word(w);
            }
        },
        x.data);
}

bool IdealEngine::member(const Elem& r, const Ideal& x) const {
    if (!m_->in_monoid(r)) return false;
    return std::visit(
        [&](const auto& d) -> bool {
            using D = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<D, backend::Empty>) {
                return false;
            } else if constexpr (std::is_same_v<D, backend::Lattice>) {
                for (int i = 0; i < m_->rank(); ++i)
                    if (r.v[i] < d.w[i]) return false;
                return true;
            } else if constexpr (std::is_same_v<D, backend::Free>) {
                return is_prefix(d.w, r.v);
            } else if constexpr (std::is_same_v<D, backend::Numerical>) {
                return num_member(d, r.v[0]);
            } else if constexpr (std::is_same_v<D, backend::Affine>) {
                long long B = r.v[0], A = r.v[2];
                if (d.bounded && B < d.lo) return false;
                if (pmod(B, d.m) != d.res) return false;
                return A % d.n == 0;
            } else {
                auto i = ref_->index_of(r);
                if (i >= 0) return d.chi[static_cast<std::size_t>(i)] != 0;
                return chain_member(*m_, x.word, r);
            }
        },
        x.data);
}

EmptinessVerdict IdealEngine::is_empty(const Ideal& x) const {
    if (auto* e = std::get_if<backend::Empty>(&x.data)) return {EmptyStatus::Empty, e->certificate, std::nullopt, -1};
    if (auto* g = std::get_if<backend::Generic>(&x.data)) {
        for (std::size_t i = 0; i < g->chi.size(); ++i)
            if (g->chi[i]) return {EmptyStatus::NonEmpty, "", (*ref_)[i], -1};
        return {EmptyStatus::UnknownUpTo, "", std::nullopt, g->horizon};
    }
    // Exact non-empty backends: exhibit the least element.
    Elem wit = m_->identity();
    std::visit(
        [&](const auto& d) {
            using D = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<D, backend::Lattice>) wit = m_->vec(d.w);
            else if constexpr (std::is_same_v<D, backend::Free>) wit = Elem{Family::FreeMonoid, d.w};
            else if constexpr (std::is_same_v<D, backend::Numerical>)
                wit = m_->integer(d.below.empty() ? d.threshold : d.below.front());
            else if constexpr (std::is_same_v<D, backend::Affine>)
                wit = m_->affine_elem(d.bounded ? d.lo : d.res, 1, d.n, 1);
        },
        x.data);
    return {EmptyStatus::NonEmpty, "", wit, -1};
}

std::string IdealEngine::key(const Ideal& x) const {
    std::ostringstream os;
    std::visit(
        [&](const auto& d) {
            using D = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<D, backend::Empty>) {
                os << "empty";
            } else if constexpr (std::is_same_v<D, backend::Lattice>) {
                os << "lat";
                for (auto v : d.w) os << ":" << v;
            } else if constexpr (std::is_same_v<D, backend::Free>) {
                os << "free:" << m_->format(Elem{Family::FreeMonoid, d.w});
            } else if constexpr (std::is_same_v<D, backend::Numerical>) {
                os << "num:" << d.threshold;
                for (auto v : d.below) os << ":" << v;
            } else if constexpr (std::is_same_v<D, backend::Affine>) {
                os << "aff:" << d.bounded << ":" << (d.bounded ? d.lo : 0) << ":" << d.res << ":" << d.m << ":" << d.n;
            } else {
                os << "gen" << d.horizon << ":";
                bool any = false;
                for (char c : d.chi) {
                    os << (c ? '1' : '0');
                    any = any || c;
                }
                if (!any) os.str("empty?" + std::to_string(d.horizon));
            }
        },
        x.data);
    return os.str();
}

std::string IdealEngine::describe(const Ideal& x) const {
    std::ostringstream os;
    std::visit(
        [&](const auto& d) {
            using D = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<D, backend::Empty>) {
                os << "{}";
            } else if constexpr (std::is_same_v<D, backend::Lattice>) {
                os << m_->format(m_->vec(d.w)) << "+P";
            } else if constexpr (std::is_same_v<D, backend::Free>) {
                os << m_->format(Elem{Family::FreeMonoid, d.w}) << "P";
            } else if constexpr (std::is_same_v<D, backend::Numerical>) {
                os << "{";
                for (auto v : d.below) os << v << ",";
                os << d.threshold << ",...}";
            } else if constexpr (std::is_same_v<D, backend::Affine>) {
                os << "{(B,A): ";
                if (d.bounded) os << "B>=" << d.lo << ", ";
                os << "B=" << d.res << " mod " << d.m << ", " << d.n << "|A}";
            } else {
                os << "{";
                bool first = true;
                for (std::size_t i = 0; i < d.chi.size(); ++i)
                    if (d.chi[i]) {
                        os << (first ? "" : ",") << m_->format((*ref_)[i]);
                        first = false;
                    }
                os << "} up to radius " << d.horizon;
            }
        },
        x.data);
    return os.str();
}

Tri IdealEngine::equal(const Ideal& x, const Ideal& y) const {
    bool same = key(x) == key(y);
    if (x.exact() && y.exact()) return same ? Tri::True : Tri::False;
    if (!same) return Tri::False;  // differing on the ball is a proof
    return Tri::Unknown;
}

std::optional<Elem> IdealEngine::principal_generator(const Ideal& x) const {
    if (std::holds_alternative<backend::Empty>(x.data)) return std::nullopt;
    if (generic_) {
        for (std::size_t i = 0; i < ref_->size(); ++i)
            if (equal(principal((*ref_)[i]), x) != Tri::False) return (*ref_)[i];
        return std::nullopt;
    }
    return std::visit(
        [&](const auto& d) -> std::optional<Elem> {
            using D = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<D, backend::Lattice>) {
                return m_->vec(d.w);
            } else if constexpr (std::is_same_v<D, backend::Free>) {
                return Elem{Family::FreeMonoid, d.w};
            } else if constexpr (std::is_same_v<D, backend::Numerical>) {
                Elem g = m_->integer(d.below.empty() ? d.threshold : d.below.front());
                if (key(principal(g)) == key(x)) return g;
                return std::nullopt;
            } else if constexpr (std::is_same_v<D, backend::Affine>) {
                if (d.m != d.n) return std::nullopt;
                return m_->affine_elem(d.bounded ? d.lo : d.res, 1, d.n, 1);
            } else {
                return std::nullopt;
            }
        },
        x.data);
}

IdealFamily IdealEngine::cap_closure(const std::vector<Ideal>& f, std::size_t cap) const {
    IdealFamily out;
    std::map<std::string, std::size_t> seen;
    for (const auto& x : f) {
        auto k = key(x);
        if (seen.emplace(k, out.ideals.size()).second) out.ideals.push_back(x);
    }
    for (std::size_t i = 0; i < out.ideals.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            Ideal z = intersect(out.ideals[i], out.ideals[j]);
            auto k = key(z);
            if (seen.emplace(k, out.ideals.size()).second) {
                out.ideals.push_back(std::move(z));
                if (out.ideals.size() > cap)
                    throw ResourceError("intersection closure exceeds the cap of " + std::to_string(cap) + " ideals");
            }
        }
    }
    out.cap_closed = true;
    return out;
}

LcmVerdict is_right_lcm_up_to(const IdealEngine& eng, int L) {
    if (L < 1) throw std::invalid_argument("right-LCM check needs L >= 1");
    const Monoid& m = eng.monoid();
    Ball ball(m, L);
    LcmVerdict v;
    v.status = eng.generic() ? LcmStatus::CounterexampleFree : LcmStatus::Yes;
    v.radius = L;
    for (std::size_t i = 0; i < ball.size(); ++i)
        if (m.is_unit(ball[i])) v.units.push_back(ball[i]);
    std::vector<Ideal> principal;
    for (std::size_t i = 0; i < ball.size(); ++i) principal.push_back(eng.principal(ball[i]));
    for (std::size_t i = 0; i < ball.size(); ++i) {
        for (std::size_t j = 0; j < ball.size(); ++j) {
            Ideal pre = eng.preimage(ball[j], principal[i]);
            if (eng.is_empty(pre).status != EmptyStatus::Empty && !eng.principal_generator(pre)) {
                v.status = LcmStatus::No;
                v.witness_pair = {ball[i], ball[j]};
                v.witness_ideal = pre;
                v.witness_kind = "preimage";
                return v;
            }
            Ideal cap = eng.intersect(principal[i], principal[j]);
            auto ev = eng.is_empty(cap);
            if (ev.status == EmptyStatus::Empty) {
                v.table.push_back({i, j, std::nullopt});
                continue;
            }
            auto g = eng.principal_generator(cap);
            if (!g) {
                if (ev.status == EmptyStatus::UnknownUpTo) {
                    v.table.push_back({i, j, std::nullopt});
                    continue;
                }
                v.status = LcmStatus::No;
                v.witness_pair = {ball[i], ball[j]};
                v.witness_ideal = cap;
                v.witness_kind = "intersection";
                return v;
            }
            v.table.push_back({i, j, g});
        }
    }
    return v;
}

NeutralLattice build_lattice(const IdealEngine& eng, const Ball& letters, int W, std::size_t cap) {
    NeutralLattice lat;
    lat.W = W;
    for (auto& w : enumerate_words(letters, W, true, cap)) {
        Ideal x = eng.K_of_word(w);
        auto k = eng.key(x);
        auto it = lat.by_key.find(k);
        if (it == lat.by_key.end()) {
            lat.by_key.emplace(k, lat.entries.size());
            lat.entries.push_back({x, {w}});
        } else {
            lat.entries[it->second].words.push_back(w);
        }
    }
    return lat;
}

Ideal IdealEngine::K_of_word(const Word& w) const {
    Ideal z = whole();
    for (const auto& [p, q] : w.pairs) z = preimage(q, left_mult(p, z));
    z.word = w;
    if (generic_) return generic_from_word(w);
    return z;
}

}  // namespace pscalc
