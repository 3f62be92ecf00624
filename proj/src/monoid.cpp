#include "pscalc/monoid.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <queue>
#include <sstream>

namespace pscalc {

namespace {

using i128 = __int128;

long long narrow(i128 x) {
    if (x > std::numeric_limits<long long>::max() || x < std::numeric_limits<long long>::min())
        throw ResourceError("affine coordinate overflow beyond 64 bits");
    return static_cast<long long>(x);
}

i128 gcd128(i128 a, i128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        i128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

// Reduced fraction with positive denominator.
std::pair<long long, long long> frac(i128 n, i128 d) {
    if (d == 0) throw std::domain_error("zero denominator");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    i128 g = gcd128(n, d);
    if (g > 1) {
        n /= g;
        d /= g;
    }
    return {narrow(n), narrow(d)};
}

Elem make_affine(i128 bn, i128 bd, i128 an, i128 ad) {
    auto [b1, b2] = frac(bn, bd);
    auto [a1, a2] = frac(an, ad);
    if (a1 == 0) throw std::domain_error("affine element with zero multiplier");
    return Elem{Family::Affine, {b1, b2, a1, a2}};
}

std::string rat_str(long long n, long long d) {
    return d == 1 ? std::to_string(n) : std::to_string(n) + "/" + std::to_string(d);
}

}  // namespace

std::string family_name(Family f) {
    switch (f) {
        case Family::LatticeCone: return "lattice-cone";
        case Family::FreeMonoid: return "free-monoid";
        case Family::NumericalSemigroup: return "numerical-semigroup";
        case Family::Affine: return "affine";
        case Family::Custom: return "custom";
    }
    return "?";
}

Monoid Monoid::lattice_cone(int k, std::vector<Elem> gens) {
    if (k < 1) throw std::invalid_argument("lattice cone rank must be positive");
    Monoid m;
    m.fam_ = Family::LatticeCone;
    m.rank_ = k;
    m.name_ = "N^" + std::to_string(k);
    if (gens.empty()) {
        for (int i = 0; i < k; ++i) {
            std::vector<long long> v(k, 0);
            v[i] = 1;
            gens.push_back(Elem{Family::LatticeCone, v});
        }
    }
    m.gens_ = std::move(gens);
    m.validate_generators();
    return m;
}

Monoid Monoid::free_monoid(int n) {
    if (n < 1 || n > 26) throw std::invalid_argument("free monoid rank must be in 1..26");
    Monoid m;
    m.fam_ = Family::FreeMonoid;
    m.rank_ = n;
    m.name_ = "F" + std::to_string(n) + "+";
    for (int i = 0; i < n; ++i) m.gens_.push_back(Elem{Family::FreeMonoid, {i + 1}});
    return m;
}

Monoid Monoid::numerical(std::vector<long long> gens) {
    std::sort(gens.begin(), gens.end());
    gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
    if (gens.empty() || gens.front() <= 0) throw std::invalid_argument("numerical semigroup generators must be positive");
    long long g = 0;
    for (long long x : gens) g = std::gcd(g, x);
    if (g != 1) throw std::invalid_argument("numerical semigroup generators must be coprime");
    Monoid m;
    m.fam_ = Family::NumericalSemigroup;
    m.rank_ = 1;
    std::ostringstream os;
    os << "<";
    for (std::size_t i = 0; i < gens.size(); ++i) os << (i ? "," : "") << gens[i];
    os << ">";
    m.name_ = os.str();
    for (long long x : gens) m.gens_.push_back(Elem{Family::NumericalSemigroup, {x}});

    // Apery set w.r.t. the smallest generator by shortest paths on residues.
    long long mod = gens.front();
    const long long inf = std::numeric_limits<long long>::max();
    std::vector<long long> dist(mod, inf);
    dist[0] = 0;
    using Item = std::pair<long long, long long>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    pq.emplace(0, 0);
    while (!pq.empty()) {
        auto [d, r] = pq.top();
        pq.pop();
        if (d != dist[r]) continue;
        for (long long x : gens) {
            long long r2 = (r + x) % mod;
            if (d + x < dist[r2]) {
                dist[r2] = d + x;
                pq.emplace(dist[r2], r2);
            }
        }
    }
    m.apery_ = dist;
    m.frobenius_ = *std::max_element(dist.begin(), dist.end()) - mod;
    return m;
}

Monoid Monoid::affine(std::vector<Elem> gens, bool full) {
    Monoid m;
    m.fam_ = Family::Affine;
    m.rank_ = 2;
    m.affine_full_ = full;
    m.name_ = full ? "Z x| Z^x" : "N x| Z>0";
    m.gens_ = std::move(gens);
    m.validate_generators();
    return m;
}

Monoid Monoid::custom(CustomOps ops) {
    if (!ops.mul || !ops.inv || !ops.eq || !ops.in_monoid || !ops.generators)
        throw std::invalid_argument("custom family needs mul, inv, eq, in_monoid and generators");
    Monoid m;
    m.fam_ = Family::Custom;
    m.name_ = ops.name;
    m.gens_ = ops.generators();
    for (auto& g : m.gens_) g.fam = Family::Custom;
    ops.identity.fam = Family::Custom;
    m.custom_ = std::make_shared<CustomOps>(std::move(ops));
    m.validate_generators();
    return m;
}

void Monoid::validate_generators() const {
    if (!in_monoid(identity())) throw StructuralError("identity is not in the monoid");
    for (const auto& g : gens_) {
        check_family(g);
        if (!in_monoid(g)) throw StructuralError("generator " + format(g) + " is not in the monoid");
    }
}

void Monoid::check_family(const Elem& g) const {
    if (g.fam != fam_)
        throw StructuralError("family mismatch: " + family_name(g.fam) + " element used in " + family_name(fam_));
    if (fam_ == Family::LatticeCone && static_cast<int>(g.v.size()) != rank_)
        throw StructuralError("lattice element of wrong rank");
}

Elem Monoid::identity() const {
    switch (fam_) {
        case Family::LatticeCone: return Elem{fam_, std::vector<long long>(rank_, 0)};
        case Family::FreeMonoid: return Elem{fam_, {}};
        case Family::NumericalSemigroup: return Elem{fam_, {0}};
        case Family::Affine: return Elem{fam_, {0, 1, 1, 1}};
        case Family::Custom: return custom_->identity;
    }
    return {};
}

Elem Monoid::mul(const Elem& a, const Elem& b) const {
    check_family(a);
    check_family(b);
    switch (fam_) {
        case Family::LatticeCone: {
            Elem r{fam_, a.v};
            for (int i = 0; i < rank_; ++i) r.v[i] += b.v[i];
            return r;
        }
        case Family::FreeMonoid: {
            Elem r{fam_, a.v};
            for (long long x : b.v) {
                if (!r.v.empty() && r.v.back() == -x)
                    r.v.pop_back();
                else
                    r.v.push_back(x);
            }
            return r;
        }
        case Family::NumericalSemigroup: return Elem{fam_, {a.v[0] + b.v[0]}};
        case Family::Affine: {
            // (b, a)(d, c) = (b + a d, a c)
            i128 bn = a.v[0], bd = a.v[1], an = a.v[2], ad = a.v[3];
            i128 dn = b.v[0], dd = b.v[1], cn = b.v[2], cd = b.v[3];
            i128 num = bn * ad * dd + an * dn * bd;
            i128 den = bd * ad * dd;
            return make_affine(num, den, an * cn, ad * cd);
        }
        case Family::Custom: {
            Elem r = custom_->mul(a, b);
            r.fam = fam_;
            return r;
        }
    }
    return {};
}

Elem Monoid::inv(const Elem& a) const {
    check_family(a);
    switch (fam_) {
        case Family::LatticeCone: {
            Elem r{fam_, a.v};
            for (auto& x : r.v) x = -x;
            return r;
        }
        case Family::FreeMonoid: {
            Elem r{fam_, {}};
            for (auto it = a.v.rbegin(); it != a.v.rend(); ++it) r.v.push_back(-*it);
            return r;
        }
        case Family::NumericalSemigroup: return Elem{fam_, {-a.v[0]}};
        case Family::Affine: {
            // (b, a)^{-1} = (-b/a, 1/a)
            i128 bn = a.v[0], bd = a.v[1], an = a.v[2], ad = a.v[3];
            return make_affine(-bn * ad, bd * an, ad, an);
        }
        case Family::Custom: {
            Elem r = custom_->inv(a);
            r.fam = fam_;
            return r;
        }
    }
    return {};
}

bool Monoid::eq(const Elem& a, const Elem& b) const {
    check_family(a);
    check_family(b);
    if (fam_ == Family::Custom) return custom_->eq(a, b);
    return a.v == b.v;
}

bool Monoid::in_monoid(const Elem& g) const {
    check_family(g);
    switch (fam_) {
        case Family::LatticeCone:
            return std::all_of(g.v.begin(), g.v.end(), [](long long x) { return x >= 0; });
        case Family::FreeMonoid:
            return std::all_of(g.v.begin(), g.v.end(), [](long long x) { return x > 0; });
        case Family::NumericalSemigroup: {
            long long n = g.v[0];
            if (n < 0) return false;
            long long mod = static_cast<long long>(apery_.size());
            return n >= apery_[n % mod];
        }
        case Family::Affine: {
            bool integral = g.v[1] == 1 && g.v[3] == 1;
            if (!integral) return false;
            if (affine_full_) return g.v[2] != 0;
            return g.v[0] >= 0 && g.v[2] >= 1;
        }
        case Family::Custom: return custom_->in_monoid(g);
    }
    return false;
}

std::string Monoid::format(const Elem& g) const {
    std::ostringstream os;
    switch (g.fam) {
        case Family::LatticeCone:
        case Family::Custom:
            os << "(";
            for (std::size_t i = 0; i < g.v.size(); ++i) os << (i ? "," : "") << g.v[i];
            os << ")";
            break;
        case Family::FreeMonoid:
            if (g.v.empty()) return "e";
            for (long long x : g.v) os << static_cast<char>(x > 0 ? 'a' + x - 1 : 'A' - x - 1);
            break;
        case Family::NumericalSemigroup: os << g.v[0]; break;
        case Family::Affine: os << "(" << rat_str(g.v[0], g.v[1]) << "," << rat_str(g.v[2], g.v[3]) << ")"; break;
    }
    return os.str();
}

Elem Monoid::vec(std::vector<long long> v) const {
    Elem e{Family::LatticeCone, std::move(v)};
    check_family(e);
    return e;
}

Elem Monoid::word(const std::string& letters) const {
    Elem e{Family::FreeMonoid, {}};
    if (letters == "e" || letters.empty()) return e;
    Elem acc = e;
    for (char c : letters) {
        long long x;
        if (c >= 'a' && c <= 'z')
            x = c - 'a' + 1;
        else if (c >= 'A' && c <= 'Z')
            x = -(c - 'A' + 1);
        else
            throw std::invalid_argument(std::string("bad free-monoid letter '") + c + "'");
        if (std::llabs(x) > rank_) throw std::invalid_argument("letter outside the alphabet");
        acc = mul(acc, Elem{Family::FreeMonoid, {x}});
    }
    return acc;
}

Elem Monoid::integer(long long n) const { return Elem{Family::NumericalSemigroup, {n}}; }

Elem Monoid::affine_elem(long long bn, long long bd, long long an, long long ad) const {
    return make_affine(bn, bd, an, ad);
}

Ball::Ball(const Monoid& m, int radius, std::size_t cap) : m_(&m), radius_(radius) {
    if (radius < 0) throw std::invalid_argument("ball radius must be non-negative");
    auto push = [&](const Elem& g, int len, std::vector<int> fact) {
        index_.emplace(g, elems_.size());
        elems_.push_back(g);
        length_.push_back(len);
        fact_.push_back(std::move(fact));
        if (elems_.size() > cap)
            throw ResourceError("ball of radius " + std::to_string(radius) + " exceeds the cap of " +
                                std::to_string(cap) + " elements");
    };
    push(m.identity(), 0, {});
    std::size_t level_begin = 0;
    const auto& gens = m.generators();
    for (int len = 1; len <= radius; ++len) {
        std::size_t level_end = elems_.size();
        // New elements of this level with their first-found factorization.
        std::map<Elem, std::vector<int>> fresh;
        for (std::size_t i = level_begin; i < level_end; ++i) {
            for (std::size_t gi = 0; gi < gens.size(); ++gi) {
                Elem x = m.mul(elems_[i], gens[gi]);
                if (index_.count(x) || fresh.count(x)) continue;
                auto f = fact_[i];
                f.push_back(static_cast<int>(gi));
                fresh.emplace(std::move(x), std::move(f));
            }
        }
        if (fresh.empty()) break;
        for (auto& [x, f] : fresh) push(x, len, std::move(f));
        level_begin = level_end;
    }
}

}  // namespace pscalc
