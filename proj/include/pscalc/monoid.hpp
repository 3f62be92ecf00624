#pragma once
// Monoids P inside groups G: canonical forms, membership, ball enumeration.

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace pscalc {

enum class Family { LatticeCone, FreeMonoid, NumericalSemigroup, Affine, Custom };

std::string family_name(Family f);

// Group element in canonical form. Payload per family:
//   LatticeCone   integer vector of length k
//   FreeMonoid    reduced word, letter i as +(i+1), its inverse as -(i+1)
//   Numerical     single integer
//   Affine        (b_num, b_den, a_num, a_den), the element x -> a x + b of Q x| Q^*
//   Custom        whatever the callbacks treat as canonical
struct Elem {
    Family fam = Family::LatticeCone;
    std::vector<long long> v;

    friend bool operator==(const Elem& a, const Elem& b) { return a.fam == b.fam && a.v == b.v; }
    friend bool operator!=(const Elem& a, const Elem& b) { return !(a == b); }
    friend bool operator<(const Elem& a, const Elem& b) {
        if (a.fam != b.fam) return a.fam < b.fam;
        return a.v < b.v;
    }
};

struct StructuralError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The five callbacks a user-supplied family provides. Membership must be
// decidable; nothing here checks that.
struct CustomOps {
    std::function<Elem(const Elem&, const Elem&)> mul;
    std::function<Elem(const Elem&)> inv;
    std::function<bool(const Elem&, const Elem&)> eq;
    std::function<bool(const Elem&)> in_monoid;
    std::function<std::vector<Elem>()> generators;
    Elem identity;
    std::string name = "custom";
};

class Monoid {
public:
    static Monoid lattice_cone(int k, std::vector<Elem> gens = {});
    static Monoid free_monoid(int n);
    static Monoid numerical(std::vector<long long> gens);
    // P = {(b, a) : b >= 0, a >= 1} inside Q x| Q^*, or with `full` the
    // whole integer semigroup {(b, a) : b in Z, a in Z \ {0}}.
    static Monoid affine(std::vector<Elem> gens, bool full = false);
    static Monoid custom(CustomOps ops);

    Family family() const { return fam_; }
    int rank() const { return rank_; }
    bool affine_full() const { return affine_full_; }
    const std::string& name() const { return name_; }

    Elem identity() const;
    Elem mul(const Elem& a, const Elem& b) const;
    Elem inv(const Elem& a) const;
    bool eq(const Elem& a, const Elem& b) const;
    bool in_monoid(const Elem& g) const;
    const std::vector<Elem>& generators() const { return gens_; }

    // p^{-1} r in P, i.e. r in pP.
    bool left_divides(const Elem& p, const Elem& r) const { return in_monoid(mul(inv(p), r)); }
    bool is_unit(const Elem& p) const { return in_monoid(p) && in_monoid(inv(p)); }

    std::string format(const Elem& g) const;

    // Element constructors for the built-in families.
    Elem vec(std::vector<long long> v) const;
    Elem word(const std::string& letters) const;  // "ab", "e" for the identity
    Elem integer(long long n) const;
    Elem affine_elem(long long bn, long long bd, long long an, long long ad) const;

    // Numerical semigroup data.
    long long frobenius() const { return frobenius_; }
    long long conductor() const { return frobenius_ + 1; }
    const std::vector<long long>& apery() const { return apery_; }

private:
    Monoid() = default;
    void check_family(const Elem& g) const;
    void validate_generators() const;

    Family fam_ = Family::LatticeCone;
    int rank_ = 0;
    bool affine_full_ = false;
    std::string name_;
    std::vector<Elem> gens_;
    std::shared_ptr<CustomOps> custom_;
    std::vector<long long> apery_;  // w.r.t. the smallest generator
    long long frobenius_ = -1;
};

// Products of at most L generators, ordered by length then lexicographically
// on canonical form.
class Ball {
public:
    static constexpr std::size_t kDefaultCap = 5000;

    Ball(const Monoid& m, int radius, std::size_t cap = kDefaultCap);

    const Monoid& monoid() const { return *m_; }
    int radius() const { return radius_; }
    std::size_t size() const { return elems_.size(); }
    const Elem& operator[](std::size_t i) const { return elems_[i]; }
    const std::vector<Elem>& elements() const { return elems_; }
    // Minimal number of generators needed, among products in this ball.
    int length(std::size_t i) const { return length_[i]; }
    // First generator sequence (indices into generators()) reaching element i.
    const std::vector<int>& factorization(std::size_t i) const { return fact_[i]; }

    std::ptrdiff_t index_of(const Elem& g) const {
        auto it = index_.find(g);
        return it == index_.end() ? -1 : static_cast<std::ptrdiff_t>(it->second);
    }
    bool contains(const Elem& g) const { return index_of(g) >= 0; }

private:
    const Monoid* m_;
    int radius_;
    std::vector<Elem> elems_;
    std::vector<int> length_;
    std::vector<std::vector<int>> fact_;
    std::map<Elem, std::size_t> index_;
};

}  // namespace pscalc
