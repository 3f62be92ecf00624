#pragma once
// Shared fixtures for the test binaries: seeded generators and the standard
// monoid families.

#include "pscalc/ideal.hpp"
#include "pscalc/monoid.hpp"

#include <random>
#include <string>

namespace pscalc::test {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}
    std::size_t below(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(eng_); }
    long long range(long long lo, long long hi) { return std::uniform_int_distribution<long long>(lo, hi)(eng_); }
    bool coin() { return below(2) == 1; }
    std::mt19937_64& engine() { return eng_; }

private:
    std::mt19937_64 eng_;
};

inline Monoid family(const std::string& name) {
    if (name == "N") return Monoid::lattice_cone(1);
    if (name == "N2") return Monoid::lattice_cone(2);
    if (name == "F2") return Monoid::free_monoid(2);
    if (name == "S23") return Monoid::numerical({2, 3});
    if (name == "Aff") {
        Elem t{Family::Affine, {1, 1, 1, 1}};
        Elem two{Family::Affine, {0, 1, 2, 1}};
        Elem three{Family::Affine, {0, 1, 3, 1}};
        return Monoid::affine({t, two, three});
    }
    throw std::invalid_argument("unknown test family " + name);
}

// Random word of 1..max_pairs pairs with letters drawn from a ball.
inline Word random_word(Rng& rng, const Ball& letters, int max_pairs) {
    int n = 1 + static_cast<int>(rng.below(max_pairs));
    std::vector<Elem> flat;
    for (int i = 0; i < 2 * n; ++i) flat.push_back(letters[rng.below(letters.size())]);
    return make_word(letters.monoid(), flat);
}

}  // namespace pscalc::test
