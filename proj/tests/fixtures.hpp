#pragma once
// Product systems and representations reused across the Fock, covariance and
// crossed-product tests.

#include "pscalc/covariance.hpp"
#include "pscalc/fock.hpp"

#include <memory>

namespace pscalc::test {

using Q = GaussRat;

inline SpMat<Q> unit(std::size_t n, std::size_t i, std::size_t j) {
    SpMat<Q> m(n, n);
    m.add(i, j, Field<Q>::one());
    return m;
}

// Upper shift S = E12 + E23 over N with A the diagonal matrices.
inline ProductSystemSpec<Q> nilpotent_spec(bool corrupt = false) {
    ProductSystemSpec<Q> s;
    s.D = 3;
    for (std::size_t i = 0; i < 3; ++i) s.coefficients.push_back(unit(3, i, i));
    SpMat<Q> S = unit(3, 0, 1) + unit(3, 1, 2);
    s.fibers.push_back({S});
    if (corrupt) {
        Monoid n = Monoid::lattice_cone(1);
        s.overrides.push_back({n.vec({2}), {S * S + unit(3, 0, 0)}});
    }
    return s;
}

// X_P Fock representation over a family.
struct FockFixture {
    Monoid m;
    std::shared_ptr<FiberSystem<Q>> fs;
    std::shared_ptr<FockRep<Q>> rep;

    FockFixture(Monoid mon, int L) : m(std::move(mon)) {
        fs = std::make_shared<FiberSystem<Q>>(m, ProductSystemSpec<Q>::semigroup(m), L);
        rep = std::make_shared<FockRep<Q>>(fs);
    }
    FockFixture(Monoid mon, const ProductSystemSpec<Q>& spec, int L) : m(std::move(mon)) {
        fs = std::make_shared<FiberSystem<Q>>(m, spec, L);
        rep = std::make_shared<FockRep<Q>>(fs);
    }
    FockFixture(const FockFixture&) = delete;
};

}  // namespace pscalc::test

namespace pscalc::test {

// Semigroup representation by generator images in a carrier monoid.
inline std::shared_ptr<Representation<Q>> shift_model(const Monoid& P, int L, Monoid carrier, int Lq,
                                                      std::vector<Elem> images, std::string name) {
    return std::make_shared<ShiftModelRep<Q>>(P, L, std::move(carrier), Lq, std::move(images), std::move(name));
}

inline std::shared_ptr<Representation<Q>> left_regular(const Monoid& P, int L) {
    return shift_model(P, L, P, L, P.generators(), "left-regular");
}

// Named representations used across tests, by truncation L.
inline RepFactory<Q> rep_factory(const Monoid& P, const std::string& name) {
    Monoid n = Monoid::lattice_cone(1);
    if (name == "left-regular") return [&P](int L) { return left_regular(P, L); };
    if (name == "fock")
        return [&P](int L) -> std::shared_ptr<Representation<Q>> {
            auto fs = std::make_shared<FiberSystem<Q>>(P, ProductSystemSpec<Q>::semigroup(P), L);
            return std::make_shared<FockRep<Q>>(fs);
        };
    if (name == "shift-power")  // <2,3> -> N, p -> p
        return [&P, n](int L) { return shift_model(P, L, n, 3 * L + 2, {n.vec({2}), n.vec({3})}, "shift-power"); };
    if (name == "broken-shift")  // w_2 = S^2, w_3 = S^4
        return [&P, n](int L) { return shift_model(P, L, n, 4 * L + 2, {n.vec({2}), n.vec({4})}, "broken-shift"); };
    if (name == "collapsed")  // every generator to the same shift
        return [&P, n](int L) {
            return shift_model(P, L, n, L + 1, std::vector<Elem>(P.generators().size(), n.vec({1})), "collapsed");
        };
    if (name == "trivial")
        return [&P, n](int L) {
            return shift_model(P, L, n, 0, std::vector<Elem>(P.generators().size(), n.vec({0})), "trivial");
        };
    throw std::invalid_argument("unknown rep " + name);
}

}  // namespace pscalc::test
