#pragma once
// Concrete product systems: fibers X_r inside a matrix algebra M_D, built as
// spans of products of generator fibers, plus the axiom checker.

#include "pscalc/linalg.hpp"
#include "pscalc/monoid.hpp"

#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace pscalc {

// Anything with a basis per ball element and the two multiplication rules a
// Fock module needs. Coordinates are w.r.t. the target fiber's basis.
template <class T>
class FiberAlgebra {
public:
    virtual ~FiberAlgebra() = default;
    virtual const Ball& ball() const = 0;
    virtual std::size_t dim(std::size_t r) const = 0;
    // xi_{r,k} eta_{s,l} in X_{rs}; nullopt when rs leaves the ball.
    virtual std::optional<SparseVec<T>> mul(std::size_t r, std::size_t k, std::size_t s, std::size_t l) const = 0;
    // xi_{r,k}^* eta_{s,l} in X_{r^{-1}s}; nullopt when r^{-1}s is not a ball element of P.
    virtual std::optional<SparseVec<T>> adj_mul(std::size_t r, std::size_t k, std::size_t s, std::size_t l) const = 0;
    // Whether every fiber is one-dimensional with the unit as basis.
    virtual bool semigroup_case() const = 0;
};

template <class T>
struct ProductSystemSpec {
    std::size_t D = 1;
    std::vector<SpMat<T>> coefficients;          // spans A = X_e
    std::vector<std::vector<SpMat<T>>> fibers;   // per monoid generator
    // Fibers given outright for particular elements instead of by products.
    std::vector<std::pair<Elem, std::vector<SpMat<T>>>> overrides;
    Tolerance tol;

    static ProductSystemSpec semigroup(const Monoid& m) {
        ProductSystemSpec s;
        s.D = 1;
        s.coefficients.push_back(SpMat<T>::identity(1));
        s.fibers.assign(m.generators().size(), {SpMat<T>::identity(1)});
        return s;
    }
};

// Raised when a fiber product falls outside the fiber it must land in.
struct FiberError : StructuralError {
    using StructuralError::StructuralError;
};

template <class T>
class FiberSystem : public FiberAlgebra<T> {
public:
    FiberSystem(const Monoid& m, const ProductSystemSpec<T>& spec, int L)
        : spec_(spec), ball_(std::make_shared<Ball>(m, L)) {
        build();
    }

    const Ball& ball() const override { return *ball_; }
    std::shared_ptr<const Ball> ball_ptr() const { return ball_; }
    const ProductSystemSpec<T>& spec() const { return spec_; }
    std::size_t D() const { return spec_.D; }
    std::size_t dim(std::size_t r) const override { return basis_[r].size(); }
    const SpMat<T>& element(std::size_t r, std::size_t k) const { return basis_[r][k]; }
    bool semigroup_case() const override { return semigroup_; }

    std::optional<SparseVec<T>> coords(std::size_t r, const SpMat<T>& x) const {
        return span_[r].coords(x.vectorize());
    }

    std::optional<SparseVec<T>> mul(std::size_t r, std::size_t k, std::size_t s, std::size_t l) const override {
        const Monoid& m = ball_->monoid();
        auto t = ball_->index_of(m.mul((*ball_)[r], (*ball_)[s]));
        if (t < 0) return std::nullopt;
        SpMat<T> prod = basis_[r][k] * basis_[s][l];
        auto c = coords(static_cast<std::size_t>(t), prod);
        if (!c) throw FiberError(where("product", r, s) + " is not in X_" + m.format((*ball_)[t]));
        return c;
    }

    std::optional<SparseVec<T>> adj_mul(std::size_t r, std::size_t k, std::size_t s, std::size_t l) const override {
        const Monoid& m = ball_->monoid();
        Elem q = m.mul(m.inv((*ball_)[r]), (*ball_)[s]);
        if (!m.in_monoid(q)) return std::nullopt;
        auto t = ball_->index_of(q);
        if (t < 0) return std::nullopt;
        SpMat<T> prod = basis_[r][k].adjoint() * basis_[s][l];
        auto c = coords(static_cast<std::size_t>(t), prod);
        if (!c) throw FiberError(where("adjoint product", r, s) + " is not in X_" + m.format(q));
        return c;
    }

private:
    std::string where(const char* what, std::size_t r, std::size_t s) const {
        const Monoid& m = ball_->monoid();
        return std::string(what) + " X_" + m.format((*ball_)[r]) + " , X_" + m.format((*ball_)[s]);
    }

    bool try_add(std::size_t r, const SpMat<T>& x) {
        if (x.is_zero(spec_.tol.tol)) return false;
        if (span_[r].contains(x.vectorize())) return false;
        span_[r].insert(x.vectorize());
        basis_[r].push_back(x);
        return true;
    }

    void build() {
        const Ball& b = *ball_;
        const Monoid& m = b.monoid();
        std::size_t n = b.size();
        span_.assign(n, Span<T>(spec_.tol));
        basis_.assign(n, {});
        for (const auto& a : spec_.coefficients) try_add(0, a);

        // Generator fibers and overrides, closed under the A-bimodule action.
        auto seed = [&](std::size_t r, const std::vector<SpMat<T>>& xs) {
            for (const auto& x : xs) {
                try_add(r, x);
                for (const auto& a : basis_[0]) {
                    try_add(r, a * x);
                    try_add(r, x * a);
                    for (const auto& c : basis_[0]) try_add(r, a * x * c);
                }
            }
        };
        const auto& gens = m.generators();
        std::vector<char> fixed(n, 0);
        for (const auto& [g, xs] : spec_.overrides) {
            auto gi = b.index_of(g);
            if (gi <= 0) continue;
            fixed[gi] = 1;
            seed(static_cast<std::size_t>(gi), xs);
        }
        for (std::size_t g = 0; g < gens.size(); ++g) {
            auto gi = b.index_of(gens[g]);
            if (gi <= 0 || fixed[gi]) continue;
            seed(static_cast<std::size_t>(gi), spec_.fibers.at(g));
        }
        // Products along all factorizations, to a fixed point.
        bool grew = true;
        while (grew) {
            grew = false;
            for (std::size_t r = 1; r < n; ++r) {
                if (fixed[r]) continue;
                for (std::size_t g = 0; g < gens.size(); ++g) {
                    if (!m.left_divides(gens[g], b[r])) continue;
                    auto gi = b.index_of(gens[g]);
                    auto si = b.index_of(m.mul(m.inv(gens[g]), b[r]));
                    if (gi < 0 || si < 0) continue;
                    for (const auto& x : std::vector<SpMat<T>>(basis_[gi]))
                        for (const auto& y : std::vector<SpMat<T>>(basis_[si])) grew = try_add(r, x * y) || grew;
                }
            }
        }
        semigroup_ = spec_.D == 1;
        for (std::size_t r = 0; r < n && semigroup_; ++r)
            semigroup_ = basis_[r].size() == 1 && basis_[r][0].at(0, 0) == Field<T>::one();
    }

    ProductSystemSpec<T> spec_;
    std::shared_ptr<Ball> ball_;
    std::vector<Span<T>> span_;
    std::vector<std::vector<SpMat<T>>> basis_;
    bool semigroup_ = false;
};

struct AxiomReport {
    bool pass = true;
    std::string violation;  // first violating triple
    double residual = 0;    // max entry of the residual (zero when exact)
    std::size_t checked = 0;
};

// X_r X_s in X_{rs} and X_r^* X_{rs} in X_s on all ball-composable pairs,
// plus closure of A under products and adjoints.
template <class T>
AxiomReport check_product_system_axioms(const FiberSystem<T>& fs) {
    AxiomReport rep;
    const Ball& b = fs.ball();
    const Monoid& m = b.monoid();
    auto fail = [&](const std::string& what, const SpMat<T>& x, std::size_t target) {
        rep.pass = false;
        rep.violation = what;
        Span<T> s(fs.spec().tol);
        for (std::size_t k = 0; k < fs.dim(target); ++k) s.insert(fs.element(target, k).vectorize());
        // Residual of the orthogonal-free reduction; exact backends report 1 for "nonzero".
        rep.residual = max_magnitude(s.reduce(x.vectorize()).residual);
        if (rep.residual == 0) rep.residual = max_magnitude(x.vectorize());
    };
    auto in_span = [&](std::size_t t, const SpMat<T>& x) { return fs.coords(t, x).has_value() || x.is_zero(fs.spec().tol.tol); };

    for (std::size_t k = 0; k < fs.dim(0); ++k) {
        ++rep.checked;
        if (!in_span(0, fs.element(0, k).adjoint())) {
            fail("A is not closed under adjoints", fs.element(0, k).adjoint(), 0);
            return rep;
        }
    }
    for (std::size_t r = 0; r < b.size(); ++r) {
        for (std::size_t s = 0; s < b.size(); ++s) {
            auto rs = b.index_of(m.mul(b[r], b[s]));
            if (rs < 0) continue;
            auto t = static_cast<std::size_t>(rs);
            for (std::size_t k = 0; k < fs.dim(r); ++k) {
                for (std::size_t l = 0; l < fs.dim(s); ++l) {
                    ++rep.checked;
                    SpMat<T> x = fs.element(r, k) * fs.element(s, l);
                    if (!in_span(t, x)) {
                        fail("X_" + m.format(b[r]) + " X_" + m.format(b[s]) + " not in X_" + m.format(b[t]), x, t);
                        return rep;
                    }
                }
                for (std::size_t l = 0; l < fs.dim(t); ++l) {
                    ++rep.checked;
                    SpMat<T> x = fs.element(r, k).adjoint() * fs.element(t, l);
                    if (!in_span(s, x)) {
                        fail("X_" + m.format(b[r]) + "^* X_" + m.format(b[t]) + " not in X_" + m.format(b[s]), x, s);
                        return rep;
                    }
                }
            }
        }
    }
    return rep;
}

}  // namespace pscalc
