#pragma once
// Scalar fields used by every engine: exact Gaussian rationals Q(i) and
// complex doubles with explicit tolerances.

#include <gmpxx.h>

#include <complex>
#include <cmath>
#include <stdexcept>
#include <string>

namespace pscalc {

class GaussRat {
public:
    GaussRat() = default;
    GaussRat(long v) : re_(v), im_(0) {}
    GaussRat(mpq_class re, mpq_class im = 0) : re_(std::move(re)), im_(std::move(im)) {}

    const mpq_class& re() const { return re_; }
    const mpq_class& im() const { return im_; }

    bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
    bool is_real() const { return sgn(im_) == 0; }
    GaussRat conj() const { return GaussRat(re_, -im_); }
    mpq_class norm2() const { return re_ * re_ + im_ * im_; }

    GaussRat& operator+=(const GaussRat& o) { re_ += o.re_; im_ += o.im_; return *this; }
    GaussRat& operator-=(const GaussRat& o) { re_ -= o.re_; im_ -= o.im_; return *this; }
    GaussRat& operator*=(const GaussRat& o) {
        if (is_real() && o.is_real()) {
            re_ *= o.re_;
            return *this;
        }
        mpq_class r = re_ * o.re_ - im_ * o.im_;
        mpq_class i = re_ * o.im_ + im_ * o.re_;
        re_ = std::move(r);
        im_ = std::move(i);
        return *this;
    }
    GaussRat& operator/=(const GaussRat& o) {
        if (o.is_zero()) throw std::domain_error("division by zero in Q(i)");
        if (o.is_real()) {
            re_ /= o.re_;
            im_ /= o.re_;
            return *this;
        }
        mpq_class d = o.norm2();
        mpq_class r = (re_ * o.re_ + im_ * o.im_) / d;
        mpq_class i = (im_ * o.re_ - re_ * o.im_) / d;
        re_ = std::move(r);
        im_ = std::move(i);
        return *this;
    }
    GaussRat operator-() const { return GaussRat(-re_, -im_); }

    friend GaussRat operator+(GaussRat a, const GaussRat& b) { return a += b; }
    friend GaussRat operator-(GaussRat a, const GaussRat& b) { return a -= b; }
    friend GaussRat operator*(GaussRat a, const GaussRat& b) { return a *= b; }
    friend GaussRat operator/(GaussRat a, const GaussRat& b) { return a /= b; }
    friend bool operator==(const GaussRat& a, const GaussRat& b) { return a.re_ == b.re_ && a.im_ == b.im_; }
    friend bool operator!=(const GaussRat& a, const GaussRat& b) { return !(a == b); }

private:
    mpq_class re_{0};
    mpq_class im_{0};
};

using CFloat = std::complex<double>;

// Parses "p/q" or "p" into a canonical rational.
mpq_class parse_rational(const std::string& s);
std::string format_rational(const mpq_class& q);

enum class Backend { Exact, Float };

template <class T> struct Field;

template <> struct Field<GaussRat> {
    static constexpr Backend backend = Backend::Exact;
    static GaussRat zero() { return GaussRat(); }
    static GaussRat one() { return GaussRat(1L); }
    static GaussRat from_int(long v) { return GaussRat(v); }
    static GaussRat from_parts(const mpq_class& re, const mpq_class& im) { return GaussRat(re, im); }
    static bool is_zero(const GaussRat& x, double = 0) { return x.is_zero(); }
    static GaussRat conj(const GaussRat& x) { return x.conj(); }
    static double magnitude(const GaussRat& x) { return std::sqrt(x.norm2().get_d()); }
    // Primitive n-th root of unity for n in {1,2,4}; other orders are not in Q(i).
    static GaussRat root_of_unity(int n, int k);
};

template <> struct Field<CFloat> {
    static constexpr Backend backend = Backend::Float;
    static CFloat zero() { return {0.0, 0.0}; }
    static CFloat one() { return {1.0, 0.0}; }
    static CFloat from_int(long v) { return {static_cast<double>(v), 0.0}; }
    static CFloat from_parts(const mpq_class& re, const mpq_class& im) { return {re.get_d(), im.get_d()}; }
    static bool is_zero(const CFloat& x, double tol) { return std::abs(x) <= tol; }
    static CFloat conj(const CFloat& x) { return std::conj(x); }
    static double magnitude(const CFloat& x) { return std::abs(x); }
    static CFloat root_of_unity(int n, int k);
};

// Numeric tolerances; ignored by the exact field.
struct Tolerance {
    double tol = 1e-9;
    double pivot = 1e-7;
};

}  // namespace pscalc
