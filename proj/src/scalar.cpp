#include "pscalc/scalar.hpp"

#include <numbers>

namespace pscalc {

mpq_class parse_rational(const std::string& s) {
    mpq_class q;
    std::string t = s;
    if (t.empty()) throw std::invalid_argument("empty rational literal");
    if (t.front() == '+') t.erase(0, 1);
    if (q.set_str(t, 10) != 0) throw std::invalid_argument("malformed rational literal '" + s + "'");
    if (t.find('/') != std::string::npos && q.get_den() == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
    q.canonicalize();
    return q;
}

std::string format_rational(const mpq_class& q) {
    mpq_class c(q);
    c.canonicalize();
    if (c.get_den() == 1) return c.get_num().get_str();
    return c.get_num().get_str() + "/" + c.get_den().get_str();
}

GaussRat Field<GaussRat>::root_of_unity(int n, int k) {
    int m = ((k % n) + n) % n;
    switch (n) {
        case 1: return GaussRat(1L);
        case 2: return GaussRat(m == 0 ? 1L : -1L);
        case 4: {
            static const GaussRat table[4] = {GaussRat(1L), GaussRat(0, 1), GaussRat(-1L), GaussRat(0, -1)};
            return table[m];
        }
        default:
            throw std::invalid_argument("roots of unity of order " + std::to_string(n) +
                                        " are not exact Gaussian rationals; use the float backend");
    }
}

CFloat Field<CFloat>::root_of_unity(int n, int k) {
    // Exact values where available keep float runs bit-identical to exact ones.
    int m = ((k % n) + n) % n;
    if (4 % n == 0) {
        int q = m * (4 / n);
        static const CFloat table[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
        return table[q];
    }
    double th = 2.0 * std::numbers::pi * m / n;
    return {std::cos(th), std::sin(th)};
}

}  // namespace pscalc
