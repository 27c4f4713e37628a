#ifndef GTM_CORE_MAT2_HPP
#define GTM_CORE_MAT2_HPP

// Minimal 2x2 real matrix, enough for transfer-matrix work.

#include "core/real.hpp"

namespace gtm {

struct Mat2 {
    // Row-major: [[a, b], [c, d]].
    Real a, b, c, d;

    static Mat2 identity() { return Mat2{Real(1), Real(0), Real(0), Real(1)}; }

    Real trace() const { return a + d; }
    Real det() const { return a * d - b * c; }

    // Largest entry magnitude; used to scale relative tolerances.
    Real max_abs() const {
        Real m = abs(a);
        if (abs(b) > m) m = abs(b);
        if (abs(c) > m) m = abs(c);
        if (abs(d) > m) m = abs(d);
        return m;
    }
};

inline Mat2 operator*(const Mat2& p, const Mat2& q) {
    return Mat2{p.a * q.a + p.b * q.c, p.a * q.b + p.b * q.d,
                p.c * q.a + p.d * q.c, p.c * q.b + p.d * q.d};
}

} // namespace gtm

#endif // GTM_CORE_MAT2_HPP
