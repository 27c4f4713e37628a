#include "core/chebyshev.hpp"

namespace gtm {

Real cheb_eval(long k, const Real& t) {
    if (k < 0) throw ConfigError("cheb_eval: negative order");
    Real p0 = 0, p1 = 1; // d_0, d_1
    if (k == 0) return p0;
    for (long i = 1; i < k; ++i) {
        Real p2 = t * p1 - p0;
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

Real cheb_deriv(long k, const Real& t) {
    if (k < 0) throw ConfigError("cheb_deriv: negative order");
    if (k <= 1) return Real(0);
    // Differentiate the three-term recurrence: d'_{k+1} = d_k + t d'_k - d'_{k-1}.
    Real p0 = 0, p1 = 1; // values
    Real q0 = 0, q1 = 0; // derivatives
    for (long i = 1; i < k; ++i) {
        Real p2 = t * p1 - p0;
        Real q2 = p1 + t * q1 - q0;
        p0 = p1; p1 = p2;
        q0 = q1; q1 = q2;
    }
    return q1;
}

ChebPair cheb_pair(long k, const Real& t) {
    if (k < 1) throw ConfigError("cheb_pair: order must be >= 1");
    Real p0 = 0, p1 = 1;
    Real q0 = 0, q1 = 0;
    for (long i = 1; i < k; ++i) {
        Real p2 = t * p1 - p0;
        Real q2 = p1 + t * q1 - q0;
        p0 = p1; p1 = p2;
        q0 = q1; q1 = q2;
    }
    return ChebPair{p1, p0, q1, q0};
}

namespace {

Mat2 binary_pow(const Mat2& A, long k) {
    Mat2 acc = Mat2::identity();
    Mat2 base = A;
    while (k > 0) {
        if (k & 1) acc = acc * base;
        base = base * base;
        k >>= 1;
    }
    return acc;
}

} // namespace

Mat2 sl2_pow(const Mat2& A, long k) {
    if (k < 0) throw ConfigError("sl2_pow: negative exponent");
    Real scale = A.max_abs();
    Real tol = rel_eps(8) * (scale > 1 ? scale * scale : Real(1));
    if (abs(A.det() - 1) > tol) {
        throw InvariantError("sl2_pow: matrix is not unimodular");
    }
    if (k == 0) return Mat2::identity();
    if (k == 1) return A;
    Real tr = A.trace();
    if (abs(tr) > 4) {
        // d_k(tr) is huge here and the d_k*A - d_{k-1}*I combination
        // cancels; plain squaring keeps full relative accuracy.
        return binary_pow(A, k);
    }
    ChebPair c = cheb_pair(k, tr);
    return Mat2{c.dk * A.a - c.dkm1, c.dk * A.b,
                c.dk * A.c,          c.dk * A.d - c.dkm1};
}

} // namespace gtm
