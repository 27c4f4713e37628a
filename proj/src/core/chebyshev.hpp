#ifndef GTM_CORE_CHEBYSHEV_HPP
#define GTM_CORE_CHEBYSHEV_HPP

// Chebyshev polynomials of the second kind in the trace normalization:
//
//   d_0(t) = 0,  d_1(t) = 1,  d_{k+1}(t) = t d_k(t) - d_{k-1}(t),
//
// so d_k(2 cos th) = sin(k th) / sin(th).  These drive both the power
// formula for unimodular 2x2 matrices and the trace recursion.

#include "core/mat2.hpp"
#include "core/real.hpp"

namespace gtm {

// d_k(t), k >= 0.
Real cheb_eval(long k, const Real& t);

// d_k'(t), k >= 0.
Real cheb_deriv(long k, const Real& t);

// Values and derivatives at orders k and k-1 in one pass (k >= 1).
struct ChebPair {
    Real dk, dkm1;   // d_k,  d_{k-1}
    Real ddk, ddkm1; // d_k', d_{k-1}'
};
ChebPair cheb_pair(long k, const Real& t);

// A^k for A with det A = 1, via A^k = d_k(tr A) A - d_{k-1}(tr A) I when
// |tr A| <= 4, falling back to binary exponentiation for larger traces
// (where the d_k combination grows and would lose relative accuracy).
// Throws InvariantError if det A deviates from 1 beyond rounding slack.
Mat2 sl2_pow(const Mat2& A, long k);

} // namespace gtm

#endif // GTM_CORE_CHEBYSHEV_HPP
