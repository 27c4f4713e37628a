#ifndef GTM_CORE_BOUNDS_HPP
#define GTM_CORE_BOUNDS_HPP

// Closed-form branching count Lambda_m, derivative growth rate gamma_m, and
// the Hausdorff-dimension lower bounds log Lambda_m / log gamma_m (sharp)
// and log Lambda_m / log(64m+4) (weak form).

#include "core/real.hpp"

namespace gtm {

// Branching count of the nested construction.  m >= 2:
//   Lambda_2 = 2; for m > 2 by residue mod 4: 0 -> m, 1 -> m-3, 2 -> m-2,
//   3 -> m-1.
long lambda_m(int m);

// Growth rate: gamma_2 = 8(5+sqrt(29)) (largest root of x^2 - 80x - 256);
// m > 2: 1 + 32m + sqrt(1 + 192m + 1024 m^2) (largest eigenvalue of
// [[64m, 2], [128m, 2]]).  Evaluated at the current working precision.
Real gamma_value(int m);

struct DimensionReport {
    int m = 0;
    long lambda = 0;
    Real gamma;
    Real bound;      // log lambda / log gamma
    Real weak_bound; // log lambda / log(64m + 4)
};

// Both bounds at 128-bit precision (fixed: they feed acceptance
// inequalities and must not depend on the ambient setting).
DimensionReport theorem_bound(int m);

// Iterates the derivative-growth recursion (two-term scalar recurrence for
// m = 2, 2x2 power iteration for m > 2) and checks the growth ratio against
// gamma_value(m) to within 10^-8.  Writes the relative error if asked.
bool verify_gamma_recursion(int m, Real* rel_err_out = nullptr);

} // namespace gtm

#endif // GTM_CORE_BOUNDS_HPP
