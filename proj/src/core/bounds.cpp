#include "core/bounds.hpp"

namespace gtm {

long lambda_m(int m) {
    if (m < 2) throw ConfigError("lambda_m: m must be >= 2");
    if (m == 2) return 2;
    switch (m % 4) {
        case 0: return m;
        case 1: return m - 3;
        case 2: return m - 2;
        default: return m - 1;
    }
}

Real gamma_value(int m) {
    if (m < 2) throw ConfigError("gamma_value: m must be >= 2");
    if (m == 2) {
        return 8 * (5 + sqrt(Real(29)));
    }
    Real mm(m);
    return 1 + 32 * mm + sqrt(1 + 192 * mm + 1024 * mm * mm);
}

DimensionReport theorem_bound(int m) {
    PrecisionScope scope(128);
    DimensionReport r;
    r.m = m;
    r.lambda = lambda_m(m);
    r.gamma = gamma_value(m);
    Real ll = log(Real(r.lambda));
    r.bound = ll / log(r.gamma);
    r.weak_bound = ll / log(Real(64) * m + 4);
    return r;
}

bool verify_gamma_recursion(int m, Real* rel_err_out) {
    if (m < 2) throw ConfigError("verify_gamma_recursion: m must be >= 2");
    PrecisionScope scope(128);
    Real gamma = gamma_value(m);
    Real ratio = 0;
    if (m == 2) {
        // a_{k+1} = 80 a_k + 256 a_{k-1}: the consecutive ratio satisfies
        // r <- 80 + 256/r and converges to the largest root of
        // x^2 - 80x - 256 from any positive start.
        Real r = 1;
        for (int k = 0; k < 200; ++k) r = 80 + 256 / r;
        ratio = r;
    } else {
        // Power iteration on [[64m, 2], [128m, 2]] applied to (1, s),
        // tracking s = second/first component; the growth factor of the
        // first component converges to the Perron eigenvalue.
        Real s = 1;
        for (int k = 0; k < 200; ++k) {
            ratio = Real(64) * m + 2 * s;
            s = (Real(128) * m + 2 * s) / ratio;
        }
    }
    Real err = abs(ratio - gamma) / gamma;
    if (rel_err_out) *rel_err_out = err;
    return err < Real("1e-8");
}

} // namespace gtm
