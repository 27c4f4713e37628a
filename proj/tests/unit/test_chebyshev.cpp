// Chebyshev-style trace polynomials d_k and the unimodular power formula.

#include <doctest.h>

#include <boost/math/constants/constants.hpp>

#include <vector>

#include "core/chebyshev.hpp"
#include "core/mat2.hpp"
#include "core/real.hpp"

using namespace gtm;

namespace {

// Direct recurrence evaluation, independent of cheb_eval's internals.
Real naive_d(long k, const Real& t) {
    Real prev = 0, cur = 1; // d_0, d_1
    if (k == 0) return prev;
    for (long i = 1; i < k; ++i) {
        Real next = t * cur - prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

Mat2 naive_pow(const Mat2& A, long k) {
    Mat2 r = Mat2::identity();
    for (long i = 0; i < k; ++i) r = r * A;
    return r;
}

bool mat_close(const Mat2& p, const Mat2& q, int slack_bits) {
    return close_rel(p.a, q.a, slack_bits) && close_rel(p.b, q.b, slack_bits) &&
           close_rel(p.c, q.c, slack_bits) && close_rel(p.d, q.d, slack_bits);
}

} // namespace

TEST_CASE("low-order d_k match their closed-form polynomials") {
    std::vector<Real> points = {Real(0), Real(1), Real(-1), Real("0.5"),
                                Real("-2.25"), Real(3), Real("1.75")};
    for (const Real& t : points) {
        CHECK(cheb_eval(0, t) == 0);
        CHECK(cheb_eval(1, t) == 1);
        CHECK(cheb_eval(2, t) == t);
        // d_3 = t^2 - 1, d_4 = t^3 - 2t: exact in binary arithmetic at
        // dyadic points, so equality (not closeness) is the right check.
        CHECK(cheb_eval(3, t) == t * t - 1);
        CHECK(cheb_eval(4, t) == t * t * t - 2 * t);

        CHECK(cheb_deriv(0, t) == 0);
        CHECK(cheb_deriv(1, t) == 0);
        CHECK(cheb_deriv(2, t) == 1);
        CHECK(cheb_deriv(3, t) == 2 * t);
        CHECK(cheb_deriv(4, t) == 3 * t * t - 2);
    }
}

TEST_CASE("frozen spot values at t = 1.5") {
    // d_4(3/2) = 27/8 - 3 = 3/8 and d_4'(3/2) = 27/4 - 2 = 19/4, both dyadic.
    CHECK(cheb_eval(4, Real("1.5")) == Real("0.375"));
    CHECK(cheb_deriv(4, Real("1.5")) == Real("4.75"));
}

TEST_CASE("cheb_eval agrees with the bare recurrence at higher orders") {
    std::vector<Real> points = {Real("0.125"), Real("-1.875"), Real("1.999"),
                                Real("2.5"), Real("-3.0")};
    for (long k : {5L, 9L, 17L, 33L, 64L}) {
        for (const Real& t : points) {
            CHECK(close_rel(cheb_eval(k, t), naive_d(k, t), 8));
        }
    }
}

TEST_CASE("d_k vanishes at 2 cos(j pi / k)") {
    for (long k : {2L, 3L, 5L, 8L, 13L}) {
        for (long j = 1; j < k; ++j) {
            Real theta = Real(j) * boost::math::constants::pi<Real>() / Real(k);
            Real t = 2 * cos(theta);
            // sin(k theta) = 0 up to the rounding of theta itself; the
            // recurrence amplifies that by at most O(k).
            CHECK(abs(cheb_eval(k, t)) < rel_eps(16) * k);
        }
    }
}

TEST_CASE("derivative recurrence d'_{k+1} = d_k + t d'_k - d'_{k-1}") {
    std::vector<Real> points = {Real("0.3"), Real("-1.1"), Real("2.2"), Real("3.7")};
    for (const Real& t : points) {
        for (long k = 1; k <= 20; ++k) {
            Real lhs = cheb_deriv(k + 1, t);
            Real rhs = cheb_eval(k, t) + t * cheb_deriv(k, t) - cheb_deriv(k - 1, t);
            CHECK(close_rel(lhs, rhs, 10));
        }
    }
}

TEST_CASE("cheb_pair matches the single-order entry points") {
    std::vector<Real> points = {Real("0.7"), Real("-1.4"), Real("2.01"), Real(4)};
    for (long k : {1L, 2L, 7L, 31L}) {
        for (const Real& t : points) {
            ChebPair c = cheb_pair(k, t);
            CHECK(c.dk == cheb_eval(k, t));
            CHECK(c.dkm1 == cheb_eval(k - 1, t));
            CHECK(c.ddk == cheb_deriv(k, t));
            CHECK(c.ddkm1 == cheb_deriv(k - 1, t));
        }
    }
}

TEST_CASE("|d_k| <= sqrt(2) on [-sqrt(2), sqrt(2)]") {
    Real s2 = sqrt(Real(2));
    Real bound = s2 + rel_eps(8);
    const int samples = 400;
    for (long k : {1L, 2L, 3L, 5L, 8L, 21L, 64L}) {
        for (int i = 0; i <= samples; ++i) {
            Real t = -s2 + (2 * s2 * i) / samples;
            CHECK(abs(cheb_eval(k, t)) <= bound);
        }
    }
}

TEST_CASE("|d_k'| <= sqrt(2) k on [-sqrt(2), sqrt(2)]") {
    Real s2 = sqrt(Real(2));
    const int samples = 400;
    for (long k : {1L, 2L, 3L, 5L, 8L, 21L, 64L}) {
        Real bound = s2 * k + rel_eps(8) * k;
        for (int i = 0; i <= samples; ++i) {
            Real t = -s2 + (2 * s2 * i) / samples;
            CHECK(abs(cheb_deriv(k, t)) <= bound);
        }
    }
}

TEST_CASE("|d_{2k}| <= 2 |d_k| on [-2, 2]") {
    const int samples = 400;
    for (long k : {1L, 2L, 3L, 5L, 8L, 32L}) {
        for (int i = 0; i <= samples; ++i) {
            Real t = -2 + Real(4 * i) / samples;
            Real lhs = abs(cheb_eval(2 * k, t));
            Real rhs = 2 * abs(cheb_eval(k, t));
            CHECK(lhs <= rhs + rel_eps(16));
        }
    }
}

TEST_CASE("sl2_pow reproduces direct products inside the trace window") {
    // Shear: trace exactly 2, powers stay exact integers.
    Mat2 shear{Real(1), Real(1), Real(0), Real(1)};
    for (long k : {0L, 1L, 2L, 7L, 40L}) {
        Mat2 p = sl2_pow(shear, k);
        CHECK(p.a == 1);
        CHECK(p.b == k);
        CHECK(p.c == 0);
        CHECK(p.d == 1);
    }

    // Rotation-like: trace 1, det 1.
    Mat2 r{Real(1), Real(-1), Real(1), Real(0)};
    for (long k : {2L, 3L, 5L, 12L}) {
        CHECK(mat_close(sl2_pow(r, k), naive_pow(r, k), 12));
    }
    // This one has period 6: r^6 = I.
    Mat2 r6 = sl2_pow(r, 6);
    CHECK(close_rel(r6.a, Real(1), 12));
    CHECK(abs(r6.b) < rel_eps(12));

    // Hyperbolic but still |trace| <= 4.
    Mat2 h{Real(2), Real(1), Real(1), Real(1)};
    CHECK(h.det() == 1);
    for (long k : {2L, 5L, 9L}) {
        CHECK(mat_close(sl2_pow(h, k), naive_pow(h, k), 16));
    }
}

TEST_CASE("sl2_pow falls back cleanly when |trace| > 4") {
    Mat2 big{Real(4), Real(1), Real(3), Real(1)}; // det 1, trace 5
    for (long k : {2L, 3L, 8L, 20L}) {
        CHECK(mat_close(sl2_pow(big, k), naive_pow(big, k), 8));
    }
    // Entries blow up like the larger eigenvalue; make sure nothing clipped.
    Mat2 p = sl2_pow(big, 20);
    CHECK(p.a > Real("1e10"));
    CHECK(close_rel(p.det(), Real(1), 24));
}

TEST_CASE("sl2_pow rejects bad inputs") {
    Mat2 not_unimodular{Real(2), Real(0), Real(0), Real(1)};
    CHECK_THROWS_AS(sl2_pow(not_unimodular, 3), InvariantError);
    Mat2 fine{Real(1), Real(0), Real(0), Real(1)};
    CHECK_THROWS_AS(sl2_pow(fine, -1), ConfigError);
}
