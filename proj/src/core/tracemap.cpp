#include "core/tracemap.hpp"

#include "core/chebyshev.hpp"

namespace gtm {

void validate(const Model& model) {
    if (model.m < 1 || model.m > 64) {
        throw ConfigError("model: m must be in [1, 64]");
    }
    Real lam = parse_decimal(model.lambda);
    if (!(lam > 0)) {
        throw ConfigError("model: lambda must be > 0");
    }
}

Real model_lambda(const Model& model) { return parse_decimal(model.lambda); }

TraceJet initial_jet(const Model& model, const Real& t) {
    Real lam = model_lambda(model);
    TraceJet j;
    j.x = t - lam;
    j.y = t * t - lam * lam - 2;
    j.dx = 1;
    j.dy = 2 * t;
    j.level = 0;
    return j;
}

namespace {

// tr(A^j B^k) and its t-derivative from the seed-level data
//   p = tr A, q = tr B, w = tr(AB)  (all depending on t),
// for unimodular A, B:
//   tr(A^j B^k) = d_j(p) d_k(q) w - d_j(p) d_{k-1}(q) p
//               - d_{j-1}(p) d_k(q) q + 2 d_{j-1}(p) d_{k-1}(q).
struct PairTrace {
    Real v, dv;
};

PairTrace product_trace(long j, long k,
                        const Real& p, const Real& dp,
                        const Real& q, const Real& dq,
                        const Real& w, const Real& dw) {
    ChebPair cp = cheb_pair(j, p);
    ChebPair cq = cheb_pair(k, q);
    PairTrace r;
    r.v = cp.dk * cq.dk * w - cp.dk * cq.dkm1 * p - cp.dkm1 * cq.dk * q
        + 2 * cp.dkm1 * cq.dkm1;
    // Chain rule: every d_*(p) contributes d_*'(p) * dp, etc.
    Real Dp_j   = cp.ddk * dp,  Dp_jm1 = cp.ddkm1 * dp;
    Real Dq_k   = cq.ddk * dq,  Dq_km1 = cq.ddkm1 * dq;
    r.dv = (Dp_j * cq.dk + cp.dk * Dq_k) * w + cp.dk * cq.dk * dw
         - (Dp_j * cq.dkm1 + cp.dk * Dq_km1) * p - cp.dk * cq.dkm1 * dp
         - (Dp_jm1 * cq.dk + cp.dkm1 * Dq_k) * q - cp.dkm1 * cq.dk * dq
         + 2 * (Dp_jm1 * cq.dkm1 + cp.dkm1 * Dq_km1);
    return r;
}

} // namespace

TraceJet step_jet(const Model& model, const TraceJet& jet) {
    const long m = model.m;
    TraceJet next;
    next.level = jet.level + 1;
    if (jet.level == 0) {
        // tr M_0 != tr N_0, so the polynomial recursion below does not
        // apply; use the exact product-trace formula with
        //   p = tr M_0 = x_0,  q = tr N_0 = x_0 + 2 lambda,  w = y_0.
        Real lam = model_lambda(model);
        Real p = jet.x, dp = jet.dx;
        Real q = jet.x + 2 * lam, dq = jet.dx;
        // x_1 = tr M_1 = tr(N_0^m M_0^m) = tr(M_0^m N_0^m)
        PairTrace xr = product_trace(m, m, p, dp, q, dq, jet.y, jet.dy);
        PairTrace yr = product_trace(2 * m, 2 * m, p, dp, q, dq, jet.y, jet.dy);
        next.x = xr.v;
        next.dx = xr.dv;
        next.y = yr.v;
        next.dy = yr.dv;
        return next;
    }
    // n >= 1: tr M_n = tr N_n = x_n and the step closes over (x, y).
    ChebPair cm = cheb_pair(m, jet.x);
    ChebPair c2m = cheb_pair(2 * m, jet.x);
    Real ym2 = jet.y - 2;
    next.x = cm.dk * cm.dk * ym2 + 2;
    next.y = c2m.dk * c2m.dk * ym2 + 2;
    next.dx = 2 * cm.dk * cm.ddk * ym2 * jet.dx + cm.dk * cm.dk * jet.dy;
    next.dy = 2 * c2m.dk * c2m.ddk * ym2 * jet.dx + c2m.dk * c2m.dk * jet.dy;
    return next;
}

TraceJet trace_eval(const Model& model, int level, const Real& t) {
    if (level < 0) throw ConfigError("trace_eval: negative level");
    TraceJet j = initial_jet(model, t);
    for (int n = 0; n < level; ++n) j = step_jet(model, j);
    return j;
}

std::string substitution_word(int m, int level, long max_len) {
    if (m < 1) throw ConfigError("substitution_word: m must be >= 1");
    if (level < 0) throw ConfigError("substitution_word: negative level");
    // Length is (2m)^level; reject before allocating.
    double len_est = 1.0;
    for (int n = 0; n < level; ++n) {
        len_est *= 2.0 * m;
        if (len_est > static_cast<double>(max_len)) {
            throw LimitError("substitution_word: length (2m)^level exceeds cap");
        }
    }
    std::string w = "a";
    for (int n = 0; n < level; ++n) {
        std::string next;
        next.reserve(w.size() * 2 * static_cast<size_t>(m));
        for (char c : w) {
            char first = c, second = (c == 'a') ? 'b' : 'a';
            next.append(static_cast<size_t>(m), first);
            next.append(static_cast<size_t>(m), second);
        }
        w.swap(next);
    }
    return w;
}

std::pair<Mat2, Mat2> matrix_oracle(const Model& model, int level, const Real& t,
                                    long max_len) {
    validate(model);
    if (level < 0) throw ConfigError("matrix_oracle: negative level");
    Real lam = model_lambda(model);
    Mat2 Ma{t - lam, Real(-1), Real(1), Real(0)};
    Mat2 Mb{t + lam, Real(-1), Real(1), Real(0)};
    Mat2 M = Ma, N = Mb;
    double len_est = 1.0;
    for (int n = 0; n < level; ++n) {
        len_est *= 2.0 * model.m;
        if (len_est > static_cast<double>(max_len)) {
            throw LimitError("matrix_oracle: word length exceeds cap");
        }
        Mat2 Mm = sl2_pow(M, model.m);
        Mat2 Nm = sl2_pow(N, model.m);
        Mat2 nextM = Nm * Mm; // image of 'a' is a^m b^m, matrices compose right-to-left
        Mat2 nextN = Mm * Nm;
        M = nextM;
        N = nextN;
        Real scale = M.max_abs();
        Real tol = rel_eps(16) * (scale > 1 ? scale * scale : Real(1));
        if (abs(M.det() - 1) > tol || abs(N.det() - 1) > tol) {
            throw PrecisionError("matrix_oracle: determinant drifted from 1");
        }
    }
    return {M, N};
}

Real word_oracle(const Model& model, int level, const Real& t, long max_len) {
    validate(model);
    Real lam = model_lambda(model);
    Mat2 Ma{t - lam, Real(-1), Real(1), Real(0)};
    Mat2 Mb{t + lam, Real(-1), Real(1), Real(0)};
    std::string w = substitution_word(model.m, level, max_len);
    // Transfer convention: the first letter acts first, so it sits rightmost
    // in the product; left-multiply as we walk the word.
    Mat2 acc = Mat2::identity();
    for (char c : w) {
        acc = (c == 'a' ? Ma : Mb) * acc;
    }
    return acc.trace();
}

} // namespace gtm
