#pragma once

// Gowers uniformity norms over [N] (via the Z/(2N+1)Z embedding and ratio
// normalization), the normalized progression von Mangoldt function
// Lambda_{a,q}(n) = (phi(q)/q) Lambda(qn+a), and the local/archimedean
// factors of linear-forms main terms.

#include "phaselab/arith.hpp"
#include "phaselab/phase.hpp"

#include <complex>
#include <vector>

namespace phaselab {

struct IntervalFunction {
    std::vector<std::complex<double>> v;  // v[n-1] = f(n), supported on [N]

    i64 N() const { return (i64)v.size(); }
};

// ||f||_{U^k[N]} for k in {1,2,3}; k = 2 uses the Fourier fast path
// (||g||_{U^2}^4 = sum |g-hat|^4), k = 3 recurses through U^2 of multiplicative
// derivatives.  k = 3 capped at N = 500, k = 2 at N = 10^5.
double gowers_norm(const IntervalFunction& f, int k, int threads = 1);

// O(N'^{k+1}) literal multilinear average, for cross-checks at small N
double gowers_norm_direct(const IntervalFunction& f, int k);

IntervalFunction lambda_aq(const FactorTable& t, i64 a, i64 q, i64 N);

struct UniformityDiagnostic {
    double value = 0;          // || Lambda_{a,q} - 1 ||_{U^k[N]}
    bool primorial_divides = false;  // whether P(w) | q (the W-trick hypothesis)
    i64 w = 0;
};

UniformityDiagnostic uniformity_diagnostic(const FactorTable& t, i64 a, i64 q, i64 N, int k, i64 w = 2,
                                           int threads = 1);

struct AffineForm {
    std::vector<i64> coef;  // L(n) = coef . n + c0
    i64 c0 = 0;
};

struct AffineSystem {
    std::vector<AffineForm> forms;
    i64 q = 1;
    std::vector<i64> shift;  // a in (Z/qZ)^d; empty = zero

    int d() const { return forms.empty() ? 0 : (int)forms[0].coef.size(); }
    int t() const { return (int)forms.size(); }
    double size_at(i64 N) const;
};

// beta_p = E_{n in (Z/pZ)^d} prod_i Lambda_{Z/pZ}(L_i(qn+a)),
// Lambda_{Z/pZ}(b) = p/(p-1) 1_{(b,p)=1}; exact rational, returned as double.
// Brute force over (Z/pZ)^d when cheap, inclusion-exclusion via F_p ranks
// otherwise; local_factor_bruteforce is exposed for cross-checking.
double local_factor(i64 p, const AffineSystem& sys);
double local_factor_bruteforce(i64 p, const AffineSystem& sys);
double local_factor_inclusion_exclusion(i64 p, const AffineSystem& sys);

struct VolumeEstimate {
    double value = 0;
    double stderr_ = 0;
    u64 seed = 0;
};

// beta_infinity = vol_d([1,x]^d intersect {L_i(qu+a) > 0}); exact for d <= 2
// (interval / polygon clipping), Monte Carlo with recorded seed for d >= 3
VolumeEstimate beta_infinity(const AffineSystem& sys, i64 x, i64 samples = 1000000, u64 seed = 1);

struct LinearFormsCount {
    double lhs = 0;        // sum over [1,x]^d of prod Lambda(L_i(qn+a))
    double predicted = 0;  // beta_inf * prod_{p<=p_cut} beta_p
    double ratio = 0;
    double beta_inf = 0;
    i64 p_cut = 0;
};

LinearFormsCount linear_forms_count(const FactorTable& t, const AffineSystem& sys, i64 x, i64 p_cut = 10000,
                                    int threads = 1, u64 seed = 1);

}  // namespace phaselab
