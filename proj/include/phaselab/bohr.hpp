#pragma once

// Vinogradov-style minorants for 1_{||x||<rho}, Bohr-set prime counts,
// correlation sums, admissibility and singular series of linear-form tuples,
// and Chen-prime classification/scans.
//
// The minorant is the periodized trapezoid (1/(2b)) 1_[-a,a] * 1_[-b,b] with
// a = rho(1-eta/2), b = rho*eta/2: it is 1 on ||x|| <= rho(1-eta), 0 outside
// ||x|| < rho, has c_0 = 2rho(1-eta/2) and Fourier coefficients
//   c_j = sin(2 pi j a) sin(2 pi j b) / (2 pi^2 j^2 b),
// whose tail beyond K is certified by sum_{|j|>K} |c_j| <= 2/(pi^2 rho eta K).

#include "phaselab/arith.hpp"
#include "phaselab/phase.hpp"

#include <optional>
#include <vector>

namespace phaselab {

struct MinorantSeries {
    double rho = 0, eta = 0;
    i64 K = 0;
    double a = 0, b = 0;      // trapezoid half-widths
    double c0 = 0;            // mean = 2 rho (1 - eta/2)
    std::vector<double> cj;   // cj[j-1] = c_j = c_{-j} (real, even), 1 <= j <= K
    double certified_tail = 0;
};

MinorantSeries minorant_build(double rho, double eta, i64 K);

double minorant_eval_piecewise(const MinorantSeries& g, double x);  // exact trapezoid
double minorant_eval_piecewise(const MinorantSeries& g, const Frac256& x);
double minorant_eval_series(const MinorantSeries& g, double x);  // c_0 + truncated sum

struct BohrPrimeCount {
    i64 count = 0;
    double expected = 0;  // 2 rho pi(x)
    double ratio = 0;
    bool degenerate_constant = false;  // Q constant: the count is all-or-nothing
};

BohrPrimeCount bohr_prime_count(const FactorTable& t, const PhasePoly& Q, double rho, i64 x);

// sum_{n<=x} g(Q(n+h_1)) ... g(Q(n+h_k)), exact-piecewise evaluation
double correlation_sum(const MinorantSeries& g, const PhasePoly& Q, const std::vector<i64>& shifts, i64 x,
                       int threads = 1);

struct AdmissibleCertificate {
    bool admissible = false;
    // (p, witness residue a with p never dividing a + h_i), for checked p <= k
    std::vector<std::pair<i64, i64>> witnesses;
    i64 obstructed_prime = 0;  // set when inadmissible
};

AdmissibleCertificate is_admissible(const std::vector<i64>& h);

struct LinearForm {
    i64 a = 1, b = 0;  // L(n) = a n + b, a >= 1
};

struct SingularSeriesValue {
    double value = 0;
    double tail_estimate = 0;  // from the 1 + O(k^2/p^2) factor shape
    i64 p_cut = 0;
};

// S(L_1..L_k) = prod_p (1-1/p)^{-k} (1 - omega(p)/p), omega(p) = roots of
// prod L_i mod p; direct root scan for p <= 10^3, distinct-root counting above
SingularSeriesValue singular_series(const std::vector<LinearForm>& forms, i64 p_cut);

enum class ChenClass { No, Chen, ChenStrict };

// Chen: p prime with p+2 having at most two prime factors (with multiplicity);
// strict additionally requires every prime factor of p+2 to be >= p^smooth_floor
ChenClass chen_classify(const FactorTable& t, i64 p, double smooth_floor);

struct ChenBohrScan {
    i64 count = 0;
    i64 chen_total = 0;             // |P_Chen * [1,x]|
    std::vector<i64> witnesses;     // first 100
};

// Chen primes p <= x with ||Q(p)|| < p^-theta
ChenBohrScan chen_bohr_scan(const FactorTable& t, const PhasePoly& Q, double theta, i64 x);

// membership in the Chen-sieve almost-prime sets B_1 / B_2 at scale x
bool b_set_membership(const FactorTable& t, i64 n, i64 x, double eps, int which);

}  // namespace phaselab
