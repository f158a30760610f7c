#pragma once

// Weyl sums, Diophantine recurrence detection, and total-equidistribution
// verdicts for polynomial phases.  A phase fails to be totally
// delta-equidistributed exactly when some small integer multiple of it has
// tiny binomial-basis coefficients at scale N; the verdict is driven by that
// recurrence search (sound), while a randomized progression scan supplies
// diagnostic evidence only.

#include "phaselab/phase.hpp"

#include <complex>
#include <optional>
#include <vector>

namespace phaselab {

struct WeylSum {
    std::complex<double> value{0.0, 0.0};
    bool empty_range = false;
};

// sum of e(P(n)) over n = n0, n0+step, ..., <= n1 (Kahan-compensated)
WeylSum weyl_sum(const PhasePoly& P, i64 n0, i64 n1, i64 step = 1);

struct RecurrenceWitness {
    i64 ell = 0;
    // per-degree (j, ||ell*b_j||, threshold slack*N^-j), binomial basis
    struct Bound {
        int j;
        double gap;
        double threshold;
    };
    std::vector<Bound> bounds;
};

// Smallest ell <= L_max with ||ell*b_j|| <= slack * N^-j for all 1 <= j <= s.
// Continued-fraction convergents of the leading coefficient bound the scan,
// then an exhaustive sweep below that bound guarantees minimality.
std::optional<RecurrenceWitness> recurrence_find(const PhasePoly& P, i64 N, i64 L_max, double slack);

// convergent denominators of x (partial quotients capped at 2^32), ascending
std::vector<i64> convergent_denominators(const Frac256& x, i64 q_cap);

struct EquidistVerdict {
    bool obstructed = false;
    std::optional<RecurrenceWitness> obstruction;
    // worst progression found by the diagnostic scan
    struct Evidence {
        i64 start = 0, step = 0, length = 0;
        double magnitude = 0.0;  // |mean of e(P)| on that progression
    } evidence;
    u64 seed = 0;
    bool small_N_warning = false;  // N < delta^-4: too short for the recurrence bounds to mean much
};

// Verdict: Obstructed iff some ell <= L_max (default ceil(delta^-2), capped
// at 10^6) has ||ell b_j|| <= min(slack N^-j, (delta N)^-j / 6s) for all
// 1 <= j <= s, slack defaulting to delta^-3.  The cap keeps every witness
// drift-sound: the progression [1, ceil(delta N)] then carries
// |mean e(ell P)| >= 1/2, which is what the obstruction certifies.
EquidistVerdict total_equidist_test(const PhasePoly& P, i64 N, double delta, int trials, u64 seed = 1,
                                    i64 L_max_override = 0, double slack_override = 0);

// g(y) = sum_i j_i Q(y + h_i) mod 1 via the exact coefficient algebra
//   beta_d = sum_{d<=m<=s} J_{d,m} alpha_m,  J_{d,m} = C(m,d) sum_r j_r h_r^{m-d}
struct ShiftedCombination {
    PhasePoly g;
    bool constant = false;  // degenerate: all degree>=1 coefficients vanished
};
ShiftedCombination shifted_combination(const PhasePoly& Q, const std::vector<std::pair<i64, i64>>& shifts);

// Multivariate recurrence (brute force over q <= delta^-4): smallest q with
// ||q * alpha_I|| <= eps * delta^-4 * prod N_i^-i for every listed monomial.
struct MultiMonomial {
    std::vector<int> exps;
    Frac256 coeff;
};
std::optional<i64> multivar_recurrence_find(const std::vector<MultiMonomial>& coeffs, const std::vector<i64>& dims,
                                            double eps, double delta);

}  // namespace phaselab
