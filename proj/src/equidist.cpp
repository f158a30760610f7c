#include "phaselab/equidist.hpp"

#include "phaselab/parallel.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace phaselab {

WeylSum weyl_sum(const PhasePoly& P, i64 n0, i64 n1, i64 step) {
    if (step <= 0) throw std::invalid_argument("weyl_sum: step must be positive");
    WeylSum r;
    if (n1 < n0) {
        r.empty_range = true;
        return r;
    }
    if ((n1 - n0) / step > 1000000000ll) throw capacity_error("weyl_sum: range too long");
    KahanComplex acc;
    for (i64 n = n0; n <= n1; n += step) acc.add(eval_phase(P, n));
    r.value = acc.value();
    return r;
}

std::vector<i64> convergent_denominators(const Frac256& x, i64 q_cap) {
    std::vector<i64> qs;
    // Euclid on (num, den) = (x * 2^256, 2^256) in 320-bit space
    U320 num, den;
    for (int i = 0; i < 4; ++i) num.w[(std::size_t)i] = x.v.w[(std::size_t)i];
    den.w[4] = 1;
    i64 q_prev = 0, q_cur = 1;  // q_{-1}, q_0
    while (!num.is_zero()) {
        U320 rem;
        U320 a = U320::divmod(den, num, rem);
        if (a.bit_length() > 32) break;  // partial quotient cap 2^32
        u64 ak = a.w[0];
        if (q_cur > (q_cap - q_prev) / (i64)std::max<u64>(ak, 1)) break;  // q would pass cap
        i64 q_next = (i64)ak * q_cur + q_prev;
        q_prev = q_cur;
        q_cur = q_next;
        if (q_cur > 1) qs.push_back(q_cur);
        if (q_cur > q_cap) break;
        den = num;
        num = rem;
    }
    return qs;
}

namespace {

// check one candidate ell against all binomial-coefficient bounds
std::optional<RecurrenceWitness> check_ell(const BinomialCoeffs& B, i64 N, double slack, i64 ell) {
    RecurrenceWitness w;
    w.ell = ell;
    double thr = slack;
    for (int j = 1; j <= B.degree(); ++j) {
        thr /= (double)N;
        double gap = B.b[(std::size_t)j].mul_i64(ell).dist_to_int();
        if (gap > thr) return std::nullopt;
        w.bounds.push_back({j, gap, thr});
    }
    return w;
}

}  // namespace

std::optional<RecurrenceWitness> recurrence_find(const PhasePoly& P, i64 N, i64 L_max, double slack) {
    if (N < 10) throw std::invalid_argument("recurrence_find: N >= 10 required");
    if (L_max < 1 || L_max > 1000000) throw std::invalid_argument("recurrence_find: L_max out of [1,10^6]");
    BinomialCoeffs B = to_binomial(P);
    if (B.degree() == 0) return check_ell(B, N, slack, 1);  // constant: ell = 1 vacuously

    // convergents of the leading binomial coefficient cap the exhaustive scan
    i64 scan_to = L_max;
    for (i64 q : convergent_denominators(B.b.back(), L_max)) {
        if (q > L_max) break;
        if (check_ell(B, N, slack, q)) {
            scan_to = q;
            break;
        }
    }
    for (i64 ell = 1; ell <= scan_to; ++ell) {
        auto w = check_ell(B, N, slack, ell);
        if (w) return w;
    }
    return std::nullopt;
}

EquidistVerdict total_equidist_test(const PhasePoly& P, i64 N, double delta, int trials, u64 seed, i64 L_max_override,
                                    double slack_override) {
    if (!(delta > 0 && delta < 0.5)) throw std::invalid_argument("total_equidist_test: delta in (0, 1/2)");
    if (trials < 0 || trials > 10000) throw std::invalid_argument("total_equidist_test: trials out of [0,10^4]");
    EquidistVerdict v;
    v.seed = seed;
    v.small_N_warning = (double)N < std::pow(delta, -4.0);

    // Any witness must be drift-sound: with s coefficients obeying
    // ||l b_j|| <= (delta N)^{-j} / (6s), the phase l P(n) moves by at most
    // 1/6 of a revolution across [1, ceil(delta N)], so that progression has
    // |mean e(l P)| >= cos(pi/3) = 1/2.  The delta^-3 slack applies where it
    // is tighter; without the cap the j = 1 bound goes vacuous for large N
    // and every phase would be declared obstructed at l = 1.
    double slack = slack_override > 0 ? slack_override : std::pow(delta, -3.0);
    i64 L_max = L_max_override > 0 ? L_max_override : (i64)std::min(1e6, std::ceil(std::pow(delta, -2.0)));
    int s = std::max(1, P.degree());
    double cap = 1.0 / (6.0 * (double)s);
    BinomialCoeffs B = to_binomial(P);
    if (B.degree() == 0) {
        v.obstruction = RecurrenceWitness{1, {}};
    } else {
        for (i64 ell = 1; ell <= L_max && !v.obstruction; ++ell) {
            RecurrenceWitness w;
            w.ell = ell;
            bool ok = true;
            for (int j = 1; j <= B.degree(); ++j) {
                double thr = std::min(slack * std::pow((double)N, -j), cap * std::pow(delta * (double)N, -j));
                double gap = B.b[(std::size_t)j].mul_i64(ell).dist_to_int();
                if (gap > thr) {
                    ok = false;
                    break;
                }
                w.bounds.push_back({j, gap, thr});
            }
            if (ok) v.obstruction = w;
        }
    }
    v.obstructed = v.obstruction.has_value();

    // diagnostic scan: random progressions of length >= delta*N
    std::mt19937_64 rng(seed);
    i64 min_len = std::max<i64>(2, (i64)std::ceil(delta * (double)N));
    for (int t = 0; t < trials; ++t) {
        i64 len = min_len + (i64)(rng() % (u64)std::max<i64>(1, N - min_len + 1));
        len = std::min(len, N);
        i64 max_step = std::max<i64>(1, (N - 1) / std::max<i64>(1, len - 1));
        i64 step = 1 + (i64)(rng() % (u64)max_step);
        i64 max_start = N - (len - 1) * step;
        i64 start = 1 + (i64)(rng() % (u64)std::max<i64>(1, max_start));
        KahanComplex acc;
        for (i64 m = 0; m < len; ++m) acc.add(eval_phase(P, start + m * step));
        double mag = std::abs(acc.value()) / (double)len;
        if (mag > v.evidence.magnitude) v.evidence = {start, step, len, mag};
    }
    return v;
}

ShiftedCombination shifted_combination(const PhasePoly& Q, const std::vector<std::pair<i64, i64>>& shifts) {
    if (shifts.empty()) throw std::invalid_argument("shifted_combination: empty shift list");
    for (std::size_t i = 0; i < shifts.size(); ++i) {
        if (std::abs(shifts[i].first) > 1000000 || std::abs(shifts[i].second) > 10000)
            throw range_error("shifted_combination: |j| <= 10^6, |h| <= 10^4");
        for (std::size_t k = i + 1; k < shifts.size(); ++k)
            if (shifts[i].second == shifts[k].second)
                throw std::invalid_argument("shifted_combination: shifts must be distinct");
    }
    int s = Q.degree();
    ShiftedCombination out;
    out.g.coef.assign((std::size_t)s + 1, Frac256::zero());
    for (int d = 0; d <= s; ++d) {
        for (int m = d; m <= s; ++m) {
            // J_{d,m} = C(m,d) * sum_r j_r h_r^(m-d); |sum| <= k * 10^6 * 10^(4*8)
            // sits well inside 256 bits, and the wrapped two's-complement value
            // multiplies the coefficient exactly mod 1
            U256 pos, neg;
            for (auto& [j, h] : shifts) {
                u64 habs = (u64)(h < 0 ? -h : h);
                U256 hp = U256::one();
                for (int e = 0; e < m - d; ++e) hp = hp.mul_small(habs);
                bool negative = ((h < 0) && ((m - d) & 1)) != (j < 0);
                U256 term = hp.mul_small((u64)(j < 0 ? -j : j));
                if (negative)
                    neg += term;
                else
                    pos += term;
            }
            u64 binom = 1;
            for (int i = 1; i <= d; ++i) binom = binom * (u64)(m - d + i) / (u64)i;
            U256 J = (pos - neg).mul_small(binom);  // wrapping two's complement is fine mod 1
            out.g.coef[(std::size_t)d] = out.g.coef[(std::size_t)d] + Q.coef[(std::size_t)m].mul_u256(J);
        }
    }
    out.g.normalize();
    out.constant = out.g.degree() == 0;
    return out;
}

std::optional<i64> multivar_recurrence_find(const std::vector<MultiMonomial>& coeffs, const std::vector<i64>& dims,
                                            double eps, double delta) {
    if (dims.size() > 3) throw std::invalid_argument("multivar_recurrence_find: k <= 3");
    for (i64 N : dims)
        if (N < 1 || N > 1000) throw std::invalid_argument("multivar_recurrence_find: N_i in [1,10^3]");
    for (auto& m : coeffs) {
        if (m.exps.size() != dims.size()) throw std::invalid_argument("multivar: exponent arity mismatch");
        int total = 0;
        for (int e : m.exps) total += e;
        if (total > 4) throw std::invalid_argument("multivar: total degree <= 4");
    }
    double slack = std::pow(delta, -4.0);
    i64 q_max = (i64)std::floor(slack);
    for (i64 q = 1; q <= q_max; ++q) {
        bool ok = true;
        for (auto& m : coeffs) {
            double thr = eps * slack;
            for (std::size_t i = 0; i < dims.size(); ++i) thr *= std::pow((double)dims[i], -(double)m.exps[i]);
            if (m.coeff.mul_i64(q).dist_to_int() > thr) {
                ok = false;
                break;
            }
        }
        if (ok) return q;
    }
    return std::nullopt;
}

}  // namespace phaselab
