#include "phaselab/phase.hpp"

#include <array>
#include <sstream>
#include <stdexcept>

namespace phaselab {

namespace {

// A[j][k] = S2(j,k) * k!, so that n^j = sum_{k<=j} A[j][k] * C(n,k).
// Computed once up to degree 8; entries are small (max 8! * S2(8,8) = 40320).
struct StirlingTables {
    std::array<std::array<u64, kMaxPhaseDegree + 1>, kMaxPhaseDegree + 1> A{};
    std::array<std::array<i64, kMaxPhaseDegree + 1>, kMaxPhaseDegree + 1> s1{};  // signed, 1st kind
    std::array<u64, kMaxPhaseDegree + 1> fact{};

    StirlingTables() {
        std::array<std::array<u64, kMaxPhaseDegree + 1>, kMaxPhaseDegree + 1> S2{};
        S2[0][0] = 1;
        for (int j = 1; j <= kMaxPhaseDegree; ++j)
            for (int k = 1; k <= j; ++k) S2[j][k] = S2[j - 1][k - 1] + (u64)k * S2[j - 1][k];
        fact[0] = 1;
        for (int k = 1; k <= kMaxPhaseDegree; ++k) fact[k] = fact[k - 1] * (u64)k;
        for (int j = 0; j <= kMaxPhaseDegree; ++j)
            for (int k = 0; k <= j; ++k) A[j][k] = S2[j][k] * fact[k];
        // signed Stirling numbers of the first kind: x(x-1)...(x-m+1) = sum_j s1[m][j] x^j
        s1[0][0] = 1;
        for (int m = 1; m <= kMaxPhaseDegree; ++m)
            for (int j = 0; j <= m; ++j)
                s1[m][j] = (j > 0 ? s1[m - 1][j - 1] : 0) - (i64)(m - 1) * s1[m - 1][j];
    }
};

const StirlingTables& tables() {
    static const StirlingTables t;
    return t;
}

u64 binomial_u64(int n, int k) {
    if (k < 0 || k > n) return 0;
    u64 r = 1;
    for (int i = 1; i <= k; ++i) r = r * (u64)(n - k + i) / (u64)i;
    return r;
}

}  // namespace

u64 monomial_to_binomial_entry(int j, int k) { return tables().A[j][k]; }

PhasePoly phase_from_entries(const std::vector<std::pair<int, Frac256>>& entries) {
    int deg = 0;
    for (auto& [j, c] : entries) {
        if (j < 0 || j > kMaxPhaseDegree) throw std::invalid_argument("phase degree out of range");
        deg = std::max(deg, j);
    }
    PhasePoly P;
    P.coef.assign((std::size_t)deg + 1, Frac256::zero());
    for (auto& [j, c] : entries) P.coef[(std::size_t)j] = P.coef[(std::size_t)j] + c;
    P.normalize();
    return P;
}

PhasePoly parse_phase_spec(const std::string& spec) {
    std::vector<std::pair<int, Frac256>> entries;
    std::string s = spec;
    for (char& ch : s)
        if (ch == ';' || ch == ' ') ch = ',';
    std::stringstream ss(s);
    std::string item;
    bool any = false;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        any = true;
        if (item == "0") continue;  // the zero phase
        auto colon = item.find(':');
        if (colon == std::string::npos) throw std::invalid_argument("phase spec entry needs deg:coeff, got " + item);
        int deg;
        try {
            std::size_t pos;
            deg = std::stoi(item.substr(0, colon), &pos);
            if (pos != colon) throw std::invalid_argument("");
        } catch (...) {
            throw std::invalid_argument("bad degree in phase spec: " + item);
        }
        entries.emplace_back(deg, parse_coefficient(item.substr(colon + 1)));
    }
    if (!any) throw std::invalid_argument("empty phase spec");
    return phase_from_entries(entries);
}

Frac256 frac_eval(const PhasePoly& P, i64 n) {
    if (n > kMaxPhaseArg || n < -kMaxPhaseArg) throw range_error("frac_eval: |n| > 2^30");
    u64 m = (u64)(n < 0 ? -n : n);
    bool flip = n < 0;
    int s = P.degree();
    Frac256 acc = P.coef[(std::size_t)s];
    if (flip && (s & 1)) acc = -acc;
    for (int j = s - 1; j >= 0; --j) {
        Frac256 c = P.coef[(std::size_t)j];
        if (flip && (j & 1)) c = -c;
        acc = acc.mul_u64(m) + c;
    }
    return acc;
}

std::complex<double> eval_phase(const PhasePoly& P, i64 n) { return unit_phase(frac_eval(P, n)); }

PhasePoly substitute(const PhasePoly& P, i64 q, i64 a) {
    if (q == 0) throw std::invalid_argument("substitute: q must be nonzero");
    if (q > kMaxPhaseArg || q < -kMaxPhaseArg || a > kMaxPhaseArg || a < -kMaxPhaseArg)
        throw range_error("substitute: |q|,|a| > 2^30");
    int s = P.degree();
    // q^i * a^(j-i) <= 2^(30*8) < 2^256: the integer multipliers never wrap
    u64 qa = (u64)(q < 0 ? -q : q), aa = (u64)(a < 0 ? -a : a);
    std::vector<U256> qpow((std::size_t)s + 1), apow((std::size_t)s + 1);
    qpow[0] = U256::one();
    apow[0] = U256::one();
    for (int i = 1; i <= s; ++i) {
        qpow[(std::size_t)i] = qpow[(std::size_t)i - 1].mul_small(qa);
        apow[(std::size_t)i] = apow[(std::size_t)i - 1].mul_small(aa);
    }
    PhasePoly Q;
    Q.coef.assign((std::size_t)s + 1, Frac256::zero());
    for (int j = 0; j <= s; ++j) {
        for (int i = 0; i <= j; ++i) {
            U256 mult = qpow[(std::size_t)i].mul(apow[(std::size_t)(j - i)]).mul_small(binomial_u64(j, i));
            bool negative = ((q < 0 && (i & 1)) != (a < 0 && ((j - i) & 1)));
            Frac256 term = P.coef[(std::size_t)j].mul_u256(mult);
            Q.coef[(std::size_t)i] = Q.coef[(std::size_t)i] + (negative ? -term : term);
        }
    }
    Q.normalize();
    return Q;
}

BinomialCoeffs to_binomial(const PhasePoly& P) {
    int s = P.degree();
    BinomialCoeffs B;
    B.b.assign((std::size_t)s + 1, Frac256::zero());
    for (int k = 0; k <= s; ++k)
        for (int j = k; j <= s; ++j)
            B.b[(std::size_t)k] = B.b[(std::size_t)k] + P.coef[(std::size_t)j].mul_u64(tables().A[j][k]);
    return B;
}

PhasePoly from_binomial(const BinomialCoeffs& B) {
    int s = B.degree();
    // back-substitute b_k = sum_{j>=k} A[j][k] alpha_j from the top; dividing
    // by A[k][k] = k! = odd * 2^e inverts the odd part mod 2^256 and shifts
    // out the 2-part (exact whenever the residual is divisible by 2^e)
    std::vector<Frac256> rem = B.b;
    PhasePoly P;
    P.coef.assign((std::size_t)s + 1, Frac256::zero());
    for (int k = s; k >= 0; --k) {
        u64 f = tables().fact[k];
        int e = __builtin_ctzll(f);
        u64 odd = f >> e;
        // inverse of odd mod 2^64 by Newton, lifted limb-wise to 2^256
        u64 inv = odd;
        for (int it = 0; it < 6; ++it) inv *= 2 - odd * inv;
        U256 v = rem[(std::size_t)k].v;
        // multiply by inv of odd part mod 2^256 (inv64 lifts because odd*inv = 1 mod 2^64;
        // iterate on 256-bit: i_{n+1} = i_n(2 - odd*i_n))
        U256 iv = U256{inv};
        for (int it = 0; it < 3; ++it) {
            U256 two{2};
            iv = iv.mul(two - U256{odd}.mul(iv));
        }
        v = v.mul(iv);
        v = v.shr((unsigned)e);
        P.coef[(std::size_t)k] = Frac256{v};
        // subtract alpha_k's contribution from the lower rows
        for (int kk = 0; kk < k; ++kk)
            rem[(std::size_t)kk] = rem[(std::size_t)kk] - P.coef[(std::size_t)k].mul_u64(tables().A[k][kk]);
    }
    P.normalize();
    return P;
}

double smoothness_norm(const PhasePoly& P, i64 N) {
    if (N < 1) throw std::invalid_argument("smoothness_norm: N >= 1 required");
    BinomialCoeffs B = to_binomial(P);
    double best = 0.0;
    double Npow = 1.0;
    for (int j = 1; j <= B.degree(); ++j) {
        Npow *= (double)N;
        best = std::max(best, Npow * B.b[(std::size_t)j].dist_to_int());
    }
    return best;
}

}  // namespace phaselab
