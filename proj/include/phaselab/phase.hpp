#pragma once

// Polynomial phases P(n) = sum_j alpha_j n^j mod 1 with Frac256 coefficients,
// evaluated exactly in the wrapping fixed-point ring.  Includes the binomial
// basis g(n) = b_0 + b_1*C(n,1) + ... + b_s*C(n,s) (the basis the smoothness
// norm sup_j N^j ||b_j|| is defined in) and substitution n -> qn+a.

#include "phaselab/errors.hpp"
#include "phaselab/frac256.hpp"

#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace phaselab {

inline constexpr int kMaxPhaseDegree = 8;
inline constexpr i64 kMaxPhaseArg = 1ll << 30;

struct PhasePoly {
    // coef[j] multiplies n^j; normalized so the leading stored coefficient is
    // nonzero unless the polynomial is constant
    std::vector<Frac256> coef{Frac256::zero()};

    int degree() const { return (int)coef.size() - 1; }
    bool is_constant() const { return degree() == 0; }

    void normalize() {
        while (coef.size() > 1 && coef.back().is_zero()) coef.pop_back();
        if (coef.empty()) coef.push_back(Frac256::zero());
    }

    static PhasePoly zero() { return PhasePoly{}; }
};

// build from (degree, coefficient) entries; degrees <= 8
PhasePoly phase_from_entries(const std::vector<std::pair<int, Frac256>>& entries);

// parse "deg:coeff,deg:coeff,..." with coeff = p/q | decimal | named constant;
// "0" alone denotes the zero phase
PhasePoly parse_phase_spec(const std::string& spec);

// P(n) mod 1, exact in the fixed-point ring up to one quantization step per
// Horner stage; |n| <= 2^30.  Negative n evaluates at |n| with odd-degree
// coefficients negated.
Frac256 frac_eval(const PhasePoly& P, i64 n);

// e(P(n)) as a unit complex number
std::complex<double> eval_phase(const PhasePoly& P, i64 n);

// Q with Q(n) = P(qn + a) mod 1, coefficients by exact binomial expansion
PhasePoly substitute(const PhasePoly& P, i64 q, i64 a);

struct BinomialCoeffs {
    std::vector<Frac256> b;  // b[j] multiplies C(n,j)
    int degree() const { return (int)b.size() - 1; }
};

// Exact integer change of basis b_k = sum_j S2(j,k) k! alpha_j (wrapping).
BinomialCoeffs to_binomial(const PhasePoly& P);

// Back-substitution inverse.  For B in the image of to_binomial the returned
// polynomial satisfies to_binomial(from_binomial(B)) == B exactly and defines
// the same function Z -> R/Z as any preimage.  (The monomial coordinates
// themselves are only determined up to integer-valued polynomials such as
// (n^2-n)/2, so vectors may legitimately differ from a chosen preimage.)
PhasePoly from_binomial(const BinomialCoeffs& B);

// ||g||_{C^infty(N)} = sup_{1<=j<=s} N^j ||b_j|| over binomial coefficients;
// 0 for constant polynomials (the sup over an empty index set)
double smoothness_norm(const PhasePoly& P, i64 N);

// Stirling-matrix entry A[j][k] = S2(j,k) * k! (n^j = sum_k A[j][k] C(n,k))
u64 monomial_to_binomial_entry(int j, int k);

}  // namespace phaselab
