#pragma once

// Vaughan's identity with y = z = x^(1/3), stored as explicit coefficient
// arrays and split into dyadic type I / type II pieces, and a Heath-Brown
// type decomposition of multiplicative functions (d_k, 1_S) into
// smooth * medium-prime * character-twisted-large-prime convolutions.
// Both are verified as exact identities at desk scale.
//
// Vaughan, for n > z (so in particular on (x^{2/3}, x]):
//
//   Lambda(n) = (mu_{<=y} * log)(n) - (sigma * 1)(n) + (Lambda_{>z} * gam)(n),
//   sigma = mu_{<=y} * Lambda_{<=z},   gam(k) = sum_{b|k, b>y} mu(b).
//
// Piece supports: type I coefficients live in [1, y]; type II pieces carry
// their rough side in (y, x/(y+1)].  The gamma side of the folded middle term
// genuinely extends below y (triples b,c,d <= y with product > x^{2/3} admit
// no two-sided-in-range grouping), so those pieces are flagged gamma_wide
// rather than forced into a support claim the identity cannot satisfy.

#include "phaselab/arith.hpp"
#include "phaselab/bvlab.hpp"
#include "phaselab/phase.hpp"

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace phaselab {

// coefficient sequence on [lo, lo+v.size()-1]
struct SeqArray {
    i64 lo = 1;
    std::vector<double> v;

    i64 hi() const { return lo + (i64)v.size() - 1; }
    double at(i64 i) const { return (i >= lo && i <= hi()) ? v[(std::size_t)(i - lo)] : 0.0; }
};

struct ConvolutionPiece {
    enum Kind { TypeI, TypeII } kind = TypeI;
    enum Delta { One, Log } delta = One;  // TypeI smooth side
    SeqArray a;                           // alpha (TypeI) or beta (TypeII)
    SeqArray b;                           // gamma (TypeII only)
    bool gamma_wide = false;              // gamma support dips below x^(1/3)
    int label = 0;
};

struct Decomposition {
    i64 x = 0;
    i64 y = 0;  // integer cut, y = z = floor(x^(1/3))
    std::vector<ConvolutionPiece> pieces;

    // folded coefficient arrays (piece sums equal these by construction)
    SeqArray mu_small;   // mu on [1, y]
    SeqArray sigma;      // mu_{<=y} * Lambda_{<=z} on [1, y^2]
    SeqArray lambda_mid; // Lambda on (z, x/(y+1)]
    SeqArray gam_c;      // sum_{b|k, b>y} mu(b) on (y, x/(z+1)]

    int J() const { return (int)pieces.size(); }

    // Sigma pieces(n) by divisor enumeration; exact reconstruction of
    // Lambda(n) for z < n <= x
    double eval(const FactorTable& t, i64 n) const;

    // same value assembled piece by piece (slower; used for cross-checks)
    double eval_pieces(const FactorTable& t, i64 n) const;
};

Decomposition vaughan_decompose(const FactorTable& t, i64 x);

// ---------------------------------------------------------------------------

struct HBDecomposition {
    i64 x = 0;
    double eps = 0;
    int C = 0;       // large-prime cut exponent: q > x^(1/C)
    double w = 0;    // smooth cut, x^(1/(C log log x)) unless overridden
    i64 piece_count = 0;

    std::vector<double> piece_sum;      // Sigma pieces(n) for n in [1, x]
    std::vector<std::uint8_t> mask;     // 1 where the identity is not claimed
    double masked_fraction = 0;

    bool masked(i64 n) const { return mask[(std::size_t)n] != 0; }
};

// f restricted to d_k (k <= 4) and 1_S.  The large-prime factor is assembled
// from Dirichlet characters mod Q (Q = 1 for d_k, Q = 4 for 1_S), never from
// f directly.  w_override > 0 replaces the default smooth cut.
HBDecomposition heathbrown_decompose(const FnSpec& f, const FactorTable& t, i64 x, double eps, double w_override = 0);

// ---------------------------------------------------------------------------
// Bilinear sum evaluators.  PhaseArg selects the argument convention:
// Dilated evaluates psi((mn-c)/d) on mn = c (mod d); Plain evaluates psi(mn).

enum class PhaseArg { Dilated, Plain };

std::complex<double> type_I_sum(const FactorTable& t, i64 x, const SeqArray& a, ConvolutionPiece::Delta delta, i64 d,
                                i64 c, const PhasePoly& P, PhaseArg arg = PhaseArg::Dilated);

// window x <= mn <= 2x
std::complex<double> type_II_sum(const FactorTable& t, i64 x, const SeqArray& a, const SeqArray& b, i64 d, i64 c,
                                 const PhasePoly& P, PhaseArg arg = PhaseArg::Dilated);

}  // namespace phaselab
