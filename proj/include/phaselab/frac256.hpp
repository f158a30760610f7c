#pragma once

// Exact arithmetic on R/Z in 256-bit fixed point.
//
// A Frac256 holds x in [0,1) as v/2^256 for an unsigned 256-bit v.  Addition
// and multiplication by (arbitrarily large) integers wrap mod 2^256, which is
// exactly arithmetic mod 1:
//
//   frac(k * v/2^256) = ((k*v) mod 2^256) / 2^256.
//
// In particular multipliers only matter mod 2^256, so signed integers are
// passed through two's-complement wrapping.  The distance to the nearest
// integer ||x|| = min(v, 2^256-v)/2^256 is exact.

#include "phaselab/wide_uint.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace phaselab {

struct Frac256 {
    U256 v{};

    Frac256() = default;
    explicit Frac256(U256 val) : v(val) {}

    static Frac256 zero() { return Frac256{}; }
    bool is_zero() const { return v.is_zero(); }
    bool operator==(const Frac256& o) const { return v == o.v; }
    bool operator!=(const Frac256& o) const { return v != o.v; }

    Frac256 operator+(const Frac256& o) const { return Frac256{v + o.v}; }
    Frac256 operator-(const Frac256& o) const { return Frac256{v - o.v}; }
    Frac256 operator-() const { return Frac256{-v}; }

    // x * k mod 1 for unsigned k
    Frac256 mul_u64(u64 k) const { return Frac256{v.mul_small(k)}; }

    // x * k mod 1; k interpreted mod 2^256 (so signed multipliers work via
    // two's complement)
    Frac256 mul_u256(const U256& k) const { return Frac256{v.mul(k)}; }

    Frac256 mul_i64(i64 k) const {
        if (k >= 0) return mul_u64((u64)k);
        return Frac256{-v.mul_small((u64)(-(k + 1)) + 1)};
    }

    // nearest p/2^256 to p/q (exact when q is a power of two); p may be >= q
    static Frac256 from_rational(u64 p, u64 q) {
        if (q == 0) throw std::invalid_argument("rational with zero denominator");
        p %= q;
        // (p << 256) / q with round-to-nearest
        WideUint<5> num;
        num.w[4] = p;
        u64 rem = num.div_small(q);
        if (2 * (u128)rem >= q) num += WideUint<5>::one();
        Frac256 r;
        for (int i = 0; i < 4; ++i) r.v.w[i] = num.w[i];  // num < 2^256 since p < q
        return r;
    }

    double to_double() const {
        double x = 0;
        for (int i = 0; i < 4; ++i) x = x / 18446744073709551616.0 + (double)v.w[i];
        return x / 18446744073709551616.0;
    }

    // ||x|| = distance to nearest integer
    double dist_to_int() const {
        Frac256 neg = -*this;
        const Frac256& m = (v <= neg.v) ? *this : neg;
        return m.to_double();
    }

    // the representative in (-1/2, 1/2]
    double signed_frac() const {
        Frac256 neg = -*this;
        if (neg.v < v) return -neg.to_double();
        return to_double();
    }
};

inline std::complex<double> unit_phase(const Frac256& x) {
    double t = 2.0 * M_PI * x.signed_frac();
    return {std::cos(t), std::sin(t)};
}

// ----------------------------------------------------------------------------
// Curated irrational constants as 256-bit fractional parts.
//
// sqrt2m1 and golden come from bit-exact integer square roots; em2 and pim3
// are summed in 320-bit fixed point with 32 guard bits (em2 by the factorial
// series, pim3 by Machin's formula) and rounded to 256 bits.
// ----------------------------------------------------------------------------

namespace detail {

// floor(2^288 * atan(1/x)) up to accumulated floor error of a few hundred ulps
inline U320 atan_inv_scaled288(u64 x) {
    U320 scale;
    scale.w[4] = 1ull << 32;  // 2^288
    U320 t = scale;
    t.div_small(x);
    U320 acc = t;
    u64 xsq = x * x;
    for (u64 k = 1;; ++k) {
        t.div_small(xsq);
        if (t.is_zero()) break;
        U320 term = t;
        term.div_small(2 * k + 1);
        if (k & 1)
            acc -= term;
        else
            acc += term;
    }
    return acc;
}

inline U256 round288_to_256(U320 x) {
    x += U320{1ull << 31};
    U320 s = x.shr(32);
    U256 r;
    for (int i = 0; i < 4; ++i) r.w[i] = s.w[i];
    return r;
}

// (pi - 3) * 2^288, Machin: pi = 16 atan(1/5) - 4 atan(1/239)
inline U320 pim3_scaled288() {
    U320 pi = atan_inv_scaled288(5).mul_small(16) - atan_inv_scaled288(239).mul_small(4);
    U320 three;
    three.w[4] = 3ull << 32;
    return pi - three;
}

// (pi - 3) * 2^288 via pi/4 = atan(1/2) + atan(1/3), used as a cross-check
inline U320 pim3_scaled288_alt() {
    U320 pi = (atan_inv_scaled288(2) + atan_inv_scaled288(3)).mul_small(4);
    U320 three;
    three.w[4] = 3ull << 32;
    return pi - three;
}

// (e - 2) * 2^288 = sum_{k>=2} 2^288/k!
inline U320 em2_scaled288() {
    U320 t;
    t.w[4] = 1ull << 32;
    U320 acc;
    for (u64 k = 2;; ++k) {
        t.div_small(k);
        if (t.is_zero()) break;
        acc += t;
    }
    return acc;
}

}  // namespace detail

// floor(2^256 * (sqrt(2)-1)), exact to the last bit
inline Frac256 frac_sqrt2m1() {
    U576 two;
    two.w[8] = 2;  // 2 * 2^512
    U576 r = wide_isqrt(two);
    U576 one;
    one.w[4] = 1;  // 2^256
    r -= one;
    Frac256 f;
    for (int i = 0; i < 4; ++i) f.v.w[i] = r.w[i];
    return f;
}

// floor(2^256 * (sqrt(5)-1)/2), the golden ratio conjugate
inline Frac256 frac_golden() {
    U576 five;
    five.w[8] = 5;  // 5 * 2^512
    U576 r = wide_isqrt(five);
    U576 one;
    one.w[4] = 1;
    r -= one;
    r.shr1();
    Frac256 f;
    for (int i = 0; i < 4; ++i) f.v.w[i] = r.w[i];
    return f;
}

inline Frac256 frac_em2() { return Frac256{detail::round288_to_256(detail::em2_scaled288())}; }
inline Frac256 frac_pim3() { return Frac256{detail::round288_to_256(detail::pim3_scaled288())}; }

// Named constants accepted in coefficient positions.
inline Frac256 named_constant(const std::string& name) {
    if (name == "sqrt2m1") return frac_sqrt2m1();
    if (name == "golden") return frac_golden();
    if (name == "em2") return frac_em2();
    if (name == "pim3") return frac_pim3();
    throw std::invalid_argument("unknown real-literal name: " + name);
}

// Parse one coefficient token: "p/q", a decimal literal, or a named constant.
// A leading '-' negates mod 1.
Frac256 parse_coefficient(const std::string& token);

}  // namespace phaselab
