#pragma once

// Fixed-width unsigned integers built from 64-bit limbs (little-endian).
// All arithmetic wraps mod 2^(64*N) unless stated otherwise.

#include <array>
#include <cstdint>
#include <cstddef>
#include <string>

namespace phaselab {

using u64 = std::uint64_t;
using u128 = unsigned __int128;
using i64 = std::int64_t;

template <std::size_t N>
struct WideUint {
    std::array<u64, N> w{};  // w[0] = least significant

    constexpr WideUint() = default;
    constexpr explicit WideUint(u64 lo) { w[0] = lo; }

    static constexpr WideUint zero() { return WideUint{}; }
    static constexpr WideUint one() { return WideUint{1}; }

    bool is_zero() const {
        for (auto x : w)
            if (x) return false;
        return true;
    }

    int cmp(const WideUint& o) const {
        for (std::size_t i = N; i-- > 0;) {
            if (w[i] != o.w[i]) return w[i] < o.w[i] ? -1 : 1;
        }
        return 0;
    }
    bool operator==(const WideUint& o) const { return cmp(o) == 0; }
    bool operator!=(const WideUint& o) const { return cmp(o) != 0; }
    bool operator<(const WideUint& o) const { return cmp(o) < 0; }
    bool operator<=(const WideUint& o) const { return cmp(o) <= 0; }

    WideUint& operator+=(const WideUint& o) {
        u64 carry = 0;
        for (std::size_t i = 0; i < N; ++i) {
            u128 s = (u128)w[i] + o.w[i] + carry;
            w[i] = (u64)s;
            carry = (u64)(s >> 64);
        }
        return *this;
    }
    WideUint operator+(const WideUint& o) const { WideUint r = *this; r += o; return r; }

    WideUint& operator-=(const WideUint& o) {
        u64 borrow = 0;
        for (std::size_t i = 0; i < N; ++i) {
            u128 d = (u128)w[i] - o.w[i] - borrow;
            w[i] = (u64)d;
            borrow = (u64)((d >> 64) & 1);
        }
        return *this;
    }
    WideUint operator-(const WideUint& o) const { WideUint r = *this; r -= o; return r; }

    WideUint operator-() const { return WideUint{} - *this; }

    // wrapping multiply by a single limb
    WideUint mul_small(u64 m) const {
        WideUint r;
        u64 carry = 0;
        for (std::size_t i = 0; i < N; ++i) {
            u128 p = (u128)w[i] * m + carry;
            r.w[i] = (u64)p;
            carry = (u64)(p >> 64);
        }
        return r;
    }

    // wrapping full product (low N limbs of this * o)
    WideUint mul(const WideUint& o) const {
        WideUint r;
        for (std::size_t i = 0; i < N; ++i) {
            if (w[i] == 0) continue;
            u64 carry = 0;
            for (std::size_t j = 0; i + j < N; ++j) {
                u128 p = (u128)w[i] * o.w[j] + r.w[i + j] + carry;
                r.w[i + j] = (u64)p;
                carry = (u64)(p >> 64);
            }
        }
        return r;
    }

    // divide by a single limb, returns remainder
    u64 div_small(u64 d) {
        u64 rem = 0;
        for (std::size_t i = N; i-- > 0;) {
            u128 cur = ((u128)rem << 64) | w[i];
            w[i] = (u64)(cur / d);
            rem = (u64)(cur % d);
        }
        return rem;
    }

    WideUint& shl1() {
        u64 carry = 0;
        for (std::size_t i = 0; i < N; ++i) {
            u64 nc = w[i] >> 63;
            w[i] = (w[i] << 1) | carry;
            carry = nc;
        }
        return *this;
    }
    WideUint& shr1() {
        u64 carry = 0;
        for (std::size_t i = N; i-- > 0;) {
            u64 nc = w[i] & 1;
            w[i] = (w[i] >> 1) | (carry << 63);
            carry = nc;
        }
        return *this;
    }

    WideUint shl(unsigned k) const {
        WideUint r;
        unsigned limb = k / 64, bit = k % 64;
        for (std::size_t i = N; i-- > 0;) {
            u64 v = 0;
            if (i >= limb) {
                v = w[i - limb] << bit;
                if (bit && i >= limb + 1) v |= w[i - limb - 1] >> (64 - bit);
            }
            r.w[i] = v;
        }
        return r;
    }
    WideUint shr(unsigned k) const {
        WideUint r;
        unsigned limb = k / 64, bit = k % 64;
        for (std::size_t i = 0; i < N; ++i) {
            u64 v = 0;
            if (i + limb < N) {
                v = w[i + limb] >> bit;
                if (bit && i + limb + 1 < N) v |= w[i + limb + 1] << (64 - bit);
            }
            r.w[i] = v;
        }
        return r;
    }

    bool bit(unsigned k) const { return (w[k / 64] >> (k % 64)) & 1; }
    void set_bit(unsigned k) { w[k / 64] |= (u64)1 << (k % 64); }

    int bit_length() const {
        for (std::size_t i = N; i-- > 0;) {
            if (w[i]) return (int)(64 * i) + 64 - __builtin_clzll(w[i]);
        }
        return 0;
    }

    // binary long division; returns quotient, sets rem
    static WideUint divmod(const WideUint& num, const WideUint& den, WideUint& rem) {
        WideUint q, r;
        for (int i = num.bit_length() - 1; i >= 0; --i) {
            r.shl1();
            if (num.bit((unsigned)i)) r.w[0] |= 1;
            if (den <= r) {
                r -= den;
                q.set_bit((unsigned)i);
            }
        }
        rem = r;
        return q;
    }

    double to_double() const {
        double v = 0;
        for (std::size_t i = N; i-- > 0;) v = v * 18446744073709551616.0 + (double)w[i];
        return v;
    }

    std::string to_hex() const {
        static const char* digits = "0123456789abcdef";
        std::string s;
        bool lead = true;
        for (std::size_t i = N; i-- > 0;) {
            for (int sh = 60; sh >= 0; sh -= 4) {
                int d = (int)((w[i] >> sh) & 0xf);
                if (lead && d == 0 && !(i == 0 && sh == 0)) continue;
                lead = false;
                s += digits[d];
            }
        }
        return s;
    }
};

// Integer square root: largest r with r*r <= x.  The caller must ensure r*r
// fits in N limbs (true whenever x does, since r has half the bits).
template <std::size_t N>
WideUint<N> wide_isqrt(const WideUint<N>& x) {
    WideUint<N> r;
    int top = (x.bit_length() + 1) / 2;
    for (int i = top; i >= 0; --i) {
        WideUint<N> t = r;
        t.set_bit((unsigned)i);
        if (t.mul(t) <= x) r = t;
    }
    return r;
}

using U256 = WideUint<4>;
using U320 = WideUint<5>;
using U576 = WideUint<9>;

}  // namespace phaselab
