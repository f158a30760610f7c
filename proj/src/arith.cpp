#include "phaselab/arith.hpp"

#include <algorithm>
#include <cmath>

namespace phaselab {

namespace {

constexpr i64 kLinearSieveMax = 1ll << 26;
constexpr i64 kTableCap = 1ll << 34;

void linear_sieve(FactorTable& t) {
    const i64 n = t.limit;
    // classic linear sieve; spf_ stores 0 on primes, smallest factor otherwise
    for (i64 i = 2; i <= n; ++i) {
        if (t.spf_[(std::size_t)i] == 0) t.primes.push_back(i);
        i64 cap = t.spf_[(std::size_t)i] ? (i64)t.spf_[(std::size_t)i] : i;
        for (i64 p : t.primes) {
            if (p > cap || i * p > n) break;
            t.spf_[(std::size_t)(i * p)] = (std::uint32_t)p;
        }
    }
}

void segmented_sieve(FactorTable& t) {
    const i64 n = t.limit;
    i64 root = (i64)std::sqrt((double)n);
    while ((root + 1) * (root + 1) <= n) ++root;
    while (root * root > n) --root;

    FactorTable base = build_factor_table(std::max<i64>(root, 2));
    const i64 seg = 1ll << 22;
    for (i64 lo = 2; lo <= n; lo += seg) {
        i64 hi = std::min(n, lo + seg - 1);
        for (i64 p : base.primes) {
            i64 start = ((lo + p - 1) / p) * p;
            if (start == p) start = 2 * p;  // never mark p itself
            for (i64 m = start; m <= hi; m += p) {
                if (t.spf_[(std::size_t)m] == 0) t.spf_[(std::size_t)m] = (std::uint32_t)p;
            }
        }
    }
    for (i64 i = 2; i <= n; ++i)
        if (t.spf_[(std::size_t)i] == 0) t.primes.push_back(i);
}

}  // namespace

FactorTable build_factor_table(i64 limit) {
    if (limit < 2 || limit > kTableCap) throw capacity_error("factor table limit out of range");
    FactorTable t;
    t.limit = limit;
    t.spf_.assign((std::size_t)limit + 1, 0);
    if (limit <= kLinearSieveMax)
        linear_sieve(t);
    else
        segmented_sieve(t);
    return t;
}

std::vector<std::pair<i64, int>> factorize(const FactorTable& t, i64 n) {
    std::vector<std::pair<i64, int>> f;
    while (n > 1) {
        i64 p = t.spf(n);
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        f.emplace_back(p, e);
    }
    return f;
}

double von_mangoldt(const FactorTable& t, i64 n) {
    if (n < 1 || n > t.limit) throw range_error("von_mangoldt: n out of range");
    if (n == 1) return 0.0;
    i64 p = t.spf(n);
    while (n % p == 0) n /= p;
    return n == 1 ? std::log((double)p) : 0.0;
}

int mobius(const FactorTable& t, i64 n) {
    if (n < 1 || n > t.limit) throw range_error("mobius: n out of range");
    int k = 0;
    while (n > 1) {
        i64 p = t.spf(n);
        n /= p;
        if (n % p == 0) return 0;
        ++k;
    }
    return (k & 1) ? -1 : 1;
}

i64 euler_phi(const FactorTable& t, i64 n) {
    if (n < 1 || n > t.limit) throw range_error("euler_phi: n out of range");
    i64 r = n;
    for (auto [p, e] : factorize(t, n)) r = r / p * (p - 1);
    return r;
}

i64 divisor_k(const FactorTable& t, i64 n, int k) {
    if (n < 1 || n > t.limit) throw range_error("divisor_k: n out of range");
    if (k < 1) throw std::invalid_argument("divisor_k: k must be >= 1");
    // d_k(p^a) = C(a+k-1, k-1)
    i64 r = 1;
    for (auto [p, e] : factorize(t, n)) {
        i64 binom = 1;
        for (int i = 1; i <= e; ++i) binom = binom * (k - 1 + i) / i;
        r *= binom;
    }
    return r;
}

int sum_two_squares_indicator(const FactorTable& t, i64 n) {
    if (n < 1 || n > t.limit) throw range_error("sum_two_squares_indicator: n out of range");
    for (auto [p, e] : factorize(t, n))
        if (p % 4 == 3 && (e & 1)) return 0;
    return 1;
}

std::vector<i64> divisors(const FactorTable& t, i64 n) {
    std::vector<i64> ds{1};
    for (auto [p, e] : factorize(t, n)) {
        std::size_t m = ds.size();
        i64 pe = 1;
        for (int i = 1; i <= e; ++i) {
            pe *= p;
            for (std::size_t j = 0; j < m; ++j) ds.push_back(ds[j] * pe);
        }
    }
    return ds;
}

void BigNat::mul_small(u64 m) {
    u64 carry = 0;
    for (auto& limb : w) {
        u128 p = (u128)limb * m + carry;
        limb = (u64)p;
        carry = (u64)(p >> 64);
    }
    if (carry) w.push_back(carry);
}

std::string BigNat::to_string() const {
    std::vector<u64> tmp = w;
    std::string out;
    auto all_zero = [&] {
        for (u64 x : tmp)
            if (x) return false;
        return true;
    };
    if (all_zero()) return "0";
    while (!all_zero()) {
        u64 rem = 0;
        for (std::size_t i = tmp.size(); i-- > 0;) {
            u128 cur = ((u128)rem << 64) | tmp[i];
            tmp[i] = (u64)(cur / 10);
            rem = (u64)(cur % 10);
        }
        out += char('0' + rem);
    }
    std::reverse(out.begin(), out.end());
    return out;
}

double BigNat::log_value() const {
    double hi = 0;
    int top = -1;
    for (std::size_t i = w.size(); i-- > 0;)
        if (w[i]) {
            top = (int)i;
            break;
        }
    if (top < 0) return -1.0 / 0.0;
    hi = (double)w[top];
    if (top > 0) hi += (double)w[top - 1] / 18446744073709551616.0;
    return std::log(hi) + 64.0 * std::log(2.0) * top;
}

Primorial primorial_up_to(i64 w) {
    if (w < 2 || w > 200) throw capacity_error("primorial threshold out of [2,200]");
    Primorial P;
    P.w = w;
    P.value.w = {1};
    std::vector<bool> comp((std::size_t)w + 1, false);
    for (i64 p = 2; p <= w; ++p) {
        if (comp[(std::size_t)p]) continue;
        P.prime_list.push_back(p);
        P.value.mul_small((u64)p);
        for (i64 m = p * p; m <= w; m += p) comp[(std::size_t)m] = true;
    }
    return P;
}

bool coprime_to(const Primorial& W, i64 n) {
    for (i64 p : W.prime_list)
        if (n % p == 0) return false;
    return true;
}

double w_factor_ratio(i64 d, const Primorial& W) {
    if (d < 1) throw std::invalid_argument("w_factor_ratio: d must be positive");
    double r = 1.0;
    for (i64 p : W.prime_list) {
        r *= (double)p / (double)(p - 1);
        while (d % p == 0) d /= p;
    }
    // remaining primes of d (not dividing W), by trial division
    for (i64 p = 2; p * p <= d; ++p) {
        if (d % p) continue;
        r *= (double)p / (double)(p - 1);
        while (d % p == 0) d /= p;
    }
    if (d > 1) r *= (double)d / (double)(d - 1);
    return r;
}

}  // namespace phaselab
