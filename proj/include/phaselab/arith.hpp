#pragma once

// Sieved arithmetic functions: smallest-prime-factor table and the standard
// functions Lambda, mu, phi, d_k, 1_S built on it, plus primorials and the
// dW/phi(dW) factor used by W-tricked main terms.

#include "phaselab/errors.hpp"
#include "phaselab/wide_uint.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace phaselab {

// Smallest-prime-factor table for 2..limit.  Internally spf_[n] == 0 marks a
// prime (so the table stays 4 bytes/entry up to the 2^34 cap: the stored
// factor of a composite n is at most sqrt(n) < 2^17).
// Immutable after construction; all queries are pure reads.
struct FactorTable {
    i64 limit = 0;
    std::vector<std::uint32_t> spf_;
    std::vector<i64> primes;

    i64 spf(i64 n) const {
        check(n);
        return spf_[(std::size_t)n] ? (i64)spf_[(std::size_t)n] : n;
    }
    bool is_prime(i64 n) const {
        check(n);
        return n >= 2 && spf_[(std::size_t)n] == 0;
    }
    void check(i64 n) const {
        if (n < 2 || n > limit) throw range_error("FactorTable: n out of range");
    }
};

// Linear SPF sieve for limit <= 2^26, segmented above (memory vs recomputation).
FactorTable build_factor_table(i64 limit);

// (prime, exponent) pairs, ascending primes
std::vector<std::pair<i64, int>> factorize(const FactorTable& t, i64 n);

double von_mangoldt(const FactorTable& t, i64 n);  // log p on prime powers
int mobius(const FactorTable& t, i64 n);
i64 euler_phi(const FactorTable& t, i64 n);
i64 divisor_k(const FactorTable& t, i64 n, int k);  // ordered k-factorizations
int sum_two_squares_indicator(const FactorTable& t, i64 n);

std::vector<i64> divisors(const FactorTable& t, i64 n);  // unsorted

// Small big-natural for primorial values (product of word-size primes).
struct BigNat {
    std::vector<u64> w{0};  // little-endian limbs

    void mul_small(u64 m);
    std::string to_string() const;  // decimal
    double log_value() const;
};

struct Primorial {
    i64 w = 0;
    BigNat value;
    std::vector<i64> prime_list;
};

// P(w) = prod_{p<=w} p; desk scale caps w at 200
Primorial primorial_up_to(i64 w);

// n coprime to P(w), tested against the prime list (never the big product)
bool coprime_to(const Primorial& W, i64 n);

// dW/phi(dW) = prod_{p | dW} (1-1/p)^{-1}; primes shared by d and W count once
double w_factor_ratio(i64 d, const Primorial& W);

}  // namespace phaselab
