#include "phaselab/gowers.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace phaselab;

namespace {

Frac256 rat(u64 p, u64 q) { return Frac256::from_rational(p, q); }

IntervalFunction random_f(std::mt19937_64& rng, i64 N) {
    IntervalFunction f;
    f.v.resize((std::size_t)N);
    for (auto& z : f.v)
        z = std::complex<double>((double)(rng() % 2001) / 1000.0 - 1.0, (double)(rng() % 2001) / 1000.0 - 1.0);
    return f;
}

IntervalFunction modulate(const IntervalFunction& f, const PhasePoly& P) {
    IntervalFunction g = f;
    for (i64 n = 1; n <= f.N(); ++n) g.v[(std::size_t)(n - 1)] *= eval_phase(P, n);
    return g;
}

}  // namespace

TEST_CASE("norm of the constant function is exactly 1") {
    for (i64 N : {1, 7, 50}) {
        IntervalFunction one;
        one.v.assign((std::size_t)N, {1, 0});
        for (int k = 1; k <= 3; ++k) CHECK(gowers_norm(one, k) == 1.0);
    }
    IntervalFunction zero;
    zero.v.assign(40, {0, 0});
    for (int k = 1; k <= 3; ++k) CHECK(gowers_norm(zero, k) == 0.0);
}

TEST_CASE("U^2 fast path equals the direct multilinear average") {
    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 20; ++trial) {
        i64 N = 4 + (i64)(rng() % 61);  // N <= 64
        IntervalFunction f = random_f(rng, N);
        CHECK(gowers_norm(f, 2) == doctest::Approx(gowers_norm_direct(f, 2)).epsilon(1e-9));
    }
}

TEST_CASE("U^1 and U^3 agree with the literal definition") {
    std::mt19937_64 rng(103);
    for (int trial = 0; trial < 5; ++trial) {
        i64 N = 5 + (i64)(rng() % 20);
        IntervalFunction f = random_f(rng, N);
        CHECK(gowers_norm(f, 1) == doctest::Approx(gowers_norm_direct(f, 1)).epsilon(1e-9));
        CHECK(gowers_norm(f, 3) == doctest::Approx(gowers_norm_direct(f, 3)).epsilon(1e-9));
    }
}

TEST_CASE("modulation invariance for phases of degree < k") {
    std::mt19937_64 rng(107);
    for (int trial = 0; trial < 8; ++trial) {
        i64 N = 20 + (i64)(rng() % 81);  // N <= 100
        IntervalFunction f = random_f(rng, N);
        // random dyadic coefficients are exact in the fixed-point ring
        auto dyadic = [&] { return rat(rng() % 1024, 1024); };

        PhasePoly lin = phase_from_entries({{0, dyadic()}, {1, dyadic()}});
        CHECK(gowers_norm(modulate(f, lin), 2) == doctest::Approx(gowers_norm(f, 2)).epsilon(1e-9));

        PhasePoly quad = phase_from_entries({{0, dyadic()}, {1, dyadic()}, {2, dyadic()}});
        CHECK(gowers_norm(modulate(f, quad), 3, 2) == doctest::Approx(gowers_norm(f, 3, 2)).epsilon(1e-9));
    }

    // the marked special case: e(n/2) leaves U^2 at exactly 1
    IntervalFunction one;
    one.v.assign(60, {1, 0});
    PhasePoly half = phase_from_entries({{1, rat(1, 2)}});
    CHECK(gowers_norm(modulate(one, half), 2) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("norm chain: U^2 <= U^3 after ratio normalization") {
    std::mt19937_64 rng(109);
    for (int trial = 0; trial < 50; ++trial) {
        i64 N = 20 + (i64)(rng() % 181);  // N <= 200
        IntervalFunction f = random_f(rng, N);
        double u2 = gowers_norm(f, 2, 2);
        double u3 = gowers_norm(f, 3, 2);
        CHECK(u2 <= u3 + 1e-9);
    }
}

TEST_CASE("lambda_aq") {
    FactorTable t = build_factor_table(2000);
    IntervalFunction f = lambda_aq(t, 1, 2, 10);
    CHECK(f.v[0].real() == doctest::Approx(0.5 * std::log(3.0)));  // n=1: Lambda(3)/2
    CHECK(f.v[1].real() == doctest::Approx(0.5 * std::log(5.0)));  // n=2: Lambda(5)/2
    CHECK(f.v[3].real() == doctest::Approx(0.5 * std::log(3.0)));  // n=4: Lambda(9)/2
    CHECK(f.v[6].real() == doctest::Approx(0.0));                  // n=7: Lambda(15) = 0

    // q = 4, a = 3: phi(4)/4 = 1/2, first value Lambda(7)/2
    IntervalFunction g = lambda_aq(t, 3, 4, 5);
    CHECK(g.v[0].real() == doctest::Approx(0.5 * std::log(7.0)));

    CHECK_THROWS_AS(lambda_aq(t, 2, 4, 5), std::invalid_argument);
    CHECK_THROWS_AS(lambda_aq(t, 1, 2, 2000), range_error);
}

TEST_CASE("uniformity diagnostic") {
    FactorTable t = build_factor_table(5000);

    // q without a small primorial divisor leaves a mod-3 bias: large norm
    auto d9 = uniformity_diagnostic(t, 2, 9, 200, 2, 2);
    CHECK(d9.value >= 0.3);
    CHECK(!d9.primorial_divides);  // P(2) = 2 does not divide 9

    auto d2 = uniformity_diagnostic(t, 1, 2, 200, 2, 2);
    CHECK(d2.primorial_divides);
    CHECK(d2.value > 0);
    CHECK(d2.value < 1);

    // the W-trick's job: enlarging the primorial divisor of q lowers the norm
    // (q = 2 keeps the mod-3 bias, q = 6 removes it)
    auto d6 = uniformity_diagnostic(t, 1, 6, 200, 2, 3);
    CHECK(d6.primorial_divides);
    CHECK(d6.value < d2.value);
}

TEST_CASE("local factors") {
    // twin system at p = 3: only n = 2 mod 3 avoids both forms: (3/2)^2 / 3
    AffineSystem twin;
    twin.forms = {{{1}, 0}, {{1}, 2}};
    twin.q = 1;
    CHECK(local_factor(3, twin) == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(local_factor_bruteforce(3, twin) == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(local_factor_inclusion_exclusion(3, twin) == doctest::Approx(0.75).epsilon(1e-12));

    // single form n: every factor is exactly 1
    AffineSystem single;
    single.forms = {{{1}, 0}};
    single.q = 1;
    for (i64 p : {2, 3, 5, 97}) CHECK(local_factor(p, single) == doctest::Approx(1.0).epsilon(1e-12));

    // p | q: the forms are constant mod p
    AffineSystem shifted;
    shifted.forms = {{{1}, 0}, {{1}, 2}};
    shifted.q = 3;
    shifted.shift = {1};  // L_2(a) = 3 = 0 mod 3: factor vanishes
    CHECK(local_factor(3, shifted) == doctest::Approx(0.0).epsilon(1e-12));
    shifted.shift = {2};  // L_1(a) = 2, L_2(a) = 4, both coprime to 3
    CHECK(local_factor(3, shifted) == doctest::Approx(std::pow(1.5, 2)).epsilon(1e-12));
}

TEST_CASE("local factor paths agree on random systems") {
    std::mt19937_64 rng(113);
    std::vector<i64> ps{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71};
    for (int trial = 0; trial < 100; ++trial) {
        AffineSystem sys;
        int d = 1 + (int)(rng() % 2);
        int t = 1 + (int)(rng() % 3);
        sys.q = 1 + (i64)(rng() % 6);
        for (int i = 0; i < d; ++i) sys.shift.push_back((i64)(rng() % 10));
        for (int i = 0; i < t; ++i) {
            AffineForm L;
            for (int j = 0; j < d; ++j) L.coef.push_back((i64)(rng() % 7) - 3);
            if (std::all_of(L.coef.begin(), L.coef.end(), [](i64 c) { return c == 0; })) L.coef[0] = 1;
            L.c0 = (i64)(rng() % 21) - 10;
            sys.forms.push_back(L);
        }
        i64 p = ps[rng() % ps.size()];
        CHECK(local_factor_bruteforce(p, sys) ==
              doctest::Approx(local_factor_inclusion_exclusion(p, sys)).epsilon(1e-9));
    }
}

TEST_CASE("twin local product converges") {
    AffineSystem twin;
    twin.forms = {{{1}, 0}, {{1}, 2}};
    twin.q = 1;
    std::vector<bool> comp(10001, false);
    double prod = 1, prod_at_1000 = 0;
    for (i64 p = 2; p <= 10000; ++p) {
        if (comp[(std::size_t)p]) continue;
        for (i64 m = p * p; m <= 10000; m += p) comp[(std::size_t)m] = true;
        prod *= local_factor(p, twin);
        if (p <= 1000) prod_at_1000 = prod;
    }
    CHECK(std::abs(prod - prod_at_1000) < 1e-3);
}

TEST_CASE("beta_infinity") {
    // single form n over [0, x]: full volume x
    AffineSystem single;
    single.forms = {{{1}, 0}};
    single.q = 1;
    CHECK(beta_infinity(single, 100).value == doctest::Approx(100.0));

    // (n, n-50): interval (50, 100]
    AffineSystem half;
    half.forms = {{{1}, 0}, {{1}, -50}};
    half.q = 1;
    CHECK(beta_infinity(half, 100).value == doctest::Approx(50.0));

    // triangle n1 > 0, n2 > 0, n1 + n2 < x: area x^2/2
    AffineSystem tri;
    tri.forms = {{{1, 0}, 0}, {{0, 1}, 0}, {{-1, -1}, 100}};
    tri.q = 1;
    CHECK(beta_infinity(tri, 100).value == doctest::Approx(5000.0).epsilon(1e-9));

    // d = 3 Monte Carlo with seed: reproducible, octant volume x^3/8 within 4 sigma
    AffineSystem oct;
    oct.forms = {{{1, 0, 0}, -50}, {{0, 1, 0}, -50}, {{0, 0, 1}, -50}};
    oct.q = 1;
    auto v1 = beta_infinity(oct, 100, 200000, 7);
    auto v2 = beta_infinity(oct, 100, 200000, 7);
    CHECK(v1.value == v2.value);
    CHECK(v1.stderr_ > 0);
    CHECK(std::abs(v1.value - 125000.0) < 4.0 * v1.stderr_);
}

TEST_CASE("linear forms count") {
    FactorTable t = build_factor_table(100002);

    // PNT check: psi(x) vs x
    AffineSystem single;
    single.forms = {{{1}, 0}};
    single.q = 1;
    auto r = linear_forms_count(t, single, 100000, 10000, 2);
    CHECK(r.ratio == doctest::Approx(1.0).epsilon(0.02));

    // twin forms at x = 10^4: ratio within the pre-measured regression window
    AffineSystem twin;
    twin.forms = {{{1}, 0}, {{1}, 2}};
    twin.q = 1;
    auto r2 = linear_forms_count(t, twin, 10000, 10000, 2);
    CHECK(r2.ratio > 0.8);
    CHECK(r2.ratio < 1.2);

    // inadmissible pair (n, n+1): the p = 2 factor kills the prediction, and
    // the direct sum only sees prime-power pairs like (2^a, 3^b)
    AffineSystem bad;
    bad.forms = {{{1}, 0}, {{1}, 1}};
    bad.q = 1;
    auto r3 = linear_forms_count(t, bad, 1000, 100, 1);
    CHECK(r3.predicted == 0.0);
    double boundary = 0;
    for (i64 n = 1; n <= 1000; ++n) boundary += von_mangoldt(t, n) * von_mangoldt(t, n + 1);
    CHECK(r3.lhs == doctest::Approx(boundary).epsilon(1e-9));

    CHECK_THROWS_AS(linear_forms_count(t, twin, 200000000, 100, 1), capacity_error);
}

TEST_CASE("uniformity diagnostic values are not fast-path artifacts") {
    // the same Lambda_{1,2} - 1 input through the literal multilinear average
    FactorTable t = build_factor_table(1000);
    IntervalFunction f = lambda_aq(t, 1, 2, 60);
    for (auto& z : f.v) z -= 1.0;
    CHECK(gowers_norm(f, 2) == doctest::Approx(gowers_norm_direct(f, 2)).epsilon(1e-9));
}
