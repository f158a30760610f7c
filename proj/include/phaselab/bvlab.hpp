#pragma once

// Twisted sums over arithmetic progressions, W-tricked main terms, and
// Bombieri-Vinogradov discrepancy scans:
//
//   twisted(d,c) = sum_{n<=x, n=c(d)} f(n) e(P(n))
//   main(d,c)    = (dW/phi(dW)) sum_{n<=x, (n,W)=1, n=c(d)} e(P(n))
//
// summed over moduli d <= x^theta with the worst coprime residue per d.
// mu, d_k and 1_S run without a main term (their equidistributed case).

#include "phaselab/arith.hpp"
#include "phaselab/phase.hpp"

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace phaselab {

enum class ArithFn { Lambda, Mu, Dk, OneS, Unit };

struct FnSpec {
    ArithFn id = ArithFn::Lambda;
    int k = 2;  // for Dk

    bool has_main_term() const { return id == ArithFn::Lambda || id == ArithFn::Unit; }
    std::string name() const;
};

FnSpec parse_fn(const std::string& name);  // "lambda" | "mu" | "d2".."d9" | "ones" | "unit"

double eval_fn(const FnSpec& f, const FactorTable& t, i64 n);

std::complex<double> twisted_progression_sum(const FnSpec& f, const FactorTable& t, i64 x, i64 d, i64 c,
                                             const PhasePoly& P);

std::complex<double> main_term(i64 x, i64 d, i64 c, const Primorial& W, const PhasePoly& P);

struct DiscrepancyRow {
    i64 d = 0;
    i64 c_worst = 0;
    std::complex<double> twisted{0, 0};
    std::complex<double> main{0, 0};
    double disc = 0;
};

struct DiscrepancyReport {
    i64 x = 0;
    double theta = 0;
    i64 w = 0;
    std::string fn;
    std::string phase_spec;
    u64 seed = 0;
    std::vector<DiscrepancyRow> rows;  // sorted by d
    double aggregate = 0;              // sum of row discs
    double normalized = 0;             // aggregate / x
};

struct ResiduePolicy {
    enum Kind { AllCoprime, Sampled, Fixed } kind = AllCoprime;
    i64 param = 0;  // sample count or fixed residue

    static ResiduePolicy all_coprime() { return {AllCoprime, 0}; }
    static ResiduePolicy sampled(i64 k) { return {Sampled, k}; }
    static ResiduePolicy fixed(i64 c) { return {Fixed, c}; }
};

// default policy: all residues for d <= 10^3, sampled(32) above
DiscrepancyReport discrepancy_scan(const FnSpec& f, const FactorTable& t, i64 x, double theta, const Primorial& W,
                                   const PhasePoly& P, std::optional<ResiduePolicy> policy = std::nullopt,
                                   u64 seed = 1, int threads = 1);

// beta*gamma factored weight of level R*S; |beta|,|gamma| <= 1 enforced
struct FactoredWeight {
    std::vector<double> beta;   // beta[i] = beta(i+1), support [1,R]
    std::vector<double> gamma;  // gamma[i] = gamma(i+1), support [1,S]

    i64 level() const { return (i64)beta.size() * (i64)gamma.size(); }
    std::vector<double> lambda() const;  // dense beta*gamma on [1, level]

    static FactoredWeight point_mass();  // beta = gamma = delta_1
};

// sum_d lambda_d (twisted(d,c) - main(d,c)); lambda_d zeroed when gcd(d,c)>1
std::complex<double> weighted_bv_sum(const FnSpec& f, const FactorTable& t, i64 x, const FactoredWeight& w, i64 c,
                                     const PhasePoly& P, const Primorial& W);

// CSV with header d,c_worst,twisted_re,twisted_im,main_re,main_im,disc
std::string report_to_csv(const DiscrepancyReport& r);

}  // namespace phaselab
