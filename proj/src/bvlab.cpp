#include "phaselab/bvlab.hpp"

#include "phaselab/parallel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

namespace phaselab {

std::string FnSpec::name() const {
    switch (id) {
        case ArithFn::Lambda: return "lambda";
        case ArithFn::Mu: return "mu";
        case ArithFn::Dk: return "d" + std::to_string(k);
        case ArithFn::OneS: return "ones";
        case ArithFn::Unit: return "unit";
    }
    return "?";
}

FnSpec parse_fn(const std::string& name) {
    if (name == "lambda") return {ArithFn::Lambda, 2};
    if (name == "mu") return {ArithFn::Mu, 2};
    if (name == "ones") return {ArithFn::OneS, 2};
    if (name == "unit") return {ArithFn::Unit, 2};
    if (name.size() >= 2 && name[0] == 'd') {
        int k = 0;
        auto res = std::from_chars(name.data() + 1, name.data() + name.size(), k);
        if (res.ec == std::errc() && res.ptr == name.data() + name.size() && k >= 1 && k <= 9)
            return {ArithFn::Dk, k};
    }
    throw std::invalid_argument("unknown arithmetic function: " + name);
}

double eval_fn(const FnSpec& f, const FactorTable& t, i64 n) {
    switch (f.id) {
        case ArithFn::Lambda: return von_mangoldt(t, n);
        case ArithFn::Mu: return (double)mobius(t, n);
        case ArithFn::Dk: return (double)divisor_k(t, n, f.k);
        case ArithFn::OneS: return (double)sum_two_squares_indicator(t, n);
        case ArithFn::Unit: return 1.0;
    }
    return 0.0;
}

std::complex<double> twisted_progression_sum(const FnSpec& f, const FactorTable& t, i64 x, i64 d, i64 c,
                                             const PhasePoly& P) {
    if (d < 1 || c < 0 || x < 0) throw std::invalid_argument("twisted_progression_sum: bad arguments");
    if (x > t.limit) throw range_error("twisted_progression_sum: x beyond table limit");
    i64 start = c % d;
    if (start == 0) start = d;
    KahanComplex acc;
    for (i64 n = start; n <= x; n += d) {
        double fv = eval_fn(f, t, n);
        if (fv == 0.0) continue;
        std::complex<double> e = eval_phase(P, n);
        acc.add(fv * e.real(), fv * e.imag());
    }
    return acc.value();
}

std::complex<double> main_term(i64 x, i64 d, i64 c, const Primorial& W, const PhasePoly& P) {
    if (d < 1) throw std::invalid_argument("main_term: d >= 1");
    if (x <= 0) return {0, 0};
    i64 cc = c % d;
    if (std::gcd(cc == 0 ? d : cc, d) != 1) throw std::invalid_argument("main_term: gcd(c,d) must be 1");
    i64 start = cc == 0 ? d : cc;
    KahanComplex acc;
    for (i64 n = start; n <= x; n += d) {
        if (!coprime_to(W, n)) continue;
        acc.add(eval_phase(P, n));
    }
    double ratio = w_factor_ratio(d, W);
    std::complex<double> s = acc.value();
    return {ratio * s.real(), ratio * s.imag()};
}

namespace {

// one scan row: worst residue for modulus d using precomputed term arrays
DiscrepancyRow scan_row(i64 d, i64 x, bool with_main, const std::vector<std::complex<double>>& twisted_terms,
                        const std::vector<std::complex<double>>& main_terms, const Primorial& W,
                        const ResiduePolicy& policy, u64 seed) {
    // bucket-accumulate per residue class
    std::vector<KahanComplex> tw((std::size_t)d), mn((std::size_t)d);
    for (i64 n = 1; n <= x; ++n) {
        std::size_t r = (std::size_t)(n % d);
        tw[r].add(twisted_terms[(std::size_t)n]);
        if (with_main) mn[r].add(main_terms[(std::size_t)n]);
    }
    double ratio = with_main ? w_factor_ratio(d, W) : 0.0;

    std::vector<i64> cands;
    if (policy.kind == ResiduePolicy::Fixed) {
        i64 c = policy.param % d;
        if (c <= 0) c += d;
        if (std::gcd(c, d) == 1) cands.push_back(c);
    } else {
        for (i64 c = 1; c <= d; ++c)
            if (std::gcd(c, d) == 1) cands.push_back(c);
        if (policy.kind == ResiduePolicy::Sampled && policy.param < (i64)cands.size()) {
            std::mt19937_64 rng(seed ^ ((u64)d * 0x9e3779b97f4a7c15ull));
            for (i64 i = 0; i < policy.param; ++i) {
                std::size_t j = (std::size_t)i + (std::size_t)(rng() % (u64)(cands.size() - (std::size_t)i));
                std::swap(cands[(std::size_t)i], cands[j]);
            }
            cands.resize((std::size_t)policy.param);
            std::sort(cands.begin(), cands.end());
        }
    }

    DiscrepancyRow row;
    row.d = d;
    for (i64 c : cands) {
        std::size_t r = (std::size_t)(c % d);
        std::complex<double> tval = tw[r].value();
        std::complex<double> mval = with_main ? ratio * mn[r].value() : std::complex<double>{0, 0};
        double disc = std::abs(tval - mval);
        if (row.c_worst == 0 || disc > row.disc) row = {d, c, tval, mval, disc};
    }
    return row;
}

}  // namespace

DiscrepancyReport discrepancy_scan(const FnSpec& f, const FactorTable& t, i64 x, double theta, const Primorial& W,
                                   const PhasePoly& P, std::optional<ResiduePolicy> policy, u64 seed, int threads) {
    if (theta > 0.5) throw std::invalid_argument("discrepancy_scan: theta > 1/2 is beyond the supported level");
    if (x < 1 || x > t.limit) throw range_error("discrepancy_scan: x out of table range");

    DiscrepancyReport rep;
    rep.x = x;
    rep.theta = theta;
    rep.w = W.w;
    rep.fn = f.name();
    rep.seed = seed;

    i64 d_max = (i64)std::floor(std::pow((double)x, theta) + 1e-9);
    d_max = std::max<i64>(d_max, 1);

    // precompute per-n terms once; every modulus reuses them
    bool with_main = f.has_main_term();
    std::vector<std::complex<double>> twisted_terms((std::size_t)x + 1), main_terms;
    if (with_main) main_terms.assign((std::size_t)x + 1, {0, 0});
    parallel_for(x, threads, [&](i64 i) {
        i64 n = i + 1;
        std::complex<double> e = eval_phase(P, n);
        double fv = eval_fn(f, t, n);
        twisted_terms[(std::size_t)n] = fv * e;
        if (with_main) main_terms[(std::size_t)n] = coprime_to(W, n) ? e : std::complex<double>{0, 0};
    });

    rep.rows.assign((std::size_t)d_max, DiscrepancyRow{});
    parallel_for(d_max, threads, [&](i64 i) {
        i64 d = i + 1;
        ResiduePolicy pol = policy ? *policy : (d <= 1000 ? ResiduePolicy::all_coprime() : ResiduePolicy::sampled(32));
        rep.rows[(std::size_t)i] = scan_row(d, x, with_main, twisted_terms, main_terms, W, pol, seed);
    });
    // drop moduli with no admissible residue (fixed-c policy with (c,d) > 1)
    std::erase_if(rep.rows, [](const DiscrepancyRow& r) { return r.c_worst == 0; });

    KahanReal agg;
    for (auto& row : rep.rows) agg.add(row.disc);
    rep.aggregate = agg.value();
    rep.normalized = rep.aggregate / (double)x;
    return rep;
}

std::vector<double> FactoredWeight::lambda() const {
    for (double b : beta)
        if (std::abs(b) > 1.0 + 1e-12) throw std::invalid_argument("FactoredWeight: |beta| <= 1 required");
    for (double g : gamma)
        if (std::abs(g) > 1.0 + 1e-12) throw std::invalid_argument("FactoredWeight: |gamma| <= 1 required");
    i64 D = level();
    std::vector<double> lam((std::size_t)D + 1, 0.0);
    for (i64 i = 1; i <= (i64)beta.size(); ++i) {
        if (beta[(std::size_t)i - 1] == 0.0) continue;
        for (i64 j = 1; j <= (i64)gamma.size(); ++j)
            lam[(std::size_t)(i * j)] += beta[(std::size_t)i - 1] * gamma[(std::size_t)j - 1];
    }
    return lam;
}

FactoredWeight FactoredWeight::point_mass() { return FactoredWeight{{1.0}, {1.0}}; }

std::complex<double> weighted_bv_sum(const FnSpec& f, const FactorTable& t, i64 x, const FactoredWeight& w, i64 c,
                                     const PhasePoly& P, const Primorial& W) {
    std::vector<double> lam = w.lambda();
    KahanComplex acc;
    for (i64 d = 1; d < (i64)lam.size(); ++d) {
        double l = lam[(std::size_t)d];
        if (l == 0.0) continue;
        i64 cd = ((c % d) + d) % d;
        if (std::gcd(cd == 0 ? d : cd, d) != 1) continue;  // lambda_d zeroed when (d,c) > 1
        std::complex<double> tval = twisted_progression_sum(f, t, x, d, cd == 0 ? d : cd, P);
        std::complex<double> mval =
            f.has_main_term() ? main_term(x, d, cd == 0 ? d : cd, W, P) : std::complex<double>{0, 0};
        acc.add(l * (tval - mval));
    }
    return acc.value();
}

std::string report_to_csv(const DiscrepancyReport& r) {
    std::ostringstream os;
    os << "d,c_worst,twisted_re,twisted_im,main_re,main_im,disc\n";
    os.precision(17);
    for (auto& row : r.rows) {
        os << row.d << ',' << row.c_worst << ',' << row.twisted.real() << ',' << row.twisted.imag() << ','
           << row.main.real() << ',' << row.main.imag() << ',' << row.disc << '\n';
    }
    return os.str();
}

}  // namespace phaselab
