#include "phaselab/bohr.hpp"

#include "phaselab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

namespace phaselab {

MinorantSeries minorant_build(double rho, double eta, i64 K) {
    if (!(rho > 0 && rho < 0.25)) throw std::invalid_argument("minorant_build: rho in (0, 1/4)");
    if (!(eta > 0 && eta <= 0.5)) throw std::invalid_argument("minorant_build: eta in (0, 1/2]");
    if (K < 1) throw std::invalid_argument("minorant_build: K >= 1");
    MinorantSeries g;
    g.rho = rho;
    g.eta = eta;
    g.K = K;
    g.a = rho * (1 - eta / 2);
    g.b = rho * eta / 2;
    g.c0 = 2 * g.a;
    g.cj.resize((std::size_t)K);
    for (i64 j = 1; j <= K; ++j)
        g.cj[(std::size_t)(j - 1)] =
            std::sin(2 * M_PI * j * g.a) * std::sin(2 * M_PI * j * g.b) / (2 * M_PI * M_PI * j * j * g.b);
    g.certified_tail = 2.0 / (M_PI * M_PI * rho * eta * (double)K);
    return g;
}

namespace {

// a + b = rho exactly; testing the support edge against rho avoids float
// dust right at ||x|| = rho
double trapezoid_value(const MinorantSeries& g, double d) {
    if (d >= g.rho) return 0.0;
    if (d <= g.a - g.b) return 1.0;
    return std::min(1.0, (g.rho - d) / (2 * g.b));
}

}  // namespace

double minorant_eval_piecewise(const MinorantSeries& g, double x) {
    return trapezoid_value(g, std::abs(x - std::round(x)));
}

double minorant_eval_piecewise(const MinorantSeries& g, const Frac256& x) {
    return trapezoid_value(g, x.dist_to_int());
}

double minorant_eval_series(const MinorantSeries& g, double x) {
    KahanReal acc;
    acc.add(g.c0);
    for (i64 j = 1; j <= g.K; ++j) acc.add(2.0 * g.cj[(std::size_t)(j - 1)] * std::cos(2 * M_PI * j * x));
    return acc.value();
}

BohrPrimeCount bohr_prime_count(const FactorTable& t, const PhasePoly& Q, double rho, i64 x) {
    if (x > t.limit) throw range_error("bohr_prime_count: x beyond table limit");
    BohrPrimeCount r;
    r.degenerate_constant = Q.is_constant();
    i64 pix = 0;
    for (i64 p : t.primes) {
        if (p > x) break;
        ++pix;
        if (frac_eval(Q, p).dist_to_int() < rho) ++r.count;
    }
    r.expected = 2 * rho * (double)pix;
    r.ratio = r.expected > 0 ? (double)r.count / r.expected : 0.0;
    return r;
}

double correlation_sum(const MinorantSeries& g, const PhasePoly& Q, const std::vector<i64>& shifts, i64 x,
                       int threads) {
    if (shifts.empty() || shifts.size() > 6) throw std::invalid_argument("correlation_sum: 1 <= k <= 6 shifts");
    std::set<i64> uniq(shifts.begin(), shifts.end());
    if (uniq.size() != shifts.size()) throw std::invalid_argument("correlation_sum: shifts must be distinct");

    int T = effective_threads(threads);
    std::vector<double> partial((std::size_t)T, 0.0);
    i64 chunk = (x + T - 1) / T;
    parallel_for(T, T, [&](i64 ti) {
        i64 lo = ti * chunk + 1, hi = std::min<i64>(x, (ti + 1) * chunk);
        KahanReal acc;
        for (i64 n = lo; n <= hi; ++n) {
            double prod = 1.0;
            for (i64 h : shifts) {
                prod *= minorant_eval_piecewise(g, frac_eval(Q, n + h));
                if (prod == 0.0) break;
            }
            acc.add(prod);
        }
        partial[(std::size_t)ti] = acc.value();
    });
    KahanReal total;
    for (double p : partial) total.add(p);
    return total.value();
}

AdmissibleCertificate is_admissible(const std::vector<i64>& h) {
    AdmissibleCertificate cert;
    if (h.empty()) throw std::invalid_argument("is_admissible: empty tuple");
    i64 k = (i64)h.size();
    // primes p > k always admit a residue (at most k classes are covered);
    // check p <= k by direct residue coverage
    for (i64 p = 2; p <= k; ++p) {
        bool prime = true;
        for (i64 q = 2; q * q <= p; ++q)
            if (p % q == 0) prime = false;
        if (!prime) continue;
        std::vector<bool> covered((std::size_t)p, false);
        for (i64 hi : h) covered[(std::size_t)(((-hi) % p + p) % p)] = true;
        i64 witness = -1;
        for (i64 a = 0; a < p; ++a)
            if (!covered[(std::size_t)a]) {
                witness = a;
                break;
            }
        if (witness < 0) {
            cert.admissible = false;
            cert.obstructed_prime = p;
            return cert;
        }
        cert.witnesses.emplace_back(p, witness);
    }
    cert.admissible = true;
    return cert;
}

namespace {

std::vector<i64> primes_up_to(i64 n) {
    std::vector<bool> comp((std::size_t)n + 1, false);
    std::vector<i64> ps;
    for (i64 p = 2; p <= n; ++p) {
        if (comp[(std::size_t)p]) continue;
        ps.push_back(p);
        for (i64 m = p * p; m <= n; m += p) comp[(std::size_t)m] = true;
    }
    return ps;
}

i64 mod_inverse(i64 a, i64 p) {
    i64 b = p, x0 = 1, x1 = 0;
    a %= p;
    while (b) {
        i64 q = a / b;
        a -= q * b;
        std::swap(a, b);
        x0 -= q * x1;
        std::swap(x0, x1);
    }
    return ((x0 % p) + p) % p;
}

}  // namespace

SingularSeriesValue singular_series(const std::vector<LinearForm>& forms, i64 p_cut) {
    if (forms.empty()) throw std::invalid_argument("singular_series: no forms");
    if (p_cut < 2 || p_cut > 1000000) throw std::invalid_argument("singular_series: p_cut in [2, 10^6]");
    i64 k = (i64)forms.size();
    SingularSeriesValue out;
    out.p_cut = p_cut;

    double log_value = 0.0;
    bool zero = false;
    for (i64 p : primes_up_to(p_cut)) {
        for (auto& L : forms)
            if (L.a % p == 0) throw std::invalid_argument("singular_series: degenerate form a_i = 0 mod p");
        i64 omega;
        if (p <= 1000) {
            // direct scan of Z/pZ
            omega = 0;
            for (i64 n = 0; n < p; ++n) {
                bool root = false;
                for (auto& L : forms) {
                    if (((L.a % p) * n + ((L.b % p) + p)) % p == 0) {
                        root = true;
                        break;
                    }
                }
                if (root) ++omega;
            }
        } else {
            // distinct roots -b_i a_i^{-1} mod p
            std::set<i64> roots;
            for (auto& L : forms) {
                i64 r = ((-(L.b % p) % p + p) % p * mod_inverse(L.a, p)) % p;
                roots.insert(r);
            }
            omega = (i64)roots.size();
        }
        if (omega == p) {
            zero = true;
            break;
        }
        log_value += -(double)k * std::log1p(-1.0 / (double)p) + std::log1p(-(double)omega / (double)p);
    }
    out.value = zero ? 0.0 : std::exp(log_value);
    // factors are 1 + O(k^2/p^2): sum_{p > P} k^2/p^2 <= 1.3 k^2 / (P log P)
    out.tail_estimate = std::abs(out.value) * 1.3 * (double)(k * k) / ((double)p_cut * std::log((double)p_cut));
    return out;
}

ChenClass chen_classify(const FactorTable& t, i64 p, double smooth_floor) {
    if (p + 2 > t.limit) throw range_error("chen_classify: p + 2 beyond table limit");
    if (p < 2 || !t.is_prime(p)) return ChenClass::No;
    i64 m = p + 2;
    int big_omega = 0;
    i64 smallest_factor = m;
    for (auto [q, e] : factorize(t, m)) {
        big_omega += e;
        smallest_factor = std::min(smallest_factor, q);
    }
    if (big_omega > 2) return ChenClass::No;
    double floor_val = std::pow((double)p, smooth_floor);
    return (double)smallest_factor >= floor_val ? ChenClass::ChenStrict : ChenClass::Chen;
}

ChenBohrScan chen_bohr_scan(const FactorTable& t, const PhasePoly& Q, double theta, i64 x) {
    if (x + 2 > t.limit) throw range_error("chen_bohr_scan: x + 2 beyond table limit");
    ChenBohrScan r;
    for (i64 p : t.primes) {
        if (p > x) break;
        if (chen_classify(t, p, 0.0) == ChenClass::No) continue;
        ++r.chen_total;
        double thr = std::pow((double)p, -theta);
        if (frac_eval(Q, p).dist_to_int() < thr) {
            ++r.count;
            if ((i64)r.witnesses.size() < 100) r.witnesses.push_back(p);
        }
    }
    return r;
}

bool b_set_membership(const FactorTable& t, i64 n, i64 x, double eps, int which) {
    if (which != 1 && which != 2) throw std::invalid_argument("b_set_membership: which in {1,2}");
    if (n < 2 || n > t.limit) return false;
    auto fac = factorize(t, n);
    int big_omega = 0;
    for (auto [q, e] : fac) big_omega += e;
    if (big_omega != 3) return false;
    std::vector<i64> ps;
    for (auto [q, e] : fac)
        for (int i = 0; i < e; ++i) ps.push_back(q);
    std::sort(ps.begin(), ps.end());

    double x10 = std::pow((double)x, 0.1);
    double x13 = std::pow((double)x, 1.0 / 3 - eps);
    // try every assignment of the three prime factors to (p1, p2, p3)
    do {
        double p1 = (double)ps[0], p2 = (double)ps[1], p3 = (double)ps[2];
        bool ok;
        if (which == 1) {
            ok = p1 >= x10 && p1 <= x13 && p2 >= x13 && p2 <= std::sqrt(2.0 * (double)x / p1) && p3 >= x10;
        } else {
            ok = p1 >= x13 && p1 <= p2 && p2 <= std::sqrt(2.0 * (double)x / p1) && p3 >= x10;
        }
        if (ok) return true;
    } while (std::next_permutation(ps.begin(), ps.end()));
    return false;
}

}  // namespace phaselab
