#include "phaselab/gowers.hpp"

#include "phaselab/fft.hpp"
#include "phaselab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace phaselab {

// ---------------------------------------------------------------------------
// FFT
// ---------------------------------------------------------------------------

void fft_pow2(std::vector<std::complex<double>>& a, bool inverse) {
    std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        double ang = 2 * M_PI / (double)len * (inverse ? 1 : -1);
        std::complex<double> wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1);
            for (std::size_t j = 0; j < len / 2; ++j) {
                std::complex<double> u = a[i + j], v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wl;
            }
        }
    }
    if (inverse)
        for (auto& z : a) z /= (double)n;
}

std::vector<std::complex<double>> dft(const std::vector<std::complex<double>>& x) {
    std::size_t n = x.size();
    if (n == 0) return {};
    if ((n & (n - 1)) == 0) {
        auto a = x;
        fft_pow2(a, false);
        return a;
    }
    // Bluestein: jk = (j^2 + k^2 - (k-j)^2)/2 turns the DFT into a circular
    // convolution against the chirp e(j^2/(2n)), done at the next power of two
    std::size_t m = 1;
    while (m < 2 * n + 1) m <<= 1;
    std::vector<std::complex<double>> w(n), A(m), B(m);
    for (std::size_t j = 0; j < n; ++j) {
        double ang = M_PI * (double)((u128)j * j % (2 * (u128)n)) / (double)n;
        w[j] = {std::cos(ang), std::sin(ang)};  // w[j] = e(+j^2/(2n))
        A[j] = x[j] * std::conj(w[j]);
    }
    B[0] = w[0];
    for (std::size_t j = 1; j < n; ++j) {
        B[j] = w[j];
        B[m - j] = w[j];
    }
    fft_pow2(A, false);
    fft_pow2(B, false);
    for (std::size_t i = 0; i < m; ++i) A[i] *= B[i];
    fft_pow2(A, true);
    std::vector<std::complex<double>> X(n);
    for (std::size_t k = 0; k < n; ++k) X[k] = std::conj(w[k]) * A[k];
    return X;
}

// ---------------------------------------------------------------------------
// Gowers norms over [N] via the cyclic embedding N' = 2N+1
// ---------------------------------------------------------------------------

namespace {

// embed f (supported on 1..N) into Z/N'Z, index 0..N'-1 with value f(n) at n
std::vector<std::complex<double>> embed(const IntervalFunction& f) {
    i64 Np = 2 * f.N() + 1;
    std::vector<std::complex<double>> g((std::size_t)Np, {0, 0});
    for (i64 n = 1; n <= f.N(); ++n) g[(std::size_t)n] = f.v[(std::size_t)(n - 1)];
    return g;
}

// ||g||_{U^1(Z_M)} = |E g|
double u1_cyclic(const std::vector<std::complex<double>>& g) {
    KahanComplex acc;
    for (auto& z : g) acc.add(z);
    return std::abs(acc.value()) / (double)g.size();
}

// ||g||_{U^2(Z_M)}^4 = sum_r |hat g(r)|^4 with hat g(r) = E_x g(x) e(-rx/M)
double u2_fourth_cyclic(const std::vector<std::complex<double>>& g) {
    auto X = dft(g);
    double M = (double)g.size();
    KahanReal acc;
    for (auto& z : X) {
        double m2 = std::norm(z) / (M * M);
        acc.add(m2 * m2);
    }
    return acc.value();
}

// ||g||_{U^3(Z_M)}^8 = E_h ||Delta_h g||_{U^2}^4, Delta_h g(x) = g(x+h) conj g(x)
double u3_eighth_cyclic(const std::vector<std::complex<double>>& g, int threads) {
    std::size_t M = g.size();
    std::vector<double> per_h(M, 0.0);
    parallel_for((i64)M, threads, [&](i64 h) {
        std::vector<std::complex<double>> d(M);
        for (std::size_t x = 0; x < M; ++x) d[x] = g[(x + (std::size_t)h) % M] * std::conj(g[x]);
        per_h[(std::size_t)h] = u2_fourth_cyclic(d);
    });
    KahanReal acc;
    for (double v : per_h) acc.add(v);
    return acc.value() / (double)M;
}

double uk_cyclic(const std::vector<std::complex<double>>& g, int k, int threads) {
    switch (k) {
        case 1: return u1_cyclic(g);
        case 2: return std::pow(u2_fourth_cyclic(g), 0.25);
        case 3: return std::pow(u3_eighth_cyclic(g, threads), 0.125);
        default: throw std::invalid_argument("gowers_norm: k in {1,2,3}");
    }
}

}  // namespace

double gowers_norm(const IntervalFunction& f, int k, int threads) {
    if (f.N() < 1) throw std::invalid_argument("gowers_norm: empty function");
    if (k < 1 || k > 3) throw std::invalid_argument("gowers_norm: k in {1,2,3}");
    if (k == 3 && f.N() > 500) throw capacity_error("gowers_norm: k = 3 capped at N = 500");
    if (k == 2 && f.N() > 100000) throw capacity_error("gowers_norm: k = 2 capped at N = 10^5");
    auto g = embed(f);
    IntervalFunction ones;
    ones.v.assign((std::size_t)f.N(), {1, 0});
    auto g1 = embed(ones);
    return uk_cyclic(g, k, threads) / uk_cyclic(g1, k, threads);
}

double gowers_norm_direct(const IntervalFunction& f, int k) {
    if (f.N() > 200) throw capacity_error("gowers_norm_direct: N <= 200");
    auto g = embed(f);
    auto g1e = embed([&] {
        IntervalFunction ones;
        ones.v.assign((std::size_t)f.N(), {1, 0});
        return ones;
    }());
    auto direct = [&](const std::vector<std::complex<double>>& a) {
        i64 M = (i64)a.size();
        auto at = [&](i64 x) { return a[(std::size_t)(((x % M) + M) % M)]; };
        KahanComplex acc;
        if (k == 1) {
            for (i64 x = 0; x < M; ++x)
                for (i64 h = 0; h < M; ++h) acc.add(at(x) * std::conj(at(x + h)));
            return std::pow(std::abs(acc.value()) / std::pow((double)M, 2), 1.0 / 2);
        }
        if (k == 2) {
            for (i64 x = 0; x < M; ++x)
                for (i64 h1 = 0; h1 < M; ++h1)
                    for (i64 h2 = 0; h2 < M; ++h2)
                        acc.add(at(x) * std::conj(at(x + h1)) * std::conj(at(x + h2)) * at(x + h1 + h2));
            return std::pow(std::abs(acc.value()) / std::pow((double)M, 3), 1.0 / 4);
        }
        for (i64 x = 0; x < M; ++x)
            for (i64 h1 = 0; h1 < M; ++h1)
                for (i64 h2 = 0; h2 < M; ++h2)
                    for (i64 h3 = 0; h3 < M; ++h3) {
                        std::complex<double> t = at(x) * std::conj(at(x + h1)) * std::conj(at(x + h2)) *
                                                 std::conj(at(x + h3)) * at(x + h1 + h2) * at(x + h1 + h3) *
                                                 at(x + h2 + h3) * std::conj(at(x + h1 + h2 + h3));
                        acc.add(t);
                    }
        return std::pow(std::abs(acc.value()) / std::pow((double)M, 4), 1.0 / 8);
    };
    return direct(g) / direct(g1e);
}

IntervalFunction lambda_aq(const FactorTable& t, i64 a, i64 q, i64 N) {
    if (q < 1 || std::gcd(((a % q) + q) % q, q) != 1) throw std::invalid_argument("lambda_aq: gcd(a,q) = 1 required");
    if (q * N + a > t.limit) throw range_error("lambda_aq: qN + a beyond table limit");
    IntervalFunction f;
    f.v.resize((std::size_t)N);
    double scale = (double)euler_phi(t, q) / (double)q;
    for (i64 n = 1; n <= N; ++n) {
        i64 m = q * n + a;
        f.v[(std::size_t)(n - 1)] = m >= 1 ? scale * von_mangoldt(t, m) : 0.0;
    }
    return f;
}

UniformityDiagnostic uniformity_diagnostic(const FactorTable& t, i64 a, i64 q, i64 N, int k, i64 w, int threads) {
    IntervalFunction f = lambda_aq(t, a, q, N);
    for (auto& z : f.v) z -= 1.0;
    UniformityDiagnostic d;
    d.value = gowers_norm(f, k, threads);
    Primorial W = primorial_up_to(std::max<i64>(2, w));
    d.primorial_divides = true;
    for (i64 p : W.prime_list)
        if (q % p != 0) d.primorial_divides = false;
    d.w = w;
    return d;
}

// ---------------------------------------------------------------------------
// Local factors and linear-forms counts
// ---------------------------------------------------------------------------

double AffineSystem::size_at(i64 N) const {
    double s = 0;
    for (auto& L : forms) {
        for (i64 c : L.coef) s += std::abs((double)c);
        s += std::abs((double)L.c0) / (double)N;
    }
    return s;
}

namespace {

i64 eval_form(const AffineForm& L, const std::vector<i64>& n) {
    i64 v = L.c0;
    for (std::size_t i = 0; i < L.coef.size(); ++i) v += L.coef[i] * n[i];
    return v;
}

// form composed with n -> q n + a, reduced mod p
struct FormModP {
    std::vector<i64> coef;
    i64 c0;
};

FormModP reduce_form(const AffineForm& L, const AffineSystem& sys, i64 p) {
    FormModP f;
    f.coef.resize(L.coef.size());
    i64 q = sys.q % p;
    f.c0 = ((L.c0 % p) + p) % p;
    for (std::size_t i = 0; i < L.coef.size(); ++i) {
        f.coef[i] = ((L.coef[i] % p) * q % p + p) % p;
        i64 ai = sys.shift.empty() ? 0 : sys.shift[i] % p;
        f.c0 = ((f.c0 + (L.coef[i] % p) * ai) % p + p) % p;
    }
    return f;
}

}  // namespace

double local_factor_bruteforce(i64 p, const AffineSystem& sys) {
    int d = sys.d();
    double pd = std::pow((double)p, d);
    if (pd > 2e9) throw capacity_error("local_factor_bruteforce: p^d too large");
    std::vector<FormModP> fs;
    for (auto& L : sys.forms) fs.push_back(reduce_form(L, sys, p));
    std::vector<i64> n((std::size_t)d, 0);
    i64 good = 0;
    for (;;) {
        bool ok = true;
        for (auto& f : fs) {
            i64 v = f.c0;
            for (int i = 0; i < d; ++i) v = (v + f.coef[(std::size_t)i] * n[(std::size_t)i]) % p;
            if (v % p == 0) {
                ok = false;
                break;
            }
        }
        if (ok) ++good;
        int i = 0;
        for (; i < d; ++i) {
            if (++n[(std::size_t)i] < p) break;
            n[(std::size_t)i] = 0;
        }
        if (i == d) break;
    }
    double ratio = (double)p / (double)(p - 1);
    return std::pow(ratio, (double)sys.t()) * (double)good / pd;
}

double local_factor(i64 p, const AffineSystem& sys) {
    if ((double)std::pow((double)p, sys.d()) <= 2e6 || p <= 1000) return local_factor_bruteforce(p, sys);
    return local_factor_inclusion_exclusion(p, sys);
}

double local_factor_inclusion_exclusion(i64 p, const AffineSystem& sys) {
    int d = sys.d(), t = sys.t();
    // inclusion-exclusion over subsets S: count n with L_i = 0 mod p for i in S
    // via rank of the affine system over F_p
    std::vector<FormModP> fs;
    for (auto& L : sys.forms) fs.push_back(reduce_form(L, sys, p));
    double good = 0;
    for (u64 S = 0; S < (1ull << t); ++S) {
        // Gaussian elimination over F_p on the selected rows
        std::vector<std::vector<i64>> rows;
        for (int i = 0; i < t; ++i)
            if (S >> i & 1) {
                std::vector<i64> r = fs[(std::size_t)i].coef;
                r.push_back(fs[(std::size_t)i].c0);
                rows.push_back(r);
            }
        int rank = 0;
        bool inconsistent = false;
        for (int col = 0; col <= d && !inconsistent; ++col) {
            int pivot = -1;
            for (int r = rank; r < (int)rows.size(); ++r)
                if (rows[(std::size_t)r][(std::size_t)col] % p != 0) {
                    pivot = r;
                    break;
                }
            if (pivot < 0) continue;
            if (col == d) {
                inconsistent = true;  // 0 = nonzero constant
                break;
            }
            std::swap(rows[(std::size_t)rank], rows[(std::size_t)pivot]);
            i64 inv = 1, a = rows[(std::size_t)rank][(std::size_t)col] % p, b = p, x0 = 1, x1 = 0;
            while (b) {
                i64 qq = a / b;
                a -= qq * b;
                std::swap(a, b);
                x0 -= qq * x1;
                std::swap(x0, x1);
            }
            inv = ((x0 % p) + p) % p;
            for (int r = 0; r < (int)rows.size(); ++r) {
                if (r == rank) continue;
                i64 factor = rows[(std::size_t)r][(std::size_t)col] % p * inv % p;
                if (factor == 0) continue;
                for (int cc = 0; cc <= d; ++cc)
                    rows[(std::size_t)r][(std::size_t)cc] =
                        ((rows[(std::size_t)r][(std::size_t)cc] -
                          factor * rows[(std::size_t)rank][(std::size_t)cc]) %
                             p +
                         p) %
                        p;
            }
            ++rank;
        }
        double cnt = inconsistent ? 0.0 : std::pow((double)p, d - rank);
        good += (__builtin_popcountll(S) % 2 == 0 ? 1.0 : -1.0) * cnt;
    }
    double ratio = (double)p / (double)(p - 1);
    return std::pow(ratio, (double)t) * good / std::pow((double)p, d);
}

VolumeEstimate beta_infinity(const AffineSystem& sys, i64 x, i64 samples, u64 seed) {
    int d = sys.d();
    VolumeEstimate out;
    out.seed = seed;
    auto positive_at = [&](const std::vector<double>& u) {
        for (auto& L : sys.forms) {
            double v = (double)L.c0;
            for (int i = 0; i < d; ++i)
                v += (double)L.coef[(std::size_t)i] * ((double)sys.q * u[(std::size_t)i] +
                                                       (sys.shift.empty() ? 0.0 : (double)sys.shift[(std::size_t)i]));
            if (v <= 0) return false;
        }
        return true;
    };
    if (d == 1) {
        // exact interval intersection over [0, x] (the volume convention that
        // matches the [1,x]^d lattice sums)
        double lo = 0, hi = (double)x;
        for (auto& L : sys.forms) {
            double a = (double)L.coef[0] * (double)sys.q;
            double b = (double)L.c0 + (double)L.coef[0] * (sys.shift.empty() ? 0.0 : (double)sys.shift[0]);
            // a u + b > 0
            if (a > 0)
                lo = std::max(lo, -b / a);
            else if (a < 0)
                hi = std::min(hi, -b / a);
            else if (b <= 0)
                lo = hi + 1;
        }
        out.value = std::max(0.0, hi - lo);
        out.stderr_ = 0;
        return out;
    }
    if (d == 2) {
        // half-plane clipping of the square [1,x]^2 (exact polygon area)
        std::vector<std::pair<double, double>> poly{{0, 0}, {(double)x, 0}, {(double)x, (double)x}, {0, (double)x}};
        for (auto& L : sys.forms) {
            double a0 = (double)L.coef[0] * (double)sys.q, a1 = (double)L.coef[1] * (double)sys.q;
            double b = (double)L.c0 +
                       (double)L.coef[0] * (sys.shift.empty() ? 0.0 : (double)sys.shift[0]) +
                       (double)L.coef[1] * (sys.shift.size() > 1 ? (double)sys.shift[1] : 0.0);
            std::vector<std::pair<double, double>> next;
            auto inside = [&](const std::pair<double, double>& pt) { return a0 * pt.first + a1 * pt.second + b > 0; };
            std::size_t m = poly.size();
            for (std::size_t i = 0; i < m; ++i) {
                auto cur = poly[i], nxt = poly[(i + 1) % m];
                bool ci = inside(cur), ni = inside(nxt);
                if (ci) next.push_back(cur);
                if (ci != ni) {
                    double fa = a0 * cur.first + a1 * cur.second + b;
                    double fb = a0 * nxt.first + a1 * nxt.second + b;
                    double s = fa / (fa - fb);
                    next.push_back({cur.first + s * (nxt.first - cur.first), cur.second + s * (nxt.second - cur.second)});
                }
            }
            poly = next;
            if (poly.empty()) break;
        }
        double area = 0;
        for (std::size_t i = 0; i < poly.size(); ++i) {
            auto [x1, y1] = poly[i];
            auto [x2, y2] = poly[(i + 1) % poly.size()];
            area += x1 * y2 - x2 * y1;
        }
        out.value = std::abs(area) / 2;
        out.stderr_ = 0;
        return out;
    }
    // Monte Carlo with recorded seed
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, (double)x);
    i64 hit = 0;
    std::vector<double> u((std::size_t)d);
    for (i64 s = 0; s < samples; ++s) {
        for (int i = 0; i < d; ++i) u[(std::size_t)i] = unif(rng);
        if (positive_at(u)) ++hit;
    }
    double vol = std::pow((double)x, d);
    double phat = (double)hit / (double)samples;
    out.value = phat * vol;
    out.stderr_ = vol * std::sqrt(std::max(0.0, phat * (1 - phat) / (double)samples));
    return out;
}

LinearFormsCount linear_forms_count(const FactorTable& t, const AffineSystem& sys, i64 x, i64 p_cut, int threads,
                                    u64 seed) {
    int d = sys.d();
    double xd = std::pow((double)x, d);
    if (xd > 1e8) throw capacity_error("linear_forms_count: x^d beyond loop budget");
    LinearFormsCount out;
    out.p_cut = p_cut;

    // lhs by direct summation over [1,x]^d (parallel over the first coordinate)
    std::vector<double> partial((std::size_t)x, 0.0);
    parallel_for(x, threads, [&](i64 i) {
        std::vector<i64> n((std::size_t)d, 1);
        n[0] = i + 1;
        KahanReal acc;
        for (;;) {
            double prod = 1;
            for (auto& L : sys.forms) {
                std::vector<i64> m((std::size_t)d);
                for (int j = 0; j < d; ++j)
                    m[(std::size_t)j] = sys.q * n[(std::size_t)j] + (sys.shift.empty() ? 0 : sys.shift[(std::size_t)j]);
                i64 v = eval_form(L, m);
                if (v < 1 || v > t.limit) {
                    prod = 0;
                    break;
                }
                prod *= von_mangoldt(t, v);
                if (prod == 0) break;
            }
            if (prod != 0) acc.add(prod);
            int j = 1;
            for (; j < d; ++j) {
                if (++n[(std::size_t)j] <= x) break;
                n[(std::size_t)j] = 1;
            }
            if (j == d) break;
        }
        partial[(std::size_t)i] = acc.value();
    });
    KahanReal lhs;
    for (double p : partial) lhs.add(p);
    out.lhs = lhs.value();

    // predicted = beta_infinity * prod_{p <= p_cut} beta_p
    VolumeEstimate vol = beta_infinity(sys, x, 1000000, seed);
    double prod = 1;
    for (i64 p = 2; p <= p_cut; ++p) {
        bool prime = true;
        for (i64 q = 2; q * q <= p; ++q)
            if (p % q == 0) {
                prime = false;
                break;
            }
        if (!prime) continue;
        prod *= local_factor(p, sys);
        if (prod == 0) break;
    }
    out.predicted = vol.value * prod;
    out.ratio = out.predicted != 0 ? out.lhs / out.predicted : 0.0;
    out.beta_inf = vol.value;
    return out;
}

}  // namespace phaselab
