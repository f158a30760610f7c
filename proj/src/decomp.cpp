#include "phaselab/decomp.hpp"

#include "phaselab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace phaselab {

namespace {

i64 icbrt(i64 x) {
    i64 y = (i64)std::cbrt((double)x);
    while ((y + 1) * (y + 1) * (y + 1) <= x) ++y;
    while (y * y * y > x) --y;
    return y;
}

// dyadic blocks [2^k, 2^{k+1}) clipped to [lo, hi]
std::vector<std::pair<i64, i64>> dyadic_blocks(i64 lo, i64 hi) {
    std::vector<std::pair<i64, i64>> blocks;
    i64 b = 1;
    while (b <= hi) {
        i64 l = std::max(lo, b), h = std::min(hi, 2 * b - 1);
        if (l <= h) blocks.emplace_back(l, h);
        b *= 2;
    }
    return blocks;
}

SeqArray slice(const SeqArray& s, i64 lo, i64 hi) {
    SeqArray out;
    out.lo = lo;
    out.v.assign((std::size_t)(hi - lo + 1), 0.0);
    for (i64 i = lo; i <= hi; ++i) out.v[(std::size_t)(i - lo)] = s.at(i);
    return out;
}

// smallest n >= 1 with m*n = c (mod d); 0 if none
i64 solve_congruence(i64 m, i64 c, i64 d) {
    if (d == 1) return 1;
    i64 g = std::gcd(m % d, d);
    if (((c % d) + d) % d % g != 0) return 0;
    i64 d2 = d / g, m2 = (m / g) % d2, c2 = (((c / g) % d2) + d2) % d2;
    // inverse of m2 mod d2 by extended Euclid
    i64 a = m2 % d2, b = d2, x0 = 1, x1 = 0;
    while (b) {
        i64 q = a / b;
        a -= q * b;
        std::swap(a, b);
        x0 -= q * x1;
        std::swap(x0, x1);
    }
    if (a != 1) return 0;  // g-reduction guarantees this does not happen
    i64 n = ((c2 * ((x0 % d2) + d2)) % d2);
    if (n == 0) n = d2;
    return n;  // solutions: n + k*d2
}

}  // namespace

Decomposition vaughan_decompose(const FactorTable& t, i64 x) {
    if (x < 1000) throw std::invalid_argument("vaughan_decompose: x >= 10^3 required");
    if (x > t.limit) throw range_error("vaughan_decompose: x beyond table limit");
    Decomposition D;
    D.x = x;
    D.y = icbrt(x);
    const i64 y = D.y, z = D.y;
    const i64 mid_hi = x / (y + 1);  // both rough ranges live in (y, mid_hi]

    // folded arrays
    D.mu_small.lo = 1;
    D.mu_small.v.assign((std::size_t)y, 0.0);
    for (i64 b = 1; b <= y; ++b) D.mu_small.v[(std::size_t)(b - 1)] = (double)mobius(t, b);

    D.sigma.lo = 1;
    D.sigma.v.assign((std::size_t)(y * z), 0.0);
    for (i64 c = 2; c <= z; ++c) {
        double lam = von_mangoldt(t, c);
        if (lam == 0.0) continue;
        for (i64 b = 1; b <= y; ++b) {
            double mu = D.mu_small.at(b);
            if (mu != 0.0) D.sigma.v[(std::size_t)(b * c - 1)] += mu * lam;
        }
    }

    D.lambda_mid.lo = z + 1;
    D.lambda_mid.v.assign((std::size_t)(mid_hi - z), 0.0);
    for (i64 c = z + 1; c <= mid_hi; ++c) D.lambda_mid.v[(std::size_t)(c - z - 1)] = von_mangoldt(t, c);

    const i64 gam_hi = x / (z + 1);
    D.gam_c.lo = y + 1;
    D.gam_c.v.assign((std::size_t)(gam_hi - y), 0.0);
    for (i64 b = y + 1; b <= gam_hi; ++b) {
        double mu = (double)mobius(t, b);
        if (mu == 0.0) continue;
        for (i64 k = b; k <= gam_hi; k += b) D.gam_c.v[(std::size_t)(k - y - 1)] += mu;
    }

    // dyadic piece list
    int label = 0;
    for (auto [l, h] : dyadic_blocks(1, y)) {  // A: mu * log
        ConvolutionPiece p;
        p.kind = ConvolutionPiece::TypeI;
        p.delta = ConvolutionPiece::Log;
        p.a = slice(D.mu_small, l, h);
        p.label = label++;
        D.pieces.push_back(std::move(p));
    }
    for (auto [l, h] : dyadic_blocks(1, y)) {  // B1: -(sigma restricted small) * 1
        ConvolutionPiece p;
        p.kind = ConvolutionPiece::TypeI;
        p.delta = ConvolutionPiece::One;
        p.a = slice(D.sigma, l, h);
        for (auto& vv : p.a.v) vv = -vv;
        p.label = label++;
        D.pieces.push_back(std::move(p));
    }
    // B2: -(sigma on (y, y^2]) * 1 on [1, x/(y+1)], dyadic in both variables
    for (auto [l, h] : dyadic_blocks(y + 1, y * z)) {
        SeqArray beta = slice(D.sigma, l, h);
        for (auto& vv : beta.v) vv = -vv;
        for (auto [gl, gh] : dyadic_blocks(1, x / (y + 1))) {
            ConvolutionPiece p;
            p.kind = ConvolutionPiece::TypeII;
            p.a = beta;
            p.b.lo = gl;
            p.b.v.assign((std::size_t)(gh - gl + 1), 1.0);
            p.gamma_wide = gl <= y;
            p.label = label++;
            D.pieces.push_back(std::move(p));
        }
    }
    // C: Lambda_{>z} * gam, dyadic in both variables
    for (auto [l, h] : dyadic_blocks(z + 1, mid_hi)) {
        SeqArray beta = slice(D.lambda_mid, l, h);
        for (auto [gl, gh] : dyadic_blocks(y + 1, gam_hi)) {
            ConvolutionPiece p;
            p.kind = ConvolutionPiece::TypeII;
            p.a = beta;
            p.b = slice(D.gam_c, gl, gh);
            p.label = label++;
            D.pieces.push_back(std::move(p));
        }
    }

    // construction-time support and coefficient-size assertions
    // (with the documented wide-gamma exception)
    double logx = std::log((double)x);
    for (auto& p : D.pieces) {
        if (p.kind == ConvolutionPiece::TypeI) {
            if (p.a.hi() > 2 * y) throw std::logic_error("vaughan: type I support exceeds 2 x^(1/3)");
        } else {
            // rough side within (y, max(y^2, x/(y+1))]; both caps sit just
            // under x^(2/3) for the integer cut y = floor(x^(1/3))
            if (p.a.lo <= y || p.a.hi() > std::max(y * z, mid_hi))
                throw std::logic_error("vaughan: type II rough support out of range");
            if (p.b.hi() > std::max(gam_hi, x / (y + 1)))
                throw std::logic_error("vaughan: type II gamma support out of range");
        }
        for (i64 i = p.a.lo; i <= p.a.hi(); ++i)
            if (std::abs(p.a.at(i)) > (double)divisor_k(t, i, 3) * logx + 1e-9)
                throw std::logic_error("vaughan: coefficient bound violated");
        for (i64 i = p.b.lo; i <= p.b.hi() && !p.b.v.empty(); ++i)
            if (std::abs(p.b.at(i)) > (double)divisor_k(t, i, 3) * logx + 1e-9)
                throw std::logic_error("vaughan: coefficient bound violated");
    }
    return D;
}

double Decomposition::eval(const FactorTable& t, i64 n) const {
    KahanReal acc;
    for (i64 u : divisors(t, n)) {
        i64 v = n / u;
        double mu = mu_small.at(u);
        if (mu != 0.0) acc.add(mu * std::log((double)v));
        double sg = sigma.at(u);
        if (sg != 0.0) acc.add(-sg);
        double lm = lambda_mid.at(u);
        if (lm != 0.0) {
            double g = gam_c.at(v);
            if (g != 0.0) acc.add(lm * g);
        }
    }
    return acc.value();
}

double Decomposition::eval_pieces(const FactorTable& t, i64 n) const {
    KahanReal acc;
    for (auto& p : pieces) {
        for (i64 u : divisors(t, n)) {
            double av = p.a.at(u);
            if (av == 0.0) continue;
            i64 v = n / u;
            if (p.kind == ConvolutionPiece::TypeI) {
                acc.add(p.delta == ConvolutionPiece::Log ? av * std::log((double)v) : av);
            } else {
                double bv = p.b.at(v);
                if (bv != 0.0) acc.add(av * bv);
            }
        }
    }
    return acc.value();
}

// ---------------------------------------------------------------------------

namespace {

// dense Dirichlet convolution on [1, x]
std::vector<double> dconv(const std::vector<double>& u, const std::vector<double>& v, i64 x) {
    std::vector<double> r((std::size_t)x + 1, 0.0);
    for (i64 a = 1; a <= x; ++a) {
        double ua = u[(std::size_t)a];
        if (ua == 0.0) continue;
        for (i64 b = 1; a * b <= x; ++b) {
            double vb = v[(std::size_t)b];
            if (vb != 0.0) r[(std::size_t)(a * b)] += ua * vb;
        }
    }
    return r;
}

}  // namespace

HBDecomposition heathbrown_decompose(const FnSpec& f, const FactorTable& t, i64 x, double eps, double w_override) {
    if (!((f.id == ArithFn::Dk && f.k <= 4) || f.id == ArithFn::OneS))
        throw std::invalid_argument("heathbrown_decompose: f must be d_k (k <= 4) or 1_S");
    if (x < 1000 || x > 1000000) throw std::invalid_argument("heathbrown_decompose: x in [10^3, 10^6]");
    if (x > t.limit) throw range_error("heathbrown_decompose: x beyond table limit");
    if (!(eps > 0 && eps <= 1)) throw std::invalid_argument("heathbrown_decompose: eps in (0,1]");

    HBDecomposition H;
    H.x = x;
    H.eps = eps;
    H.C = (int)std::ceil(3.0 / eps);
    double loglog = std::log(std::log((double)x));
    H.w = w_override > 0 ? w_override : std::pow((double)x, 1.0 / (H.C * loglog));
    double large_cut = std::pow((double)x, 1.0 / H.C);
    if (large_cut < 2.0) throw std::invalid_argument("heathbrown_decompose: degenerate large-prime cut");
    double xeps = std::pow((double)x, eps);

    // prime classes
    auto prime_class = [&](i64 p) -> int {  // 0 smooth, 1 medium, 2 large
        if ((double)p <= H.w) return 0;
        if ((double)p <= large_cut) return 1;
        return 2;
    };

    // character data mod Q, coefficients c_chi = (1/phi(Q)) sum_b a_b conj(chi(b));
    // the large-prime array is built from chi values only
    int Q = f.id == ArithFn::OneS ? 4 : 1;
    std::vector<std::vector<double>> chi;  // chi[i][r] for r mod Q (real characters here)
    std::vector<double> c_chi;
    if (Q == 1) {
        chi = {{1.0}};
        c_chi = {f.id == ArithFn::Dk ? (double)f.k : 1.0};
    } else {
        chi = {{0, 1, 0, 1}, {0, 1, 0, -1}};  // principal, and the odd character mod 4
        // a_b = f(p) for primes p = b (mod 4): a_1 = 1, a_3 = 0 for 1_S
        double a1 = 1.0, a3 = 0.0;
        c_chi = {(a1 * chi[0][1] + a3 * chi[0][3]) / 2.0, (a1 * chi[1][1] + a3 * chi[1][3]) / 2.0};
    }

    // factor arrays
    std::vector<double> sm((std::size_t)x + 1, 0.0), med((std::size_t)x + 1, 0.0), lg((std::size_t)x + 1, 0.0);
    sm[1] = 1.0;
    for (i64 n = 2; n <= x; ++n) {
        if (t.is_prime(n)) {
            int cls = prime_class(n);
            if (cls == 1) med[(std::size_t)n] = eval_fn(f, t, n);
            if (cls == 2) {
                double hv = 0;
                for (std::size_t i = 0; i < chi.size(); ++i) hv += c_chi[i] * chi[i][(std::size_t)(n % Q)];
                lg[(std::size_t)n] = hv;
            }
        }
        // smooth part: all prime factors <= w and n <= x^eps
        if ((double)n <= xeps) {
            i64 m = n;
            bool smooth = true;
            while (m > 1) {
                if ((double)t.spf(m) > H.w) {
                    smooth = false;
                    break;
                }
                m /= t.spf(m);
            }
            if (smooth) sm[(std::size_t)n] = eval_fn(f, t, n);
        }
    }

    // exp_*(u) = delta_1 + u + u*u/2! + ... ; medium then large
    auto exp_conv = [&](const std::vector<double>& u, i64& terms) {
        std::vector<double> acc((std::size_t)x + 1, 0.0);
        acc[1] = 1.0;
        std::vector<double> powk = u;
        double fact = 1.0;
        terms = 0;
        for (i64 k = 1;; ++k) {
            fact *= (double)k;
            bool nonzero = false;
            for (i64 n = 1; n <= x; ++n) {
                if (powk[(std::size_t)n] != 0.0) {
                    acc[(std::size_t)n] += powk[(std::size_t)n] / fact;
                    nonzero = true;
                }
            }
            if (!nonzero) break;
            ++terms;
            powk = dconv(powk, u, x);
        }
        return acc;
    };

    i64 kmed = 0, klarge = 0;
    std::vector<double> expm = exp_conv(med, kmed);
    std::vector<double> expl = exp_conv(lg, klarge);
    H.piece_sum = dconv(dconv(sm, expm, x), expl, x);

    // piece count: (k, l, chi-tuple) descriptors
    H.piece_count = 0;
    for (i64 k = 0; k <= kmed; ++k)
        for (i64 l = 0; l <= klarge; ++l) {
            i64 tuples = 1;
            for (i64 i = 0; i < l; ++i) tuples *= (i64)chi.size();
            H.piece_count += tuples;
        }

    // error mask: repeated prime > w, or w-smooth divisor > x^eps
    H.mask.assign((std::size_t)x + 1, 0);
    i64 masked = 0;
    for (i64 n = 1; n <= x; ++n) {
        i64 m = n;
        i64 smooth_part = 1;
        bool bad = false;
        while (m > 1) {
            i64 p = t.spf(m);
            int e = 0;
            while (m % p == 0) {
                m /= p;
                ++e;
            }
            if ((double)p <= H.w) {
                for (int i = 0; i < e; ++i) smooth_part *= p;
            } else if (e >= 2) {
                bad = true;
            }
        }
        if ((double)smooth_part > xeps) bad = true;
        if (bad) {
            H.mask[(std::size_t)n] = 1;
            ++masked;
        }
    }
    H.masked_fraction = (double)masked / (double)x;
    return H;
}

// ---------------------------------------------------------------------------

std::complex<double> type_I_sum(const FactorTable& t, i64 x, const SeqArray& a, ConvolutionPiece::Delta delta, i64 d,
                                i64 c, const PhasePoly& P, PhaseArg arg) {
    (void)t;
    if (d < 1) throw std::invalid_argument("type_I_sum: d >= 1");
    KahanComplex acc;
    for (i64 m = a.lo; m <= a.hi(); ++m) {
        double am = a.at(m);
        if (am == 0.0 || m > x) continue;
        i64 n0 = solve_congruence(m, c, d);
        if (n0 == 0) continue;
        i64 step = d / std::gcd(m % d == 0 ? d : m % d, d);
        if (d == 1) {
            n0 = 1;
            step = 1;
        }
        for (i64 n = n0; m * n <= x; n += step) {
            i64 arg_n = arg == PhaseArg::Dilated ? (m * n - c) / d : m * n;
            std::complex<double> e = eval_phase(P, arg_n);
            double coeff = am * (delta == ConvolutionPiece::Log ? std::log((double)n) : 1.0);
            acc.add(coeff * e.real(), coeff * e.imag());
        }
    }
    return acc.value();
}

std::complex<double> type_II_sum(const FactorTable& t, i64 x, const SeqArray& a, const SeqArray& b, i64 d, i64 c,
                                 const PhasePoly& P, PhaseArg arg) {
    (void)t;
    if (d < 1) throw std::invalid_argument("type_II_sum: d >= 1");
    KahanComplex acc;
    for (i64 m = a.lo; m <= a.hi(); ++m) {
        double am = a.at(m);
        if (am == 0.0 || m > 2 * x) continue;
        i64 n0 = solve_congruence(m, c, d);
        if (n0 == 0) continue;
        i64 step = d / std::gcd(m % d == 0 ? d : m % d, d);
        if (d == 1) {
            n0 = 1;
            step = 1;
        }
        i64 n_lo = (x + m - 1) / m;  // ceil(x/m)
        if (n0 < n_lo) n0 += ((n_lo - n0 + step - 1) / step) * step;
        for (i64 n = n0; m * n <= 2 * x; n += step) {
            double bn = b.at(n);
            if (bn == 0.0) continue;
            i64 arg_n = arg == PhaseArg::Dilated ? (m * n - c) / d : m * n;
            std::complex<double> e = eval_phase(P, arg_n);
            double coeff = am * bn;
            acc.add(coeff * e.real(), coeff * e.imag());
        }
    }
    return acc.value();
}

}  // namespace phaselab
