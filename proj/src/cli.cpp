#include "phaselab/cli.hpp"

#include "phaselab/arith.hpp"
#include "phaselab/bohr.hpp"
#include "phaselab/bvlab.hpp"
#include "phaselab/decomp.hpp"
#include "phaselab/equidist.hpp"
#include "phaselab/gowers.hpp"
#include "phaselab/phase.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace phaselab::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Common {
    std::string outdir;
    u64 seed = 1;
    int threads = 0;  // 0 = hardware
    std::string out_name;
};

void add_common(CLI::App* sub, Common& c) {
    const char* env = std::getenv("PHASELAB_OUTDIR");
    c.outdir = env ? env : ".";
    sub->add_option("--outdir", c.outdir, "output directory (default $PHASELAB_OUTDIR or .)");
    sub->add_option("--seed", c.seed, "64-bit seed for randomized scans");
    sub->add_option("--threads", c.threads, "worker threads (0 = hardware)");
    sub->add_option("--out", c.out_name, "basename for artifacts (default: verb name)");
}

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    }
};

json envelope(const std::string& verb, const Common& c, const json& config, double wall_ms) {
    return json{{"schema_version", kSchemaVersion}, {"tool", "phaselab"},   {"version", kToolVersion},
                {"verb", verb},                     {"config", config},     {"seed", c.seed},
                {"wall_ms", wall_ms}};
}

void write_artifact(const Common& c, const std::string& verb, const json& j, const std::string& csv = "") {
    fs::create_directories(c.outdir);
    std::string base = c.out_name.empty() ? verb : c.out_name;
    std::ofstream jf(fs::path(c.outdir) / (base + ".json"));
    jf << j.dump(2) << "\n";
    if (!csv.empty()) {
        std::ofstream cf(fs::path(c.outdir) / (base + ".csv"));
        cf << csv;
    }
}

FactorTable table_for(i64 limit) { return build_factor_table(std::max<i64>(limit, 100)); }

}  // namespace

int dispatch(const std::vector<std::string>& args) {
    CLI::App app{"phaselab: prime equidistribution experiments with exact polynomial phases"};
    app.require_subcommand(1);

    int exit_code = 0;
    // --------------------------------------------------------------- bv-scan
    auto* bv = app.add_subcommand("bv-scan", "twisted Bombieri-Vinogradov discrepancy scan");
    struct {
        Common c;
        i64 x = 10000;
        double theta = 0.25;
        i64 w = 7;
        std::string phase = "0";
        std::string fn = "lambda";
        std::string residues = "auto";
        bool plotdata = false;
        std::vector<i64> x_series;
    } bvo;
    add_common(bv, bvo.c);
    bv->add_option("--x", bvo.x, "scan limit");
    bv->add_option("--theta", bvo.theta, "level exponent: moduli d <= x^theta");
    bv->add_option("--w", bvo.w, "primorial threshold for the W-trick main term");
    bv->add_option("--phase", bvo.phase, "polynomial phase spec, e.g. 2:sqrt2m1");
    bv->add_option("--f", bvo.fn, "function: lambda|mu|d2..d9|ones|unit");
    bv->add_option("--residues", bvo.residues, "auto | all | sampled:K | fixed:C");
    bv->add_flag("--emit-plotdata", bvo.plotdata, "emit (x, normalized) series over --x-series");
    bv->add_option("--x-series", bvo.x_series, "x values for --emit-plotdata");
    bv->callback([&] {
        Timer timer;
        PhasePoly P = parse_phase_spec(bvo.phase);
        FnSpec f = parse_fn(bvo.fn);
        std::optional<ResiduePolicy> pol;
        if (bvo.residues == "auto")
            pol = std::nullopt;  // all residues for d <= 10^3, sampled(32) above
        else if (bvo.residues == "all")
            pol = ResiduePolicy::all_coprime();
        else if (bvo.residues.rfind("sampled:", 0) == 0)
            pol = ResiduePolicy::sampled(std::stoll(bvo.residues.substr(8)));
        else if (bvo.residues.rfind("fixed:", 0) == 0)
            pol = ResiduePolicy::fixed(std::stoll(bvo.residues.substr(6)));
        else
            throw CLI::ValidationError("--residues", "expected auto | all | sampled:K | fixed:C");

        std::vector<i64> xs = bvo.plotdata && !bvo.x_series.empty() ? bvo.x_series : std::vector<i64>{bvo.x};
        i64 x_max = *std::max_element(xs.begin(), xs.end());
        FactorTable t = table_for(x_max);
        Primorial W = primorial_up_to(bvo.w);

        json config{{"x", bvo.x},     {"theta", bvo.theta},       {"w", bvo.w},
                    {"phase", bvo.phase}, {"f", bvo.fn},          {"residues", bvo.residues},
                    {"x_series", xs}};
        json series = json::array();
        std::string csv;
        DiscrepancyReport last;
        for (i64 x : xs) {
            last = discrepancy_scan(f, t, x, bvo.theta, W, P, pol, bvo.c.seed, bvo.c.threads);
            last.phase_spec = bvo.phase;
            series.push_back({{"x", x}, {"normalized", last.normalized}, {"aggregate", last.aggregate},
                              {"rows", last.rows.size()}});
            csv = report_to_csv(last);
        }
        json j = envelope("bv-scan", bvo.c, config, timer.ms());
        j["series"] = series;
        j["rows"] = last.rows.size();
        j["aggregate"] = last.aggregate;
        j["normalized"] = last.normalized;
        std::string plot;
        if (bvo.plotdata) {
            plot = "x,normalized\n";
            for (auto& s : series) plot += std::to_string((i64)s["x"]) + "," + json(s["normalized"]).dump() + "\n";
            fs::create_directories(bvo.c.outdir);
            std::ofstream pf(fs::path(bvo.c.outdir) /
                             ((bvo.c.out_name.empty() ? std::string("bv-scan") : bvo.c.out_name) + "_plot.csv"));
            pf << plot;
        }
        write_artifact(bvo.c, "bv-scan", j, csv);
        std::cout << "bv-scan x=" << last.x << " rows=" << last.rows.size() << " normalized=" << last.normalized
                  << "\n";
    });

    // ------------------------------------------------------------------ weyl
    auto* weyl = app.add_subcommand("weyl", "exponential sum over a progression");
    struct {
        Common c;
        std::string phase = "2:sqrt2m1";
        i64 n0 = 1, n1 = 10000, step = 1;
    } wo;
    add_common(weyl, wo.c);
    weyl->add_option("--phase", wo.phase);
    weyl->add_option("--n0", wo.n0);
    weyl->add_option("--n1", wo.n1);
    weyl->add_option("--step", wo.step);
    weyl->callback([&] {
        Timer timer;
        PhasePoly P = parse_phase_spec(wo.phase);
        WeylSum s = weyl_sum(P, wo.n0, wo.n1, wo.step);
        json j = envelope("weyl", wo.c, {{"phase", wo.phase}, {"n0", wo.n0}, {"n1", wo.n1}, {"step", wo.step}},
                          timer.ms());
        j["re"] = s.value.real();
        j["im"] = s.value.imag();
        j["abs"] = std::abs(s.value);
        j["empty_range"] = s.empty_range;
        write_artifact(wo.c, "weyl", j);
        std::cout << "weyl |S|=" << std::abs(s.value) << "\n";
    });

    // -------------------------------------------------------------- equidist
    auto* eq = app.add_subcommand("equidist", "total equidistribution verdict for a phase");
    struct {
        Common c;
        std::string phase = "2:1/3";
        i64 n = 10000;
        double delta = 0.1;
        int trials = 200;
    } eo;
    add_common(eq, eo.c);
    eq->add_option("--phase", eo.phase);
    eq->add_option("--n", eo.n);
    eq->add_option("--delta", eo.delta);
    eq->add_option("--trials", eo.trials);
    eq->callback([&] {
        Timer timer;
        PhasePoly P = parse_phase_spec(eo.phase);
        EquidistVerdict v = total_equidist_test(P, eo.n, eo.delta, eo.trials, eo.c.seed);
        json j = envelope("equidist", eo.c,
                          {{"phase", eo.phase}, {"n", eo.n}, {"delta", eo.delta}, {"trials", eo.trials}}, timer.ms());
        j["obstructed"] = v.obstructed;
        if (v.obstruction) {
            j["ell"] = v.obstruction->ell;
            json gaps = json::array();
            for (auto& b : v.obstruction->bounds)
                gaps.push_back({{"j", b.j}, {"gap", b.gap}, {"threshold", b.threshold}});
            j["gaps"] = gaps;
        }
        j["evidence"] = {{"start", v.evidence.start}, {"step", v.evidence.step}, {"length", v.evidence.length},
                         {"magnitude", v.evidence.magnitude}};
        j["small_N_warning"] = v.small_N_warning;
        write_artifact(eo.c, "equidist", j);
        std::cout << "equidist " << (v.obstructed ? "Obstructed" : "Equidistributed");
        if (v.obstruction) std::cout << " ell=" << v.obstruction->ell;
        std::cout << " evidence=" << v.evidence.magnitude << "\n";
    });

    // --------------------------------------------------------- vaughan-check
    auto* vc = app.add_subcommand("vaughan-check", "verify Vaughan's identity exactly");
    struct {
        Common c;
        i64 x = 1000;
        double tol = 1e-6;
    } vo;
    add_common(vc, vo.c);
    vc->add_option("--x", vo.x);
    vc->add_option("--tol", vo.tol, "pass/fail gate on the reconstruction error");
    vc->callback([&] {
        Timer timer;
        FactorTable t = table_for(vo.x);
        Decomposition D = vaughan_decompose(t, vo.x);
        i64 win_lo = 1;
        while ((win_lo + 1) * (win_lo + 1) * (win_lo + 1) <= vo.x * vo.x) ++win_lo;  // floor(x^(2/3))
        double max_err = 0;
        i64 argmax = 0;
        for (i64 n = win_lo + 1; n <= vo.x; ++n) {
            double err = std::abs(D.eval(t, n) - von_mangoldt(t, n));
            if (err > max_err) {
                max_err = err;
                argmax = n;
            }
        }
        json j = envelope("vaughan-check", vo.c, {{"x", vo.x}}, timer.ms());
        j["J"] = D.J();
        j["max_abs_error"] = max_err;
        j["argmax_n"] = argmax;
        j["tol"] = vo.tol;
        write_artifact(vo.c, "vaughan-check", j);
        std::cout << "vaughan-check x=" << vo.x << " J=" << D.J() << " max_abs_error=" << max_err << "\n";
        if (max_err >= vo.tol) exit_code = 1;
    });

    // -------------------------------------------------------------- hb-check
    auto* hb = app.add_subcommand("hb-check", "verify the Heath-Brown type decomposition off its mask");
    struct {
        Common c;
        i64 x = 10000;
        std::string fn = "d2";
        double eps = 1.0 / 3;
        double w_override = 0;
        double tol = 1e-6;
    } ho;
    add_common(hb, ho.c);
    hb->add_option("--x", ho.x);
    hb->add_option("--f", ho.fn, "d2|d3|d4|ones");
    hb->add_option("--eps", ho.eps);
    hb->add_option("--hb-w", ho.w_override, "override the default smooth cut w");
    hb->add_option("--tol", ho.tol, "pass/fail gate on the off-mask error");
    hb->callback([&] {
        Timer timer;
        FactorTable t = table_for(ho.x);
        FnSpec f = parse_fn(ho.fn);
        HBDecomposition H = heathbrown_decompose(f, t, ho.x, ho.eps, ho.w_override);
        double max_err = 0;
        i64 argmax = 0;
        for (i64 n = 1; n <= ho.x; ++n) {
            if (H.masked(n)) continue;
            double err = std::abs(H.piece_sum[(std::size_t)n] - eval_fn(f, t, n));
            if (err > max_err) {
                max_err = err;
                argmax = n;
            }
        }
        json j = envelope("hb-check", ho.c,
                          {{"x", ho.x}, {"f", ho.fn}, {"eps", ho.eps}, {"hb_w", ho.w_override}}, timer.ms());
        j["f"] = ho.fn;
        j["w"] = H.w;
        j["C"] = H.C;
        j["J"] = H.piece_count;
        j["masked_fraction"] = H.masked_fraction;
        j["max_abs_error_off_mask"] = max_err;
        j["argmax_n"] = argmax;
        write_artifact(ho.c, "hb-check", j);
        std::cout << "hb-check f=" << ho.fn << " x=" << ho.x << " masked=" << H.masked_fraction
                  << " max_err_off_mask=" << max_err << "\n";
        if (max_err >= ho.tol) exit_code = 1;
    });

    // ---------------------------------------------------------- typeII-probe
    auto* t2 = app.add_subcommand("typeII-probe", "normalized bilinear sum decay probe");
    struct {
        Common c;
        i64 x = 100000;
        std::string phase = "2:sqrt2m1";
    } to;
    add_common(t2, to.c);
    t2->add_option("--x", to.x);
    t2->add_option("--phase", to.phase);
    t2->callback([&] {
        Timer timer;
        FactorTable t = table_for(2 * to.x + 1);
        PhasePoly P = parse_phase_spec(to.phase);
        i64 M = (i64)std::sqrt((double)to.x);
        SeqArray a, b;
        a.lo = M;
        a.v.assign((std::size_t)(M + 1), 1.0);  // [M, 2M]
        b.lo = 1;
        b.v.assign((std::size_t)(2 * to.x / M), 1.0);
        std::complex<double> s = type_II_sum(t, to.x, a, b, 1, 0, P, PhaseArg::Plain);
        // normalized sequence norms ||a||_p = ((1/M) sum |a_m|^p)^(1/p)
        double na = std::sqrt((double)(M + 1) / (double)M);
        double nb = std::pow((double)b.v.size() / (double)b.lo, 0.25);
        double normalized = std::abs(s) / ((double)to.x * na * nb);
        json j = envelope("typeII-probe", to.c, {{"x", to.x}, {"phase", to.phase}}, timer.ms());
        j["M"] = M;
        j["abs_sum"] = std::abs(s);
        j["normalized"] = normalized;
        write_artifact(to.c, "typeII-probe", j);
        std::cout << "typeII-probe x=" << to.x << " normalized=" << normalized << "\n";
    });

    // ------------------------------------------------------------ bohr-count
    auto* bc = app.add_subcommand("bohr-count", "primes with ||Q(p)|| < rho");
    struct {
        Common c;
        std::string phase = "1:sqrt2m1";
        double rho = 0.1;
        i64 x = 100000;
    } bo;
    add_common(bc, bo.c);
    bc->add_option("--phase", bo.phase);
    bc->add_option("--rho", bo.rho);
    bc->add_option("--x", bo.x);
    bc->callback([&] {
        Timer timer;
        FactorTable t = table_for(bo.x);
        PhasePoly Q = parse_phase_spec(bo.phase);
        BohrPrimeCount r = bohr_prime_count(t, Q, bo.rho, bo.x);
        json j = envelope("bohr-count", bo.c, {{"phase", bo.phase}, {"rho", bo.rho}, {"x", bo.x}}, timer.ms());
        j["count"] = r.count;
        j["expected"] = r.expected;
        j["ratio"] = r.ratio;
        j["degenerate_constant"] = r.degenerate_constant;
        write_artifact(bo.c, "bohr-count", j);
        std::cout << "bohr-count count=" << r.count << " expected=" << r.expected << " ratio=" << r.ratio
                  << (r.degenerate_constant ? " (constant phase: degenerate)" : "") << "\n";
    });

    // ------------------------------------------------------------- chen-scan
    auto* cs = app.add_subcommand("chen-scan", "Chen primes with ||Q(p)|| < p^-theta");
    struct {
        Common c;
        std::string phase = "1:sqrt2m1";
        double theta = 0.05;
        i64 x = 1000000;
    } co;
    add_common(cs, co.c);
    cs->add_option("--phase", co.phase);
    cs->add_option("--theta", co.theta);
    cs->add_option("--x", co.x);
    cs->callback([&] {
        Timer timer;
        FactorTable t = table_for(co.x + 2);
        PhasePoly Q = parse_phase_spec(co.phase);
        ChenBohrScan r = chen_bohr_scan(t, Q, co.theta, co.x);
        json j = envelope("chen-scan", co.c, {{"phase", co.phase}, {"theta", co.theta}, {"x", co.x}}, timer.ms());
        j["count"] = r.count;
        j["chen_total"] = r.chen_total;
        j["witnesses"] = r.witnesses;
        std::string csv = "p\n";
        for (i64 p : r.witnesses) csv += std::to_string(p) + "\n";
        write_artifact(co.c, "chen-scan", j, csv);
        std::cout << "chen-scan count=" << r.count << " of " << r.chen_total << " Chen primes\n";
    });

    // -------------------------------------------------------- singular-series
    auto* ss = app.add_subcommand("singular-series", "truncated Euler product for a linear-form tuple");
    struct {
        Common c;
        std::string forms = "1,0;1,2";
        i64 p_cut = 100000;
    } so;
    add_common(ss, so.c);
    ss->add_option("--forms", so.forms, "semicolon-separated a,b pairs: L(n) = a n + b");
    ss->add_option("--p-cut", so.p_cut);
    ss->callback([&] {
        Timer timer;
        std::vector<LinearForm> forms;
        std::stringstream fss(so.forms);
        std::string item;
        while (std::getline(fss, item, ';')) {
            auto comma = item.find(',');
            if (comma == std::string::npos) throw CLI::ValidationError("--forms", "expected a,b;a,b;...");
            forms.push_back({std::stoll(item.substr(0, comma)), std::stoll(item.substr(comma + 1))});
        }
        SingularSeriesValue v = singular_series(forms, so.p_cut);
        json j = envelope("singular-series", so.c, {{"forms", so.forms}, {"p_cut", so.p_cut}}, timer.ms());
        j["value"] = v.value;
        j["tail_estimate"] = v.tail_estimate;
        write_artifact(so.c, "singular-series", j);
        std::cout << "singular-series value=" << v.value << " (+/- " << v.tail_estimate << " tail)\n";
    });

    // ---------------------------------------------------------------- gowers
    auto* gw = app.add_subcommand("gowers", "Gowers uniformity diagnostic for Lambda_{a,q} - 1");
    struct {
        Common c;
        i64 q = 2, a = 1, n = 200;
        int k = 2;
        i64 w = 2;
    } go;
    add_common(gw, go.c);
    gw->add_option("--q", go.q);
    gw->add_option("--a", go.a);
    gw->add_option("--n", go.n);
    gw->add_option("--k", go.k);
    gw->add_option("--w", go.w);
    gw->callback([&] {
        Timer timer;
        FactorTable t = table_for(go.q * go.n + go.a + 1);
        UniformityDiagnostic d = uniformity_diagnostic(t, go.a, go.q, go.n, go.k, go.w, go.c.threads);
        json j = envelope("gowers", go.c, {{"q", go.q}, {"a", go.a}, {"n", go.n}, {"k", go.k}, {"w", go.w}},
                          timer.ms());
        j["k"] = go.k;
        j["N"] = go.n;
        j["q"] = go.q;
        j["a"] = go.a;
        j["norm"] = d.value;
        j["primorial_divides"] = d.primorial_divides;
        write_artifact(go.c, "gowers", j);
        std::cout << "gowers ||Lambda_{a,q}-1||_{U^" << go.k << "[" << go.n << "]} = " << d.value
                  << (d.primorial_divides ? "" : "  [P(w) does not divide q]") << "\n";
    });

    // ------------------------------------------------------------ linear-forms
    auto* lf = app.add_subcommand("linear-forms", "count prod Lambda(L_i(qn+a)) vs local-factor prediction");
    struct {
        Common c;
        std::string forms = "1,0;1,2";
        i64 q = 1;
        std::string shift;
        i64 x = 100000;
        i64 p_cut = 10000;
    } lo;
    add_common(lf, lo.c);
    lf->add_option("--forms", lo.forms, "semicolon-separated coef-vector,const: e.g. 1,0;1,2 for (n, n+2)");
    lf->add_option("--q", lo.q);
    lf->add_option("--shift", lo.shift, "comma-separated shift vector a");
    lf->add_option("--x", lo.x);
    lf->add_option("--p-cut", lo.p_cut);
    lf->callback([&] {
        Timer timer;
        AffineSystem sys;
        sys.q = lo.q;
        std::stringstream fss(lo.forms);
        std::string item;
        while (std::getline(fss, item, ';')) {
            std::vector<i64> nums;
            std::stringstream is(item);
            std::string tok;
            while (std::getline(is, tok, ',')) nums.push_back(std::stoll(tok));
            if (nums.size() < 2) throw CLI::ValidationError("--forms", "each form needs coefs and a constant");
            AffineForm L;
            L.coef.assign(nums.begin(), nums.end() - 1);
            L.c0 = nums.back();
            sys.forms.push_back(L);
        }
        if (!lo.shift.empty()) {
            std::stringstream is(lo.shift);
            std::string tok;
            while (std::getline(is, tok, ',')) sys.shift.push_back(std::stoll(tok));
        }
        i64 arg_max = 0;
        for (auto& L : sys.forms) {
            i64 v = std::abs(L.c0);
            for (std::size_t i = 0; i < L.coef.size(); ++i)
                v += std::abs(L.coef[i]) * (lo.q * lo.x + (i < sys.shift.size() ? std::abs(sys.shift[i]) : 0));
            arg_max = std::max(arg_max, v);
        }
        FactorTable t = table_for(arg_max);
        LinearFormsCount r = linear_forms_count(t, sys, lo.x, lo.p_cut, lo.c.threads, lo.c.seed);
        json j = envelope("linear-forms", lo.c,
                          {{"forms", lo.forms}, {"q", lo.q}, {"shift", lo.shift}, {"x", lo.x}, {"p_cut", lo.p_cut}},
                          timer.ms());
        j["lhs"] = r.lhs;
        j["predicted"] = r.predicted;
        j["ratio"] = r.ratio;
        j["p_cut"] = r.p_cut;
        write_artifact(lo.c, "linear-forms", j);
        std::cout << "linear-forms lhs=" << r.lhs << " predicted=" << r.predicted << " ratio=" << r.ratio << "\n";
    });

    // --------------------------------------------------------- minorant-audit
    auto* ma = app.add_subcommand("minorant-audit", "certify the trapezoid minorant's bounds");
    struct {
        Common c;
        double rho = 0.1, eta = 0.2;
        i64 K = 0;  // 0 = ceil(4/(rho eta))
        i64 grid = 100000;
    } mo;
    add_common(ma, mo.c);
    ma->add_option("--rho", mo.rho);
    ma->add_option("--eta", mo.eta);
    ma->add_option("--K", mo.K);
    ma->add_option("--grid", mo.grid);
    ma->callback([&] {
        Timer timer;
        i64 K = mo.K > 0 ? mo.K : (i64)std::ceil(4.0 / (mo.rho * mo.eta));
        MinorantSeries g = minorant_build(mo.rho, mo.eta, K);
        bool minorant_ok = true, coeff_ok = true;
        double max_dev = 0;
        for (i64 i = 0; i <= mo.grid; ++i) {
            double xx = (double)i / (double)mo.grid;
            double v = minorant_eval_piecewise(g, xx);
            double ind = std::abs(xx - std::round(xx)) < mo.rho ? 1.0 : 0.0;
            if (v < -1e-12 || v > ind + 1e-12) minorant_ok = false;
            max_dev = std::max(max_dev, std::abs(minorant_eval_series(g, xx) - v));
        }
        for (double cj : g.cj)
            if (std::abs(cj) > 10 * mo.rho) coeff_ok = false;
        bool tail_ok = max_dev <= g.certified_tail;
        json j = envelope("minorant-audit", mo.c,
                          {{"rho", mo.rho}, {"eta", mo.eta}, {"K", K}, {"grid", mo.grid}}, timer.ms());
        j["c0"] = g.c0;
        j["certified_tail"] = g.certified_tail;
        j["max_series_deviation"] = max_dev;
        j["minorant_ok"] = minorant_ok;
        j["coeff_ok"] = coeff_ok;
        j["tail_ok"] = tail_ok;
        write_artifact(mo.c, "minorant-audit", j);
        std::cout << "minorant-audit minorant_ok=" << minorant_ok << " coeff_ok=" << coeff_ok
                  << " tail_ok=" << tail_ok << "\n";
        if (!(minorant_ok && coeff_ok && tail_ok)) exit_code = 1;
    });

    // expand "--config FILE" into the file's flat key=value pairs; unknown
    // keys become unknown options and are rejected by the parser
    std::vector<std::string> expanded;
    try {
        for (std::size_t i = 0; i < args.size(); ++i) {
            if (args[i] != "--config") {
                expanded.push_back(args[i]);
                continue;
            }
            if (i + 1 >= args.size()) throw std::invalid_argument("--config needs a file argument");
            std::ifstream cfg(args[++i]);
            if (!cfg.good()) throw std::invalid_argument("cannot read config file " + args[i]);
            std::string line;
            while (std::getline(cfg, line)) {
                auto first = line.find_first_not_of(" \t");
                if (first == std::string::npos || line[first] == '#') continue;
                auto eq = line.find('=');
                if (eq == std::string::npos) throw std::invalid_argument("config line without '=': " + line);
                auto strip = [](std::string v) {
                    auto a = v.find_first_not_of(" \t");
                    auto b = v.find_last_not_of(" \t\r");
                    v = (a == std::string::npos) ? "" : v.substr(a, b - a + 1);
                    if (v.size() >= 2 && v.front() == '"' && v.back() == '"') v = v.substr(1, v.size() - 2);
                    return v;
                };
                expanded.push_back("--" + strip(line.substr(0, eq)));
                expanded.push_back(strip(line.substr(eq + 1)));
            }
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }

    // parse + run
    std::vector<const char*> argv;
    argv.push_back("phaselab");
    for (auto& s : expanded) argv.push_back(s.c_str());
    try {
        app.parse((int)argv.size(), argv.data());
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    } catch (const capacity_error& e) {
        std::cerr << "capacity error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const range_error& e) {
        std::cerr << "capacity error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return exit_code;
}

int dispatch(int argc, const char* const* argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return dispatch(args);
}

}  // namespace phaselab::cli
