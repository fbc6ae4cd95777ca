// Acceptance suite: one PASS/FAIL line per criterion. Usage:
//   acceptance [--seed N] [--configs DIR] [--work DIR]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mixsteady/commands.hpp"
#include "mixsteady/kirchhoff.hpp"
#include "oracles.hpp"

using namespace mixsteady;
namespace fs = std::filesystem;

namespace {

struct Verdict {
    bool pass = true;
    std::string detail;
    void require(bool ok, const std::string& what) {
        if (!ok) pass = false;
        if (!detail.empty()) detail += "; ";
        detail += what + (ok ? "" : " [violated]");
    }
};

std::string fmt(double v, int prec = 3) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    return buf;
}

class Clock {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

int failures = 0;

void report(int id, const std::string& title, const Verdict& v, double secs) {
    std::printf("criterion %2d: %s  %s (%.1f s)\n    %s\n", id, v.pass ? "PASS" : "FAIL", title.c_str(), secs,
                v.detail.c_str());
    std::fflush(stdout);
    failures += !v.pass;
}

// Runs one criterion; an escaping exception becomes a failed verdict.
template <class F>
Verdict guarded(F&& f) {
    try {
        return f();
    } catch (const std::exception& e) {
        Verdict v;
        v.require(false, std::string("exception: ") + e.what());
        return v;
    }
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

// Every state that passed through a criterion, for the entropy-sign sweep.
struct SigmaLedger {
    int states = 0;
    int bad = 0;
    double worst = INFINITY;  // min over states of sigma_min / max(1, |sigma|_inf)
    void add(const DiagnosticsReport& d) {
        ++states;
        const double scaled = d.sigma.min / std::max(1.0, d.sigma.max_abs);
        worst = std::min(worst, scaled);
        if (!(d.sigma.min >= -1e-12 * std::max(1.0, d.sigma.max_abs))) ++bad;
    }
    void add(const RunOutput& r) {
        for (const auto& s : r.result.report.steps) add(s.diagnostics);
        add(r.diagnostics);
    }
};

// --- 1 -------------------------------------------------------------------
Verdict constitutive(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    int gk_bad = 0, cp_bad = 0, sum_bad = 0, sign_bad = 0, rho_bad = 0, bound_bad = 0;
    const int trials = 10000;
    for (int t = 0; t < trials; ++t) {
        MixtureSpec spec;
        spec.n = 2 + static_cast<int>(U(rng) * 4);
        spec.c_v.resize(spec.n);
        for (auto& c : spec.c_v) c = 0.5 + 3.0 * U(rng);
        spec.Lambda = 3.0 * U(rng);
        spec.B_omega = std::exp(8.0 * U(rng) - 4.0);
        const double rho = std::exp(12.0 * U(rng) - 4.0), th = std::exp(4.0 * U(rng) - 2.0);
        std::vector<double> Y(spec.n);
        double sum = 0.0;
        for (auto& y : Y) sum += (y = std::exp(-10.0 * U(rng)));
        for (auto& y : Y) y /= sum;

        const auto gd = entropy_gibbs(ThermoPoint{rho, th, Y}, spec);
        const auto gref = oracle::gibbs(rho, th, Y, spec);
        for (int k = 0; k < spec.n; ++k) {
            const double a = gd.h_k[k], b = th * gd.s_k[k];
            const double ulp = std::nextafter(std::max(std::abs(a), std::abs(b)), INFINITY) -
                               std::max(std::abs(a), std::abs(b));
            if (!(std::abs(gd.g_k[k] - (a - b)) <= 4 * ulp)) ++gk_bad;
            if (!(std::abs(gd.g_k[k] - static_cast<double>(gref[k])) <= 1e-12 * (std::abs(a) + std::abs(b)))) ++gk_bad;
            if (spec.c_p(k) != spec.c_v[k] + 1.0) ++cp_bad;
        }

        const auto w = production_rates(th, Y, spec);
        double s = 0.0;
        for (double v : w) s += v;
        if (s != 0.0) ++sum_bad;

        long double dot = 0.0L, mag = 0.0L;
        for (int k = 0; k < spec.n; ++k) {
            dot += static_cast<long double>(w[k]) * gref[k];
            mag += std::fabs(static_cast<long double>(w[k]) * gref[k]);
        }
        if (!(dot <= 16 * std::numeric_limits<long double>::epsilon() * mag)) ++sign_bad;

        // The oracle carries log(rho) in every Gibbs function; the rates must not see it.
        const auto r1 = oracle::rates(rho, th, Y, spec);
        const auto r2 = oracle::rates(rho * std::exp(6.0 * U(rng) - 3.0), th, Y, spec);
        double scale = 0.0;
        for (int k = 0; k < spec.n; ++k) scale = std::max(scale, std::abs(static_cast<double>(r1[k])));
        for (int k = 0; k < spec.n; ++k) {
            if (!(std::abs(w[k] - static_cast<double>(r1[k])) <= 1e-9 * std::max(scale, 1e-300) + 1e-300)) ++rho_bad;
            if (!(std::abs(static_cast<double>(r1[k] - r2[k])) <= 1e-9 * std::max(scale, 1e-300) + 1e-300)) ++rho_bad;
            if (!(std::abs(w[k]) <= spec.Lambda * spec.B_omega * (1 + 1e-14))) ++bound_bad;
        }
    }
    Verdict v;
    v.require(gk_bad == 0, "g_k = h_k - theta s_k failures " + std::to_string(gk_bad));
    v.require(cp_bad == 0, "c_pk = c_vk + 1 failures " + std::to_string(cp_bad));
    v.require(sum_bad == 0, "sum omega != 0 (bitwise) " + std::to_string(sum_bad));
    v.require(sign_bad == 0, "sum omega g > 0 " + std::to_string(sign_bad));
    v.require(rho_bad == 0, "rho dependence " + std::to_string(rho_bad));
    v.require(bound_bad == 0, "|omega| > Lambda B " + std::to_string(bound_bad));
    v.detail += "; " + std::to_string(trials) + " random states";
    return v;
}

// --- 2 -------------------------------------------------------------------
Verdict kirchhoff_suite() {
    Verdict v;
    const std::vector<std::pair<double, double>> params{{1, 1}, {1, 1e-1}, {1, 1e-3}, {100, 1e-3}, {1e4, 1}};
    double worst = 0.0;
    for (auto [D0M, eps] : params)
        for (int k = 0; k < 1000; ++k) {
            const double x = -30.0 + 60.0 * k / 999.0;
            worst = std::max(worst, std::abs(kirchhoff_inverse(kirchhoff(x, D0M, eps), D0M, eps) - x));
        }
    v.require(worst <= 1e-10, "max |Hinv(H(x)) - x| = " + fmt(worst) + " over 10^3 points x 5 (D0M, eps)");

    // H(y) ~ eps y once the exponential part is negligible against eps |y|.
    double ratio_dev = 0.0, slope_dev = 0.0;
    for (auto [D0M, eps] : params) {
        for (int m = 2; m <= 10; ++m) {
            const double y = -100.0 * m * std::max(1.0, D0M / eps);
            ratio_dev = std::max(ratio_dev, std::abs(kirchhoff(y, D0M, eps) / (eps * y) - 1.0));
        }
        for (double y = -20.0; y >= -200.0; y -= 10.0)
            if (D0M * std::exp(y) <= 0.01 * eps)
                slope_dev = std::max(slope_dev, std::abs(kirchhoff_slope(y, D0M, eps) / eps - 1.0));
    }
    v.require(ratio_dev <= 0.01, "max |H(y)/(eps y) - 1| = " + fmt(ratio_dev));
    v.require(slope_dev <= 0.01, "max |H'(y)/eps - 1| = " + fmt(slope_dev));
    return v;
}

// --- 3 -------------------------------------------------------------------
Verdict constant_states() {
    Verdict v;
    GridSpec g{1.0, 1.0, 64, 64};
    MixtureSpec spec;
    SubsolverConfig cfg;
    double werr = 0.0;
    for (double delta : {0.1, 0.01, 0.001}) {
        SpeciesInputs in;
        in.M = 100.0;
        in.reg = Regularization::from_delta(delta);
        const double eps = in.reg.eps;
        const double root =
            oracle::bisect([&](double w) { return eps * w + delta * std::exp(w) - delta / spec.n; }, -60.0, 5.0);
        const auto res = SpeciesSolver(g, spec, cfg).solve(in);
        for (const auto& wk : res.w)
            for (double x : wk) werr = std::max(werr, std::abs(x - root));
    }
    v.require(werr <= 1e-8, "species vs bisection root: " + fmt(werr));

    double zerr = 0.0;
    for (double Theta0 : {0.5, 1.0, 2.0}) {
        ThermalInputs in;
        in.M = 100.0;
        in.reg = Regularization::from_delta(1e-4);
        const auto Th = BoundaryFlux::constant(g, Theta0);
        in.Theta = &Th;
        const auto res = ThermalSolver(g, spec, cfg).solve(in);
        for (double z : res.z) zerr = std::max(zerr, std::abs(z - std::log(Theta0)));
    }
    v.require(zerr <= 1e-8, "thermal vs log Theta0 at eps = 1e-12: " + fmt(zerr));
    return v;
}

// --- 4 -------------------------------------------------------------------
Verdict mms_suite() {
    Verdict v;
    MixtureSpec spec;
    MmsOptions opt;
    opt.cells = {16, 32, 64, 128};
    auto order = [&](MmsCase c, ConvectionScheme conv) {
        MmsOptions o = opt;
        o.solver.convection = conv;
        return run_mms(c, o, spec).order_l2;
    };
    const double th = order(MmsCase::Thermal, ConvectionScheme::Upwind);
    const double sp = order(MmsCase::Species, ConvectionScheme::Upwind);
    const double fc = order(MmsCase::Flow, ConvectionScheme::Centered);
    const double fu = order(MmsCase::Flow, ConvectionScheme::Upwind);
    v.require(th >= 1.9, "thermal order " + fmt(th));
    v.require(sp >= 1.9, "species order " + fmt(sp));
    v.require(fc >= 1.9, "flow centered order " + fmt(fc));
    v.require(fu >= 0.9, "flow upwind order " + fmt(fu));
    return v;
}

// --- 9 -------------------------------------------------------------------
FieldState random_bar(const GridSpec& g, int n, double M, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    FieldState s = FieldState::initial(g, M, n, 1.0);
    for (std::size_t p = 0; p < g.size(); ++p) {
        s.r[p] = 0.05 * M * U(rng);
        s.u.x[p] = 0.1 * U(rng);
        s.u.y[p] = 0.1 * U(rng);
        s.z[p] = 0.3 * U(rng);
        for (auto& w : s.w) w[p] += 0.5 * U(rng);
    }
    project_mean_zero(g, s.r);
    return s;
}

double max_diff(const FieldState& a, const FieldState& b) {
    double d = 0.0;
    for (std::size_t p = 0; p < a.r.size(); ++p) {
        d = std::max({d, std::abs(a.r[p] - b.r[p]), std::abs(a.u.x[p] - b.u.x[p]), std::abs(a.u.y[p] - b.u.y[p]),
                      std::abs(a.z[p] - b.z[p])});
        for (std::size_t k = 0; k < a.w.size(); ++k) d = std::max(d, std::abs(a.w[k][p] - b.w[k][p]));
    }
    return d;
}

Verdict anchoring(const ProblemConfig& smoke, std::uint64_t seed) {
    Verdict v;
    std::mt19937_64 rng(seed);
    const ProblemData data = build_problem_data(smoke);
    Homotopy h(smoke.grid, smoke.mixture, data, smoke.continuation);
    double diff = 0.0;
    int iters = 0;
    for (double delta : {0.1, 1e-3}) {
        const auto reg = Regularization::from_delta(delta);
        const FieldState a = random_bar(smoke.grid, smoke.mixture.n, smoke.continuation.M, rng);
        const FieldState b = random_bar(smoke.grid, smoke.mixture.n, smoke.continuation.M, rng);
        diff = std::max(diff, max_diff(h.apply(a, 0.0, reg), h.apply(b, 0.0, reg)));
        iters = std::max(iters, h.solve_at(0.0, delta, a).record.iterations);
    }
    v.require(diff <= 1e-10, "max |F0(a) - F0(b)| = " + fmt(diff));
    v.require(iters <= 2, "outer iterations at lambda = 0: " + std::to_string(iters));
    return v;
}

ProblemConfig resized(const ProblemConfig& c, int cells, std::vector<double> deltas) {
    ProblemConfig r = c;
    r.grid.nx = r.grid.ny = cells;
    r.continuation.delta_schedule = std::move(deltas);
    return r;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance suite"};
    std::uint64_t seed = 20240611;
    std::string configs = MIXSTEADY_SOURCE_DIR "/configs";
    std::string work = (fs::temp_directory_path() / "mixsteady_acceptance").string();
    app.add_option("--seed", seed, "seed for randomized criteria");
    app.add_option("--configs", configs, "directory holding smoke.cfg");
    app.add_option("--work", work, "scratch directory for written files");
    CLI11_PARSE(app, argc, argv);

    fs::remove_all(work);
    fs::create_directories(work);
    const ProblemConfig smoke = load_config(configs + "/smoke.cfg");
    SigmaLedger sigma;
    Clock total;

    {
        Clock c;
        Verdict v = guarded([&] { return constitutive(seed); });
        const double t = c.seconds();
        v.require(t < 1.0, "time " + fmt(t) + " s < 1 s");
        report(1, "constitutive identities", v, t);
    }
    {
        Clock c;
        report(2, "Kirchhoff round trip and asymptotics", guarded(kirchhoff_suite), c.seconds());
    }
    {
        Clock c;
        Verdict v = guarded(constant_states);
        const double t = c.seconds();
        v.require(t < 10.0, "time " + fmt(t) + " s < 10 s");
        report(3, "lambda = 0 constant-state oracles on 65^2", v, t);
    }
    {
        Clock c;
        Verdict v = guarded(mms_suite);
        const double t = c.seconds();
        v.require(t < 300.0, "time " + fmt(t) + " s < 300 s");
        report(4, "manufactured-solution orders, 17^2 to 129^2", v, t);
    }

    // The three sweeps below produce every state used by criteria 5 to 8.
    Clock c7;
    const std::vector<double> deltas{0.1, std::pow(10.0, -1.5), 0.01, std::pow(10.0, -2.5), 0.001};
    const auto dsweep = run_sweep(smoke, SweepAxis::Delta, deltas, 1);
    const double t7 = c7.seconds();

    Clock c8;
    const auto msweep = run_sweep(smoke, SweepAxis::M, {1e2, 1e3, 1e4}, 1);
    const double t8 = c8.seconds();

    Clock c6;
    std::vector<RunOutput> refine;
    std::string refine_error;
    try {
        for (int cells : {16, 32}) refine.push_back(run_config(resized(smoke, cells, {0.001})));
    } catch (const std::exception& e) {
        refine_error = e.what();
    }
    const double t6 = c6.seconds();

    for (const auto& r : dsweep)
        if (r.has_state) sigma.add(r.run);
    for (const auto& r : msweep)
        if (r.has_state) sigma.add(r.run);
    for (const auto& r : refine) sigma.add(r);

    // Criterion 10 runs before 5 so that its states are counted too.
    Clock c10;
    Verdict v10;
    try {
        const ProblemConfig small = resized(smoke, 32, {0.1, 0.01});
        const RunOutput a = run_config(small);
        const RunOutput b = run_config(small);
        sigma.add(a);
        write_run(work + "/det_a", a);
        write_run(work + "/det_b", b);
        int files = 0, differ = 0;
        for (const auto& e : fs::directory_iterator(work + "/det_a")) {
            ++files;
            differ += slurp(e.path()) != slurp(fs::path(work) / "det_b" / e.path().filename());
        }
        v10.require(files >= 10 && differ == 0,
                    std::to_string(differ) + " of " + std::to_string(files) + " output files differ between runs");

        const LoadedState back = read_state(work + "/det_a");
        const PhysicalState orig = PhysicalState::from(a.result.state);
        double err = 0.0;
        for (std::size_t p = 0; p < orig.r.size(); ++p) {
            err = std::max({err, std::abs(orig.r[p] - back.state.r[p]), std::abs(orig.u.x[p] - back.state.u.x[p]),
                            std::abs(orig.u.y[p] - back.state.u.y[p]), std::abs(orig.theta[p] - back.state.theta[p])});
            for (std::size_t k = 0; k < orig.Y.size(); ++k)
                err = std::max(err, std::abs(orig.Y[k][p] - back.state.Y[k][p]));
        }
        const double comp = composite_distance(a.result.state, back.state.to_fields(), small.mixture, 4.0);
        v10.require(err <= 1e-12 && comp <= 1e-12,
                    "round trip max error " + fmt(err) + ", composite distance " + fmt(comp));

        std::ostringstream log;
        CommandOptions opt{work + "/det_a/config.cfg", work + "/det_check", 1, seed};
        const int rc = cmd_check(opt, work + "/det_a", log);
        const bool same = rc == 0 && slurp(work + "/det_check/diagnostics.json") == slurp(work + "/det_a/diagnostics.json");
        v10.require(same, "check reproduces diagnostics.json byte for byte");

        const auto s1 = run_sweep(small, SweepAxis::Delta, {0.1, 0.01}, 1);
        const auto s2 = run_sweep(small, SweepAxis::Delta, {0.1, 0.01}, 2);
        write_ledger_csv(work + "/ledger_1.csv", small, SweepAxis::Delta, s1);
        write_ledger_csv(work + "/ledger_2.csv", small, SweepAxis::Delta, s2);
        v10.require(slurp(work + "/ledger_1.csv") == slurp(work + "/ledger_2.csv"),
                    "sweep ledger identical with --jobs 1 and 2");
    } catch (const std::exception& e) {
        v10.require(false, std::string("exception: ") + e.what());
    }
    const double t10 = c10.seconds();

    {
        Verdict v;
        v.require(sigma.bad == 0, std::to_string(sigma.bad) + " of " + std::to_string(sigma.states) +
                                      " converged states below -1e-12 max(1, |sigma|_inf)");
        v.detail += "; worst scaled sigma_min " + fmt(sigma.worst) + "; regularization part reported separately";
        report(5, "entropy production sign on every converged state", v, 0.0);
    }
    {
        Verdict v;
        const RunOutput* fine = msweep[0].status == "ok" ? &msweep[0].run : nullptr;
        if (!fine) {
            v.require(false, "smoke solve failed: " + msweep[0].message);
        } else if (refine.size() != 2) {
            v.require(false, "refinement solve failed: " + refine_error);
        } else {
            const double e = fine->diagnostics.energy.residual, s = fine->diagnostics.entropy.residual;
            v.require(std::abs(e) <= 1e-6, "65^2 energy residual " + fmt(e));
            v.require(std::abs(s) <= 1e-6, "65^2 entropy residual " + fmt(s));
            // Values recorded at the first green build.
            const double e0 = -3.262767616124356e-08, s0 = 5.428871963351413e-07;
            v.require(std::abs(e / e0 - 1) <= 0.01 && std::abs(s / s0 - 1) <= 0.01, "within 1% of baselines");
            const std::vector<double> h{1.0 / 16, 1.0 / 32, 1.0 / 64};
            const std::vector<double> er{refine[0].diagnostics.energy.residual, refine[1].diagnostics.energy.residual, e};
            const std::vector<double> sr{refine[0].diagnostics.entropy.residual, refine[1].diagnostics.entropy.residual,
                                         s};
            const double pe = oracle::slope(h, er), ps = oracle::slope(h, sr);
            v.require(pe >= 0.9, "energy refinement slope " + fmt(pe) + " (" + fmt(er[0]) + ", " + fmt(er[1]) + ", " +
                                     fmt(er[2]) + ")");
            v.require(ps >= 0.9, "entropy refinement slope " + fmt(ps) + " (" + fmt(sr[0]) + ", " + fmt(sr[1]) + ", " +
                                     fmt(sr[2]) + ")");
        }
        report(6, "balance residuals on the smoke problem", v, t6);
    }
    {
        Verdict v;
        std::vector<double> d, l2;
        for (const auto& r : dsweep)
            if (r.status == "ok") {
                d.push_back(r.value);
                l2.push_back(r.run.diagnostics.defect.l2);
            }
        v.require(d.size() == deltas.size(), std::to_string(d.size()) + " of 5 sweep rows converged");
        const double slope = d.size() >= 2 ? oracle::slope(d, l2) : 0.0;
        v.require(slope >= 1.8, "log-log slope of ||sum Y - 1||_2 vs delta = " + fmt(slope));
        if (!l2.empty()) {
            double cmax = 0.0;
            for (double c : dsweep.back().run.diagnostics.compat) cmax = std::max(cmax, std::abs(c));
            v.detail += "; defect at delta = 1e-3: " + fmt(l2.back()) + ", max |int omega_k| " + fmt(cmax);
        }
        v.require(t7 < 600.0, "time " + fmt(t7) + " s < 600 s");
        report(7, "mass-fraction defect scaling", v, t7);
    }
    {
        Verdict v;
        bool ok = true, g_one = true;
        std::vector<double> xim, low;
        for (const auto& r : msweep) {
            ok &= r.status == "ok";
            if (!r.has_state) continue;
            xim.push_back(r.run.diagnostics.xi_over_M);
            for (const auto& e : r.run.diagnostics.ledger)
                if (e.id == "low_order") low.push_back(e.lhs);
            for (const auto& s : r.run.result.report.steps)
                if (s.lambda == 1.0) g_one &= s.g_val == 1.0;
        }
        v.require(ok, "all three constructions converged");
        bool dec = xim.size() == 3;
        for (std::size_t k = 1; k < xim.size(); ++k) dec &= xim[k] < xim[k - 1];
        std::string xs;
        for (double x : xim) xs += (xs.empty() ? "" : ", ") + fmt(x);
        v.require(dec, "Xi/M strictly decreasing (" + xs + ")");
        double var = INFINITY;
        if (!low.empty()) var = *std::max_element(low.begin(), low.end()) / *std::min_element(low.begin(), low.end()) - 1;
        v.require(var <= 0.25, "low-order bound LHS variation " + fmt(var) + " <= 0.25");
        v.require(g_one, "g = 1 at every lambda = 1 state");
        report(8, "high-density regime, M in {1e2, 1e3, 1e4}", v, t8);
    }
    {
        Clock c;
        report(9, "lambda = 0 anchoring", guarded([&] { return anchoring(smoke, seed); }), c.seconds());
    }
    report(10, "determinism and IO", v10, t10);

    std::printf("summary: %d of 10 criteria passed (%.0f s)\n", 10 - failures, total.seconds());
    return failures == 0 ? 0 : 1;
}
