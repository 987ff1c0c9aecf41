// acceptance — runs every acceptance criterion at its stated tolerance and
// prints one PASS/FAIL line per criterion (details indented below each line).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "adiascope/cli.hpp"
#include "adiascope/decomposition.hpp"
#include "adiascope/experiments.hpp"
#include "adiascope/metrics.hpp"

using namespace adiascope;

namespace {

constexpr double kPi = std::numbers::pi;

struct Criterion {
    int id;
    std::string title;
    bool pass = true;
    std::vector<std::string> notes;

    void require(bool ok, const std::string& what) {
        if (!ok) pass = false;
        notes.push_back(std::string(ok ? "  ok   " : "  FAIL ") + what);
    }
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

double wrap_pi(double x) {
    while (x > kPi) x -= 2.0 * kPi;
    while (x <= -kPi) x += 2.0 * kPi;
    return x;
}

RunSettings settings_with(int slices, int path_steps) {
    RunSettings s;
    s.propagate.slices_per_period = slices;
    s.decompose.path_steps = path_steps;
    return s;
}

ScenarioOutcome run_cp(double theta, int n, const RunSettings& s) {
    CpScenario c;
    c.theta = theta;
    c.n_pulses = n;
    return evaluate_scenario(build_cp_scenario(c), s);
}

ScenarioOutcome run_drive(DriveKind kind, double nprime, double theta, const RunSettings& s) {
    DriveScenario d;
    d.kind = kind;
    d.n_prime = nprime;
    d.theta = theta;
    return evaluate_scenario(build_drive(d), s);
}

// ---------------------------------------------------------------------------

Criterion criterion_reconstruction() {
    Criterion c{1, "Reconstruction identity over the scenario matrix (<= 1e-8)"};
    const RunSettings s = settings_with(256, 2048);
    double worst = 0.0;
    for (double theta : {kPi / 6, kPi / 3, kPi / 2})
        for (int n : {1, 2, 4, 8, 16, 32}) {
            const ScenarioOutcome out = run_cp(theta, n, s);
            worst = std::max(worst, out.decomp.reconstruction_residual);
        }
    for (DriveKind kind : {DriveKind::b_pi, DriveKind::b_2pi, DriveKind::b_const})
        for (double np : {2.0, 4.0, 8.0}) {
            const ScenarioOutcome out = run_drive(kind, np, kPi / 2, s);
            worst = std::max(worst, out.decomp.reconstruction_residual);
        }
    c.require(worst <= 1e-8, "worst residual " + fmt(worst) + " over 18 CP + 9 drive scenarios");
    return c;
}

Criterion criterion_exact_cancellation() {
    Criterion c{2, "CP at theta=pi/2: delta_u_err <= 1e-10 for N = 1..64"};
    const RunSettings s = settings_with(256, 2048);
    double worst = 0.0;
    int worst_n = 1;
    for (int n = 1; n <= 64; ++n) {
        const double v = run_cp(kPi / 2, n, s).report.delta_u_err;
        if (v > worst) {
            worst = v;
            worst_n = n;
        }
    }
    c.require(worst <= 1e-10, "max delta_u_err " + fmt(worst) + " at N=" + std::to_string(worst_n));
    return c;
}

Criterion criterion_berry_phase() {
    Criterion c{3, "Berry phase of U_Geo for the full circle (1e-8, with oracle)"};
    for (double theta : {kPi / 6, kPi / 4, kPi / 3}) {
        BuiltScenario sc;
        sc.model = spin_half_field_model(theta);
        sc.path.t_start = 0.0;
        sc.path.t_end = 1.0;
        sc.path.r = [](double t) { return std::vector<double>{2.0 * kPi * t, 1.0}; };
        sc.field = make_frame_field(sc.model, sc.path);
        const UnitaryMatrix geo = u_geo(sc.field, 8192);
        std::vector<double> phases = unitary_eigenphases(geo).phases;

        // closed form: ±(pi·cos θ) plus the half-angle-gauge sign (a π offset)
        std::vector<double> expected = {wrap_pi(kPi + kPi * std::cos(theta)),
                                        wrap_pi(kPi - kPi * std::cos(theta))};
        std::sort(expected.begin(), expected.end());

        // 4096-step connection-integral oracle: midpoint quadrature of the
        // Berry connection i⟨v|∂_φ v⟩ from small central differences of the
        // analytic frames, independent of the path-ordered machinery.
        double oracle[2] = {0.0, 0.0};
        const int steps = 4096;
        const double dphi = 2.0 * kPi / steps;
        const double h = dphi / 64.0;
        for (int l = 0; l < 2; ++l) {
            for (int k = 0; k < steps; ++k) {
                const double phi = (k + 0.5) * dphi;
                const SpectralFrame mid = analytic_spin_frame(theta, phi);
                const SpectralFrame fp = analytic_spin_frame(theta, phi + h);
                const SpectralFrame fm = analytic_spin_frame(theta, phi - h);
                CVector diff(2);
                for (int i = 0; i < 2; ++i)
                    diff[i] = (fp.vectors(i, l) - fm.vectors(i, l)) / (2.0 * h);
                oracle[l] += (Complex(0.0, 1.0) * inner(mid.state(l), diff)).real() * dphi;
            }
        }
        std::vector<double> from_oracle = {wrap_pi(kPi + oracle[0]), wrap_pi(kPi + oracle[1])};
        std::sort(from_oracle.begin(), from_oracle.end());

        const double dev_closed = std::max(std::abs(phases[0] - expected[0]),
                                           std::abs(phases[1] - expected[1]));
        const double dev_oracle = std::max(std::abs(phases[0] - from_oracle[0]),
                                           std::abs(phases[1] - from_oracle[1]));
        c.require(dev_closed <= 1e-8,
                  "theta=" + fmt(theta) + ": |phase - closed form| = " + fmt(dev_closed));
        c.require(dev_oracle <= 1e-8,
                  "theta=" + fmt(theta) + ": |phase - oracle| = " + fmt(dev_oracle));
    }
    return c;
}

Criterion criterion_gamma() {
    Criterion c{4, "gamma root: 2.34213 +/- 1e-4 with vanishing modulation average"};
    const double g = solve_gamma(1e-12);
    c.require(std::abs(g - 2.34213) <= 1e-4, "gamma = " + fmt(g));
    const double avg = modulation_average_magnitude(g);
    c.require(avg < 1e-9, "|<e^{i int B_pi}>| over a period = " + fmt(avg));
    return c;
}

Criterion criterion_fig3() {
    Criterion c{5, "Fig. 3 trends at theta=pi/6 (even-N suppression)"};
    const RunSettings s = settings_with(256, 2048);
    std::map<int, double> v;
    const std::vector<int> evens = {2, 4, 8, 16, 32, 64};
    for (int n : evens) v[n] = run_cp(kPi / 6, n, s).report.delta_u_err;
    for (int n : {1, 3, 5, 7, 9, 15, 17, 31, 33, 63, 65})
        v[n] = run_cp(kPi / 6, n, s).report.delta_u_err;

    bool decreasing = true;
    for (size_t i = 1; i < evens.size(); ++i)
        if (v[evens[i]] >= v[evens[i - 1]]) decreasing = false;
    c.require(decreasing, "strictly decreasing along even N in {2,...,64}");

    for (int n : evens) {
        const bool below = v[n] < v[n - 1] && v[n] < v[n + 1];
        c.require(below, "N=" + std::to_string(n) + " (" + fmt(v[n]) + ") below odd neighbours " +
                             fmt(v[n - 1]) + " / " + fmt(v[n + 1]));
    }
    c.require(v[64] < v[2] / 10.0,
              "delta(64)=" + fmt(v[64]) + " < delta(2)/10=" + fmt(v[2] / 10.0));
    return c;
}

Criterion criterion_fig4() {
    Criterion c{6, "Fig. 4 trends at theta=pi/2, T=1, omega=2pi"};
    const RunSettings s = settings_with(1024, 1024);

    // (a) b_pi at even integer N' beats b_const at the same N' by >= 2x
    for (double np : {2.0, 4.0, 6.0, 8.0}) {
        const double fast = run_drive(DriveKind::b_pi, np, kPi / 2, s).report.delta_u_err;
        const double slow = run_drive(DriveKind::b_const, np, kPi / 2, s).report.delta_u_err;
        c.require(slow >= 2.0 * fast, "(a) N'=" + fmt(np) + ": b_const/b_pi = " +
                                          fmt(slow / fast) + " (b_pi " + fmt(fast) +
                                          ", b_const " + fmt(slow) + ")");
    }
    // (b) b_2pi never decays: its minimum stays 10x above the b_pi minimum
    double min2pi = 1e300, minpi = 1e300;
    for (int np = 1; np <= 10; ++np) {
        min2pi = std::min(min2pi,
                          run_drive(DriveKind::b_2pi, np, kPi / 2, s).report.delta_u_err);
        minpi = std::min(minpi, run_drive(DriveKind::b_pi, np, kPi / 2, s).report.delta_u_err);
    }
    c.require(min2pi > 10.0 * minpi, "(b) min b_2pi " + fmt(min2pi) + " vs 10 x min b_pi " +
                                         fmt(10.0 * minpi));
    // (c) b_const decays monotonically in the conventional adiabatic limit
    double prev = 1e300;
    bool mono = true;
    std::string seq;
    for (double np : {5.0, 10.0, 20.0, 40.0}) {
        const double val = run_drive(DriveKind::b_const, np, kPi / 2, s).report.delta_u_err;
        seq += fmt(val) + " ";
        if (val >= prev) mono = false;
        prev = val;
    }
    c.require(mono, "(c) b_const at N'={5,10,20,40}: " + seq);
    return c;
}

Criterion criterion_cross_validation() {
    Criterion c{7, "u_err_direct matches the extraction to 1e-6"};
    {
        CpScenario s;
        s.theta = kPi / 6;
        s.n_pulses = 4;
        const BuiltScenario sc = build_cp_scenario(s);
        const EvolutionResult evo = propagate_pulses(sc.field, *sc.pulses);
        const EvolutionDecomposition d = decompose(sc.field, evo, {4096, 1e-8});
        const double dev = distance(u_err_direct(sc.field, 4096).m(), d.u_err.m());
        c.require(dev <= 1e-6, "CP theta=pi/6 N=4: " + fmt(dev));
    }
    {
        DriveScenario s;
        s.kind = DriveKind::b_const;
        s.n_prime = 4.0;
        s.theta = kPi / 2;
        const BuiltScenario sc = build_drive(s);
        PropagateOptions opts;
        opts.slices_per_period = 16384;
        const EvolutionResult evo = propagate_continuous(sc.model, sc.field, sc.path, opts);
        const EvolutionDecomposition d = decompose(sc.field, evo, {4096, 1e-8});
        const double dev = distance(u_err_direct(sc.field).m(), d.u_err.m());
        c.require(dev <= 1e-6, "b_const N'=4: " + fmt(dev));
    }
    return c;
}

Criterion criterion_modulation() {
    Criterion c{8, "Modulation traces: CP square wave and the 2pi-pulse constant"};
    {
        CpScenario s;
        s.theta = kPi / 6;
        s.n_pulses = 6;
        const BuiltScenario sc = build_cp_scenario(s);
        const ModulationTrace tr = modulation_trace(sc.field, 16);
        bool pm_one = true, toggles = true, start_one = true;
        double expected = 1.0;
        size_t idx = 0;
        if (tr.samples.empty() || std::abs(tr.samples[0].f - Complex(1.0, 0.0)) > 1e-12)
            start_one = false;
        ++idx;  // skip the t0 sample
        for (int interval = 0; interval <= 6; ++interval) {
            for (int i = 0; i < 16 && idx < tr.samples.size(); ++i, ++idx) {
                const Complex f = tr.samples[idx].f;
                if (std::abs(f.imag()) > 1e-12 || std::abs(std::abs(f.real()) - 1.0) > 1e-12)
                    pm_one = false;
                if (std::abs(f - Complex(expected, 0.0)) > 1e-12) toggles = false;
            }
            expected = -expected;
        }
        c.require(start_one, "F(start) = 1");
        c.require(pm_one, "CP trace is exactly +/-1 valued");
        c.require(toggles, "CP trace toggles at each pulse");
    }
    {
        CpScenario s;
        s.theta = kPi / 6;
        s.n_pulses = 6;
        s.two_pi_rotation = true;
        const BuiltScenario sc = build_cp_scenario(s);
        bool constant_one = true;
        for (const ModulationSample& m : modulation_trace(sc.field, 16).samples)
            if (std::abs(m.f - Complex(1.0, 0.0)) > 1e-12) constant_one = false;
        c.require(constant_one, "2pi-rotation variant has F = 1 everywhere");
    }
    return c;
}

Criterion criterion_metric_oracle() {
    Criterion c{9, "delta_u_err grid vs 1e6-sample MC oracle (3 significant digits)"};
    std::uint64_t state = 0xACCE55ull;
    auto next_u = [&state] {
        state += 0x9E3779B97F4A7C15ull;
        std::uint64_t x = state;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
        return static_cast<double>((x ^ (x >> 31)) >> 11) * 0x1.0p-53;
    };
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        ComplexMatrix h(2);
        h(0, 0) = 2.0 * next_u() - 1.0;
        h(1, 1) = 2.0 * next_u() - 1.0;
        h(0, 1) = Complex(2.0 * next_u() - 1.0, 2.0 * next_u() - 1.0);
        h(1, 0) = std::conj(h(0, 1));
        const UnitaryMatrix u = expm_skew(HermitianMatrix{h}, 1.0 + next_u());

        QuadratureSpec grid;
        QuadratureSpec mc;
        mc.method = QuadratureSpec::Method::haar_mc;
        mc.mc_samples = 1000000;
        mc.seed = 0x5EED + trial;
        const double g = delta_u_err(u, grid);
        const double ref = delta_u_err(u, mc);
        worst = std::max(worst, std::abs(g - ref) / ref);
    }
    c.require(worst < 1e-3, "worst relative deviation over 10 unitaries: " + fmt(worst));
    return c;
}

Criterion criterion_determinism() {
    Criterion c{10, "Fixed seed implies byte-identical sweep CSVs"};
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "adiascope_acceptance";
    fs::create_directories(dir);
    const std::string cfg_path = (dir / "sweep.json").string();
    {
        std::ofstream cfg(cfg_path);
        cfg << R"({"scenario": {"type": "cp", "theta": 0.5235987755982988},
                   "sweep": {"n_min": 1, "n_max": 6},
                   "integrator": {"slices_per_period": 256, "path_steps": 512},
                   "quadrature": {"seed": 24301}})";
    }
    auto run_once = [&](const std::string& name) {
        cli::CommonFlags flags;
        flags.out = (dir / name).string();
        flags.jobs = 2;
        if (cli::cmd_sweep_cp(cfg_path, flags) != cli::kExitOk) return std::string();
        std::ifstream in(*flags.out, std::ios::binary);
        std::ostringstream os;
        os << in.rdbuf();
        return os.str();
    };
    const std::string a = run_once("a.csv");
    const std::string b = run_once("b.csv");
    c.require(!a.empty() && a == b, "two runs of sweep-cp (jobs=2) produced identical bytes");
    fs::remove_all(dir);
    return c;
}

}  // namespace

int main() {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<Criterion> results;
    results.push_back(criterion_reconstruction());
    results.push_back(criterion_exact_cancellation());
    results.push_back(criterion_berry_phase());
    results.push_back(criterion_gamma());
    results.push_back(criterion_fig3());
    results.push_back(criterion_fig4());
    results.push_back(criterion_cross_validation());
    results.push_back(criterion_modulation());
    results.push_back(criterion_metric_oracle());
    results.push_back(criterion_determinism());

    int failures = 0;
    for (const Criterion& c : results) {
        std::printf("[%s] criterion %d: %s\n", c.pass ? "PASS" : "FAIL", c.id, c.title.c_str());
        for (const std::string& n : c.notes) std::printf("%s\n", n.c_str());
        if (!c.pass) ++failures;
    }
    const auto dt =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0);
    std::printf("%d/%zu criteria passed in %.1f s\n", static_cast<int>(results.size()) - failures,
                results.size(), dt.count() / 1000.0);
    return failures == 0 ? 0 : 1;
}
