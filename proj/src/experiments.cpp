#include "adiascope/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "adiascope/parallel.hpp"
#include "adiascope/quadrature.hpp"

namespace adiascope {

namespace {
constexpr double kPi = std::numbers::pi;
}

const char* drive_kind_name(DriveKind k) {
    switch (k) {
        case DriveKind::b_pi: return "b_pi";
        case DriveKind::b_2pi: return "b_2pi";
        case DriveKind::b_const: return "b_const";
    }
    return "?";
}

std::optional<DriveKind> parse_drive_kind(const std::string& name) {
    if (name == "b_pi") return DriveKind::b_pi;
    if (name == "b_2pi") return DriveKind::b_2pi;
    if (name == "b_const") return DriveKind::b_const;
    return std::nullopt;
}

PulseSequence build_cp(const CpScenario& s) {
    if (s.n_pulses < 1) throw std::invalid_argument("build_cp: need at least one pulse");
    PulseSequence seq;
    seq.labels = {{0, 0}, {1, 0}};
    const double half = s.two_pi_rotation ? kPi : kPi / 2.0;
    for (int mu = 1; mu <= s.n_pulses; ++mu) {
        const double frac = (2.0 * mu - 1.0) / (2.0 * s.n_pulses);
        const double phi = (s.phiT - s.phi0) * frac + s.phi0;
        const int g = (mu % 2 == 1) ? +1 : -1;  // alternation from +1
        Pulse p;
        p.t = frac;  // path runs on t ∈ [0, 1]
        p.r = {phi, 0.0};
        p.theta = {g * half, -g * half};  // P = Σ± e^{∓i g·half}|φ_μ^±⟩⟨φ_μ^±|
        seq.pulses.push_back(std::move(p));
        seq.sign.push_back(g);
    }
    return seq;
}

BuiltScenario build_cp_scenario(const CpScenario& s) {
    BuiltScenario sc;
    sc.kind = "cp";
    sc.sweep_var = s.n_pulses;
    sc.theta = s.theta;
    sc.model = spin_half_field_model(s.theta);
    const double phi0 = s.phi0, phiT = s.phiT;
    sc.path.t_start = 0.0;
    sc.path.t_end = 1.0;
    sc.path.periods = 1.0;
    sc.path.r = [phi0, phiT](double t) {
        return std::vector<double>{phi0 + (phiT - phi0) * t, 0.0};  // H = 0 between pulses
    };
    sc.pulses = build_cp(s);

    sc.field = make_frame_field(sc.model, sc.path);
    // Dynamic phases jump at the pulses and are flat in between.
    std::vector<double> times;
    std::vector<std::vector<double>> thetas;
    for (const Pulse& p : sc.pulses->pulses) {
        times.push_back(p.t);
        thetas.push_back(p.theta);
        sc.field.breakpoints.push_back(p.t);
    }
    const size_t nlab = sc.field.labels.size();
    sc.field.phase = [times, thetas, nlab](double t) {
        std::vector<double> acc(nlab, 0.0);
        for (size_t m = 0; m < times.size(); ++m) {
            if (times[m] > t) break;
            for (size_t l = 0; l < nlab; ++l) acc[l] += thetas[m][l];
        }
        return acc;
    };
    return sc;
}

BuiltScenario build_drive(const DriveScenario& s) {
    if (s.n_prime <= 0.0) throw std::invalid_argument("build_drive: n_prime must be positive");
    BuiltScenario sc;
    sc.kind = drive_kind_name(s.kind);
    sc.sweep_var = s.n_prime;
    sc.theta = s.theta;
    sc.model = spin_half_field_model(s.theta);

    const double om = s.big_omega();
    const double gamma = s.gamma > 0.0 ? s.gamma : gamma_star();
    const double w = s.omega;
    const DriveKind kind = s.kind;
    const double bconst = std::sqrt((2.0 + gamma * gamma) / 8.0) * om;

    auto amplitude = [kind, om, gamma, bconst](double t) {
        switch (kind) {
            case DriveKind::b_pi: return 0.5 * om * (1.0 - gamma * std::cos(om * t));
            case DriveKind::b_2pi: return om * (1.0 - gamma * std::cos(om * t));
            case DriveKind::b_const: return bconst;
        }
        return 0.0;
    };
    auto amplitude_integral = [kind, om, gamma, bconst](double t) {
        switch (kind) {
            case DriveKind::b_pi: return 0.5 * (om * t - gamma * std::sin(om * t));
            case DriveKind::b_2pi: return om * t - gamma * std::sin(om * t);
            case DriveKind::b_const: return bconst * t;
        }
        return 0.0;
    };

    sc.path.t_start = 0.0;
    sc.path.t_end = s.t_total;
    sc.path.periods = std::max(1.0, s.n_prime * s.t_total);
    sc.path.r = [w, amplitude](double t) {
        return std::vector<double>{w * t, amplitude(t)};
    };

    sc.field = make_frame_field(sc.model, sc.path);
    sc.field.phase = [amplitude_integral](double t) {
        const double phi = amplitude_integral(t);  // ∫₀^t B; E_± = ±B/2
        return std::vector<double>{0.5 * phi, -0.5 * phi};
    };
    return sc;
}

double gamma_half_period_imbalance(double gamma) {
    const QuadResult q = integrate_adaptive(
        [gamma](double u) { return std::sin(0.5 * (u - gamma * std::sin(u))); }, 0.0, kPi,
        1e-11);
    return q.value;
}

double modulation_average_magnitude(double gamma) {
    const QuadResult re = integrate_adaptive(
        [gamma](double u) { return std::cos(0.5 * (u - gamma * std::sin(u))); }, 0.0, 2.0 * kPi,
        1e-11);
    const QuadResult im = integrate_adaptive(
        [gamma](double u) { return std::sin(0.5 * (u - gamma * std::sin(u))); }, 0.0, 2.0 * kPi,
        1e-11);
    return std::hypot(re.value, im.value) / (2.0 * kPi);
}

double solve_gamma(double tol) {
    if (tol < 1e-12) throw std::invalid_argument("solve_gamma: tol must be >= 1e-12");
    return find_root_brent(gamma_half_period_imbalance, 1.0, 4.0, tol);
}

double gamma_star() {
    static const double g = solve_gamma(1e-12);
    return g;
}

ScenarioOutcome evaluate_scenario(const BuiltScenario& sc, const RunSettings& settings) {
    EvolutionResult evo =
        sc.pulses ? propagate_pulses(sc.field, *sc.pulses)
                  : propagate_continuous(sc.model, sc.field, sc.path, settings.propagate);
    ScenarioOutcome out{decompose(sc.field, evo, settings.decompose), {}};
    out.report = adiabaticity_report(out.decomp, settings.quadrature);
    return out;
}

SweepResult sweep_cp(double theta, double phi0, double phiT, const std::vector<int>& n_values,
                     const RunSettings& settings) {
    if (n_values.empty()) throw std::invalid_argument("sweep_cp: empty pulse-count range");
    SweepResult result;
    result.rows.resize(n_values.size());
    parallel_for(static_cast<int>(n_values.size()), settings.jobs, [&](int i) {
        CpScenario s;
        s.theta = theta;
        s.phi0 = phi0;
        s.phiT = phiT;
        s.n_pulses = n_values[static_cast<size_t>(i)];
        const BuiltScenario sc = build_cp_scenario(s);
        const ScenarioOutcome out = evaluate_scenario(sc, settings);
        result.rows[static_cast<size_t>(i)] =
            SweepRow{static_cast<double>(s.n_pulses), "cp",        out.report.delta_u_err,
                     out.decomp.reconstruction_residual, static_cast<double>(s.n_pulses),
                     theta,                            settings.quadrature.seed};
    });
    std::stable_sort(result.rows.begin(), result.rows.end(),
                     [](const SweepRow& a, const SweepRow& b) { return a.sweep_var < b.sweep_var; });
    return result;
}

SweepResult sweep_drive(const std::vector<DriveKind>& kinds,
                        const std::vector<double>& nprime_values, double t_total, double omega,
                        double theta, const RunSettings& settings) {
    if (kinds.empty() || nprime_values.empty())
        throw std::invalid_argument("sweep_drive: empty sweep range");
    if (t_total <= 0.0) throw std::invalid_argument("sweep_drive: t_total must be positive");
    std::vector<DriveScenario> jobs;
    for (DriveKind k : kinds)
        for (double np : nprime_values) {
            DriveScenario s;
            s.kind = k;
            s.n_prime = np;
            s.theta = theta;
            s.omega = omega;
            s.t_total = t_total;
            jobs.push_back(s);
        }
    SweepResult result;
    result.rows.resize(jobs.size());
    parallel_for(static_cast<int>(jobs.size()), settings.jobs, [&](int i) {
        const BuiltScenario sc = build_drive(jobs[static_cast<size_t>(i)]);
        const ScenarioOutcome out = evaluate_scenario(sc, settings);
        result.rows[static_cast<size_t>(i)] =
            SweepRow{jobs[static_cast<size_t>(i)].n_prime,
                     drive_kind_name(jobs[static_cast<size_t>(i)].kind),
                     out.report.delta_u_err,
                     out.decomp.reconstruction_residual,
                     jobs[static_cast<size_t>(i)].n_prime,
                     theta,
                     settings.quadrature.seed};
    });
    std::stable_sort(result.rows.begin(), result.rows.end(), [](const SweepRow& a, const SweepRow& b) {
        return a.kind != b.kind ? a.kind < b.kind : a.sweep_var < b.sweep_var;
    });
    return result;
}

}  // namespace adiascope
