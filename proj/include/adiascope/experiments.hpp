// experiments.hpp — the concrete spin-½ scenarios: Carr–Purcell pulse
// sequences, the three continuous drives, sweeps, and the γ condition.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "adiascope/decomposition.hpp"
#include "adiascope/metrics.hpp"
#include "adiascope/propagator.hpp"
#include "adiascope/spectral.hpp"

namespace adiascope {

struct CpScenario {
    double theta = 0.0;
    double phi0 = 0.0;
    double phiT = 2.0 * 3.14159265358979323846;
    int n_pulses = 1;
    bool two_pi_rotation = false;  // 2π rotations instead of ±π (F ≡ 1 variant)
};

enum class DriveKind { b_pi, b_2pi, b_const };

struct DriveScenario {
    DriveKind kind = DriveKind::b_pi;
    double n_prime = 1.0;  // Ω / 2π
    double theta = 0.0;
    double omega = 2.0 * 3.14159265358979323846;
    double t_total = 1.0;
    double gamma = 0.0;  // 0 → the solved modulation-average root

    double big_omega() const { return 2.0 * 3.14159265358979323846 * n_prime; }
};

const char* drive_kind_name(DriveKind k);
std::optional<DriveKind> parse_drive_kind(const std::string& name);

// A runnable scenario: model + path + frame field (+ pulse sequence).
struct BuiltScenario {
    HamiltonianModel model;
    ParameterPath path;
    FrameField field;
    std::optional<PulseSequence> pulses;
    std::string kind;
    double sweep_var = 0.0;
    double theta = 0.0;
};

// CP positions φ_μ = (φ_T − φ_0)(2μ−1)/(2N) + φ_0 with the alternating sign
// rule g = +1, −1, … so even N cancels the dynamic phase exactly.
PulseSequence build_cp(const CpScenario& s);

// Full runnable scenario for a CP sequence (linear-in-t path through the φ_μ).
BuiltScenario build_cp_scenario(const CpScenario& s);

// (i) B_π = (Ω/2)[1 − γcos(Ωt)], (ii) B_2π = 2B_π,
// (iii) B_const = √((2+γ²)/8)·Ω — equal average energy to B_π.
BuiltScenario build_drive(const DriveScenario& s);

// The solved γ of the modulation-average condition (cached solve at 1e−12).
double gamma_star();

// Root-find objective: Im ∫₀^π e^{i(u−γ sin u)/2} du. Its zero is where the
// modulation average over a full period vanishes.
double gamma_half_period_imbalance(double gamma);

// |⟨e^{i∫B_π}⟩| over a full period (scaled); ~0 at the solved γ.
double modulation_average_magnitude(double gamma);

// Bracketed root on [1, 4]; throws if the bracket carries no sign change.
double solve_gamma(double tol = 1e-12);

struct RunSettings {
    PropagateOptions propagate;
    DecomposeOptions decompose;
    QuadratureSpec quadrature;
    int jobs = 1;
};

struct ScenarioOutcome {
    EvolutionDecomposition decomp;
    AdiabaticityReport report;
};

ScenarioOutcome evaluate_scenario(const BuiltScenario& sc, const RunSettings& settings);

struct SweepRow {
    double sweep_var = 0.0;
    std::string kind;
    double delta_u_err = 0.0;
    double residual = 0.0;
    double n_pulses_or_nprime = 0.0;
    double theta = 0.0;
    std::uint64_t seed = 0;
};

struct SweepResult {
    std::vector<SweepRow> rows;  // sorted by (kind, sweep_var)
};

SweepResult sweep_cp(double theta, double phi0, double phiT, const std::vector<int>& n_values,
                     const RunSettings& settings);

SweepResult sweep_drive(const std::vector<DriveKind>& kinds,
                        const std::vector<double>& nprime_values, double t_total, double omega,
                        double theta, const RunSettings& settings);

}  // namespace adiascope
