// spectral.hpp — parameter paths R(t), Hamiltonian models H(R), and
// gauge-fixed instantaneous spectral frames along a path.

#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "adiascope/complexmat.hpp"

namespace adiascope {

struct LevelLabel {
    int group = 0;  // level group n (may be degenerate)
    int index = 0;  // j within the group
    bool operator==(const LevelLabel&) const = default;
};

// Instantaneous eigensystem at one path point. Column k of `vectors` belongs
// to labels[k]; energies[k] is E_{n,j}(t). The gauge is whatever the producing
// field fixed (analytic half-angle for spin-½, parallel transport otherwise).
struct SpectralFrame {
    double t = 0.0;
    std::vector<LevelLabel> labels;
    std::vector<double> energies;
    ComplexMatrix vectors;

    int dim() const { return vectors.dim(); }
    CVector state(int k) const { return vectors.column(k); }
};

// R(t) with t in [t_start, t_end]. `periods` is a resolution hint: how many
// characteristic oscillations the scenario packs into the interval.
struct ParameterPath {
    double t_start = 0.0;
    double t_end = 1.0;
    std::function<std::vector<double>(double)> r;
    double periods = 1.0;

    double span() const { return t_end - t_start; }
    std::vector<double> at(double t) const { return r(t); }
};

// H(R) plus an optional analytic frame rule. When `frame_at` is set it fixes
// the gauge exactly (used for all spin-½ scenarios); otherwise frames come
// from the numeric eigensolver with parallel-transport smoothing.
struct HamiltonianModel {
    int dim = 0;
    std::function<HermitianMatrix(const std::vector<double>&)> h;
    std::function<SpectralFrame(const std::vector<double>&)> frame_at;
    // Degeneracy threshold rule; eigenvalues closer than this share a group.
    double grouping_tol(double hnorm) const { return 1e-9 * std::max(1.0, hnorm); }
};

// The paper's spin-½ eigenvectors in the half-angle gauge with UNWRAPPED φ:
//   |φ^+⟩ =  cos(θ/2)e^{−iφ/2}|↑⟩ + sin(θ/2)e^{iφ/2}|↓⟩
//   |φ^−⟩ = −sin(θ/2)e^{−iφ/2}|↑⟩ + cos(θ/2)e^{iφ/2}|↓⟩
// Energies are ±amplitude/2 with labels tied to the field direction, so the
// "+" level dips below "−" wherever the amplitude is negative.
SpectralFrame analytic_spin_frame(double theta, double phi, double amplitude = 1.0);

// Spin-½ in a field of fixed polar angle θ: H = (B/2)(σ·n̂(θ,φ)), R = (φ, B).
HamiltonianModel spin_half_field_model(double theta);

// Numeric frame at time t: eigensolve h(r(t)), assign labels by continuity
// against `prev` (field direction, not energy order), and gauge-fix so the
// per-state overlap with prev has non-negative real part. Without prev the
// frame is the anchor: groups ascending in energy, phase fixed so the largest
// component of each column is real positive.
SpectralFrame spectral_frame_at(const HamiltonianModel& model, const ParameterPath& path,
                                double t, const std::optional<SpectralFrame>& prev = {});

// ----------------------------- frame field ----------------------------------

// Smooth-gauge access to frames and accumulated dynamic phases along one path.
// `frame` must be smooth enough in t for central differences; `phase(t)` is
// the per-label ∫₀^t E ds (or the pulse prefix sums for pulse scenarios).
struct FrameField {
    double t0 = 0.0;
    double t1 = 1.0;
    std::vector<LevelLabel> labels;
    std::function<SpectralFrame(double)> frame;
    std::function<std::vector<double>(double)> phase;
    std::vector<double> breakpoints;  // modulation discontinuities (pulse times)
    // Analytic gauges are globally smooth; chain gauges need finite-difference
    // stencils re-aligned against the expansion point.
    bool smooth_gauge = true;

    int dim() const { return frame(t0).dim(); }
};

// Re-gauge `cur` onto the labels and basis convention of `ref` (polar
// alignment per degeneracy cluster). Used for finite-difference stencils on
// chain-gauge fields.
SpectralFrame align_frame(const SpectralFrame& ref, SpectralFrame cur, double cluster_tol);

// Field for a model+path. Analytic models use their own gauge; numeric models
// get a parallel-transported chain of `chain_steps` nodes, with queries
// aligned against the nearest node.
FrameField make_frame_field(const HamiltonianModel& model, const ParameterPath& path,
                            int chain_steps = 2048);

}  // namespace adiascope
