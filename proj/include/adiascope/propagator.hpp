// propagator.hpp — exact time-ordered propagators for continuous drives and
// instantaneous pulse sequences, with accumulated dynamic-phase integrals.

#pragma once

#include <string>
#include <vector>

#include "adiascope/complexmat.hpp"
#include "adiascope/spectral.hpp"

namespace adiascope {

struct Pulse {
    double t = 0.0;                // time of application
    std::vector<double> r;         // parameter point R_μ
    std::vector<double> theta;     // phase θ_{n,j}(R_μ) per label, field order
};

struct PulseSequence {
    std::vector<LevelLabel> labels;
    std::vector<Pulse> pulses;     // ordered by time
    std::vector<int> sign;         // spin-½ sign pattern g(μ) ∈ {+1,−1}; empty otherwise
};

struct EvolutionResult {
    UnitaryMatrix u_total = UnitaryMatrix::identity(1);
    std::vector<double> checkpoints;                       // time grid
    std::vector<std::vector<double>> dynamic_phase;        // per checkpoint, per label
    std::vector<double> phase_at_end() const { return dynamic_phase.back(); }
};

struct PropagateOptions {
    int slices_per_period = 256;
    bool verify_convergence = false;  // re-run at 2× slices and compare
    double convergence_tol = 1e-8;
};

// Raised when the step-doubled propagator disagrees beyond tolerance; carries
// both estimates for inspection.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double disagreement, ComplexMatrix coarse,
                     ComplexMatrix fine)
        : std::runtime_error(what),
          disagreement_(disagreement),
          coarse_(std::move(coarse)),
          fine_(std::move(fine)) {}
    double disagreement() const noexcept { return disagreement_; }
    const ComplexMatrix& coarse_estimate() const noexcept { return coarse_; }
    const ComplexMatrix& fine_estimate() const noexcept { return fine_; }
private:
    double disagreement_;
    ComplexMatrix coarse_, fine_;
};

// Midpoint exponential product U(T) = ∏_k exp(−iH(t_k^mid)Δt), right to left;
// unitary at every step, 2nd-order accurate. Dynamic-phase integrals per label
// accumulate by midpoint quadrature of the field energies on the same grid.
EvolutionResult propagate_continuous(const HamiltonianModel& model, const FrameField& field,
                                     const ParameterPath& path,
                                     const PropagateOptions& opts = {});

// U(T) = P(R_N)···P(R_1) with P per the frame at each pulse point; the
// dynamic-phase integral after pulse λ is the per-label prefix sum of θ.
EvolutionResult propagate_pulses(const FrameField& field, const PulseSequence& seq);

struct PhaseConditionReport {
    bool ok = true;
    struct Violation {
        int prefix_len;  // λ
        LevelLabel p, q;
        double phase_sum;  // Σ_{μ≤λ}[θ_p − θ_q], not a 2π multiple
    };
    std::vector<Violation> violations;
};

// Checks Σ_{μ≤λ}[θ_{n,p}(R_μ) − θ_{n,q}(R_μ)] ∈ 2πZ for every prefix λ and
// every same-group pair (p, q). Vacuously true without degenerate groups.
PhaseConditionReport dyn_phase_condition_check(const PulseSequence& seq, double tol = 1e-9);

}  // namespace adiascope
