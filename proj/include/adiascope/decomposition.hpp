// decomposition.hpp — factorizes U(T) into U_Dyn·U_Geo·U_Err and evaluates
// each factor from its defining formula, including the path-ordered error
// evolution driven by modulation functions.

#pragma once

#include <optional>
#include <vector>

#include "adiascope/complexmat.hpp"
#include "adiascope/propagator.hpp"
#include "adiascope/spectral.hpp"

namespace adiascope {

struct EvolutionDecomposition {
    UnitaryMatrix u_total = UnitaryMatrix::identity(1);
    UnitaryMatrix u_dyn = UnitaryMatrix::identity(1);
    UnitaryMatrix u_g1 = UnitaryMatrix::identity(1);
    UnitaryMatrix u_g2 = UnitaryMatrix::identity(1);
    UnitaryMatrix u_geo = UnitaryMatrix::identity(1);
    UnitaryMatrix u_err = UnitaryMatrix::identity(1);
    double reconstruction_residual = 0.0;
    std::vector<double> dynamic_phase = {};  // per label at final time
};

struct DecomposeOptions {
    int path_steps = 4096;       // path-ordered product resolution
    double residual_tol = 1e-8;  // invariant bound on the reconstruction
};

// Σ_{n,j} e^{−iΦ_{n,j}} |n_j^t⟩⟨n_j^t| from a frame and accumulated phases.
UnitaryMatrix u_dyn(const SpectralFrame& frame_t, const std::vector<double>& phase_integrals);

// Σ_{n,j} |n_j^t⟩⟨n_j^0|; label sets must match.
UnitaryMatrix u_g1(const SpectralFrame& frame_0, const SpectralFrame& frame_t);

// Path-ordered exponential of the same-group connection in the anchor basis
// (midpoint product, central differences for the frame derivative).
UnitaryMatrix u_g2(const FrameField& field, int steps = 4096);

// u_g1 · u_g2 over the full path.
UnitaryMatrix u_geo(const FrameField& field, int steps = 4096);

// U_Geo†·U_Dyn†·U_total — the reference extraction used everywhere.
UnitaryMatrix u_err_extracted(const UnitaryMatrix& u_total, const UnitaryMatrix& u_dyn,
                              const UnitaryMatrix& u_geo);

// Path-ordered exponential of i·Σ_{n≠m} F^{p,q}_{n,m} H^{p,q}_{n,m} dR with
// the transition operators built from the frame derivative and the running
// U_G2. The step grid is refined to include every modulation breakpoint.
UnitaryMatrix u_err_direct(const FrameField& field, int steps = 8192);

struct ModulationSample {
    double t;
    LevelLabel p, q;   // F for the (p, q) pair, group(p) != group(q)
    Complex f;
};

struct ModulationTrace {
    std::vector<ModulationSample> samples;
};

// Samples of every cross-group modulation function along the path; pulse
// scenarios sample each inter-pulse interval, drives sample uniformly.
ModulationTrace modulation_trace(const FrameField& field, int samples_per_interval = 64);

// The block-diagonal generator H_G2(t) and the off-diagonal generator
// H_Err(t) of the transformed-frame Schrödinger equation. Their sum equals
// the full transformed generator S†(H − iṠS†)S (verification identity).
HermitianMatrix h_g2_operator(const FrameField& field, double t, double fd_step);
HermitianMatrix h_err_operator(const FrameField& field, double t, double fd_step);

// The full transformed generator via finite differences of S = U_Dyn·U_G1;
// test oracle for h_g2_operator + h_err_operator.
HermitianMatrix transformed_generator(const HamiltonianModel& model, const FrameField& field,
                                      const ParameterPath& path, double t, double fd_step);

// Full pipeline: factors from their defining formulas, error by extraction.
EvolutionDecomposition decompose(const FrameField& field, const EvolutionResult& evo,
                                 const DecomposeOptions& opts = {});

}  // namespace adiascope
