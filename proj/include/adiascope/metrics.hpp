// metrics.hpp — the state-averaged error deviation ΔU_Err and the bundled
// adiabaticity diagnostics.

#pragma once

#include <cstdint>
#include <vector>

#include "adiascope/complexmat.hpp"
#include "adiascope/decomposition.hpp"

namespace adiascope {

struct QuadratureSpec {
    enum class Method { sphere_grid, haar_mc };
    Method method = Method::sphere_grid;
    int polar_nodes = 64;     // Gauss–Legendre in cos α (grid)
    int azimuth_nodes = 128;  // uniform in β (grid)
    int mc_samples = 100000;  // Haar Monte Carlo (dim > 2 or on request)
    std::uint64_t seed = 0x5EED;

    void validate(int dim) const;
};

struct DeltaUErr {
    double value = 0.0;
    double standard_error = 0.0;  // zero for the deterministic grid
};

// Mean over initial pure states of |⟨Ψ|(U_err − I)|Ψ⟩|. Dim 2 uses the Bloch
// sphere product grid; higher dimensions (or method=haar_mc) use Haar Monte
// Carlo with a counter-based generator, deterministic for a given seed.
DeltaUErr delta_u_err_detailed(const UnitaryMatrix& u_err, const QuadratureSpec& quad);
double delta_u_err(const UnitaryMatrix& u_err, const QuadratureSpec& quad);

// Haar-random pure state k of a deterministic, splittable stream.
CVector haar_state(int dim, std::uint64_t seed, std::uint64_t index);

struct AdiabaticityReport {
    double delta_u_err = 0.0;
    double delta_u_err_stderr = 0.0;
    double err_deviation_frobenius = 0.0;   // ‖U_Err − I‖_F
    double reconstruction_residual = 0.0;
    std::vector<double> geo_eigenphases;    // Berry phases of U_Geo
    std::vector<double> dynamic_phase;      // per-label ∫E at final time
};

AdiabaticityReport adiabaticity_report(const EvolutionDecomposition& decomp,
                                       const QuadratureSpec& quad);

}  // namespace adiascope
