#include "adiascope/metrics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "adiascope/quadrature.hpp"

namespace adiascope {

void QuadratureSpec::validate(int dim) const {
    if (method == Method::sphere_grid && dim == 2) {
        if (polar_nodes < 8 || azimuth_nodes < 16)
            throw std::invalid_argument("QuadratureSpec: grid must be at least 8x16");
    } else {
        if (mc_samples < 1000)
            throw std::invalid_argument("QuadratureSpec: mc_samples must be >= 1000");
    }
}

namespace {

// splitmix64; the (seed, counter) pair indexes an independent uniform draw.
std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

double u01(std::uint64_t seed, std::uint64_t counter) {
    const std::uint64_t z = mix64(mix64(seed) ^ mix64(counter * 0xD1B54A32D192ED03ull + 1));
    return (static_cast<double>(z >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace

CVector haar_state(int dim, std::uint64_t seed, std::uint64_t index) {
    CVector v(dim);
    double norm2 = 0.0;
    for (int k = 0; k < dim; ++k) {
        const std::uint64_t base = index * static_cast<std::uint64_t>(2 * dim);
        const double r1 = u01(seed, base + 2 * k);
        const double r2 = u01(seed, base + 2 * k + 1);
        const double mag = std::sqrt(-2.0 * std::log(r1));
        v[k] = Complex(mag * std::cos(2.0 * std::numbers::pi * r2),
                       mag * std::sin(2.0 * std::numbers::pi * r2));
        norm2 += std::norm(v[k]);
    }
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& z : v) z *= inv;
    return v;
}

DeltaUErr delta_u_err_detailed(const UnitaryMatrix& u_err, const QuadratureSpec& quad) {
    const int n = u_err.dim();
    quad.validate(n);
    const ComplexMatrix m = u_err.m() - ComplexMatrix::identity(n);

    DeltaUErr out;
    if (quad.method == QuadratureSpec::Method::sphere_grid && n == 2) {
        // Bloch sphere: Gauss–Legendre in x = cos α, uniform comb in β
        // (the β integrand is a trigonometric polynomial, so the comb is exact).
        const GaussLegendreRule gl = gauss_legendre(quad.polar_nodes);
        double total = 0.0;
        for (int i = 0; i < quad.polar_nodes; ++i) {
            const double x = gl.nodes[i];
            const double c = std::sqrt(0.5 * (1.0 + x));
            const double s = std::sqrt(0.5 * (1.0 - x));
            double beta_sum = 0.0;
            for (int b = 0; b < quad.azimuth_nodes; ++b) {
                const double beta = 2.0 * std::numbers::pi * b / quad.azimuth_nodes;
                const Complex e(std::cos(beta), std::sin(beta));
                const Complex amp = m(0, 0) * (c * c) + m(1, 1) * (s * s) +
                                    m(0, 1) * e * (c * s) + m(1, 0) * std::conj(e) * (c * s);
                beta_sum += std::abs(amp);
            }
            total += gl.weights[i] * beta_sum / quad.azimuth_nodes;
        }
        out.value = total / 2.0;
        return out;
    }

    double sum = 0.0, sum2 = 0.0;
    for (int k = 0; k < quad.mc_samples; ++k) {
        const CVector psi = haar_state(n, quad.seed, static_cast<std::uint64_t>(k));
        const double val = std::abs(inner(psi, m.apply(psi)));
        sum += val;
        sum2 += val * val;
    }
    const double mean = sum / quad.mc_samples;
    const double var = std::max(0.0, sum2 / quad.mc_samples - mean * mean);
    out.value = mean;
    out.standard_error = std::sqrt(var / quad.mc_samples);
    return out;
}

double delta_u_err(const UnitaryMatrix& u_err, const QuadratureSpec& quad) {
    return delta_u_err_detailed(u_err, quad).value;
}

AdiabaticityReport adiabaticity_report(const EvolutionDecomposition& decomp,
                                       const QuadratureSpec& quad) {
    AdiabaticityReport rep;
    const DeltaUErr d = delta_u_err_detailed(decomp.u_err, quad);
    rep.delta_u_err = d.value;
    rep.delta_u_err_stderr = d.standard_error;
    rep.err_deviation_frobenius =
        distance(decomp.u_err.m(), ComplexMatrix::identity(decomp.u_err.dim()));
    rep.reconstruction_residual = decomp.reconstruction_residual;
    rep.geo_eigenphases = unitary_eigenphases(decomp.u_geo).phases;
    rep.dynamic_phase = decomp.dynamic_phase;
    return rep;
}

}  // namespace adiascope
