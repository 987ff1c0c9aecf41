#include <doctest.h>

#include <cmath>
#include <numbers>

#include "adiascope/spectral.hpp"
#include "test_support.hpp"

using namespace adiascope;

namespace {
constexpr double kPi = std::numbers::pi;

// |⟨a|b⟩| = 1 iff equal up to a global phase.
double phase_overlap(const CVector& a, const CVector& b) { return std::abs(inner(a, b)); }
}  // namespace

TEST_CASE("analytic_spin_frame at the equator") {
    const SpectralFrame f = analytic_spin_frame(kPi / 2, 0.0);
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(f.vectors(0, 0) - r) < 1e-15);
    CHECK(std::abs(f.vectors(1, 0) - r) < 1e-15);
    CHECK(std::abs(f.vectors(0, 1) + r) < 1e-15);
    CHECK(std::abs(f.vectors(1, 1) - r) < 1e-15);
    CHECK(f.energies[0] == doctest::Approx(0.5));
    CHECK(f.energies[1] == doctest::Approx(-0.5));
}

TEST_CASE("analytic_spin_frame matches the half-angle formula at phi=pi") {
    const double theta = kPi / 6;
    const SpectralFrame f = analytic_spin_frame(theta, kPi);
    const Complex em = std::exp(Complex(0.0, -kPi / 2));
    const Complex ep = std::exp(Complex(0.0, kPi / 2));
    CHECK(std::abs(f.vectors(0, 0) - std::cos(theta / 2) * em) < 1e-15);
    CHECK(std::abs(f.vectors(1, 0) - std::sin(theta / 2) * ep) < 1e-15);
}

TEST_CASE("half-angle gauge is 4pi periodic") {
    const double theta = 0.9;
    const SpectralFrame f0 = analytic_spin_frame(theta, 0.0);
    const SpectralFrame f2pi = analytic_spin_frame(theta, 2.0 * kPi);
    const SpectralFrame f4pi = analytic_spin_frame(theta, 4.0 * kPi);
    // 2π: overall sign flip; 4π: back to itself.
    CHECK(distance(f2pi.vectors, f0.vectors * Complex(-1.0, 0.0)) < 1e-12);
    CHECK(distance(f4pi.vectors, f0.vectors) < 1e-12);
}

TEST_CASE("spin frame example from the pulse-sequence section") {
    // θ=π/6, B=1, φ=0: E = ±1/2, |φ^+⟩ = cos(π/12)|↑⟩ + sin(π/12)|↓⟩
    const SpectralFrame f = analytic_spin_frame(kPi / 6, 0.0, 1.0);
    CHECK(f.energies[0] == doctest::Approx(0.5));
    CHECK(f.energies[1] == doctest::Approx(-0.5));
    CHECK(std::abs(f.vectors(0, 0) - std::cos(kPi / 12)) < 1e-15);
    CHECK(std::abs(f.vectors(1, 0) - std::sin(kPi / 12)) < 1e-15);
}

TEST_CASE("spectral_frame_at uses the analytic gauge for spin models") {
    const HamiltonianModel model = spin_half_field_model(kPi / 6);
    ParameterPath path;
    path.t_start = 0.0;
    path.t_end = 1.0;
    path.r = [](double t) { return std::vector<double>{t * kPi, 1.0}; };
    const SpectralFrame f = spectral_frame_at(model, path, 0.0);
    CHECK(std::abs(f.vectors(0, 0) - std::cos(kPi / 12)) < 1e-15);
    // Eigen-residual: H|v⟩ = E|v⟩
    const HermitianMatrix h = model.h(path.at(0.0));
    for (int k = 0; k < 2; ++k) {
        const CVector v = f.state(k);
        const CVector hv = h.m().apply(v);
        double res = 0.0;
        for (int i = 0; i < 2; ++i) res += std::norm(hv[i] - f.energies[k] * v[i]);
        CHECK(std::sqrt(res) < 1e-12);
    }
}

TEST_CASE("zero Hamiltonian yields the anchor basis") {
    HamiltonianModel model;
    model.dim = 3;
    model.h = [](const std::vector<double>&) { return HermitianMatrix{ComplexMatrix::zero(3)}; };
    ParameterPath path;
    path.r = [](double) { return std::vector<double>{0.0}; };
    const SpectralFrame f = spectral_frame_at(model, path, 0.5);
    for (double e : f.energies) CHECK(e == 0.0);
    CHECK(distance(f.vectors, ComplexMatrix::identity(3)) < 1e-14);
    // total degeneracy: a single group
    for (int k = 0; k < 3; ++k) CHECK(f.labels[k].group == 0);
}

namespace {

// Spin-½ field model without the analytic gauge, to exercise the numeric path.
HamiltonianModel numeric_spin_model(double theta) {
    HamiltonianModel m = spin_half_field_model(theta);
    m.frame_at = nullptr;
    return m;
}

}  // namespace

TEST_CASE("numeric frames agree with the analytic gauge up to per-level phase") {
    const double theta = 1.1;
    HamiltonianModel model = numeric_spin_model(theta);
    ParameterPath path;
    path.t_start = 0.0;
    path.t_end = 1.0;
    path.r = [](double t) { return std::vector<double>{0.8 * t, 2.0}; };  // B = 2 > 0
    std::optional<SpectralFrame> prev;
    for (int k = 0; k <= 32; ++k) {
        const double t = k / 32.0;
        const SpectralFrame num = spectral_frame_at(model, path, t, prev);
        prev = num;
        const SpectralFrame ana = analytic_spin_frame(theta, 0.8 * t, 2.0);
        // anchor ordering is ascending in energy: numeric column 0 is "−"
        CHECK(phase_overlap(num.state(0), ana.state(1)) == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(phase_overlap(num.state(1), ana.state(0)) == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(num.energies[0] == doctest::Approx(-1.0));
        CHECK(num.energies[1] == doctest::Approx(1.0));
    }
}

TEST_CASE("labels follow the field direction through a zero crossing") {
    // B(t) = t crosses zero; the field-aligned state keeps its label while its
    // energy changes sign, so tracked energies leave ascending order.
    const double theta = kPi / 3, phi = 0.3;
    HamiltonianModel model = numeric_spin_model(theta);
    ParameterPath path;
    path.t_start = -0.5;
    path.t_end = 0.5;
    path.r = [phi](double t) { return std::vector<double>{phi, t}; };

    std::optional<SpectralFrame> prev;
    SpectralFrame last;
    for (int k = 0; k <= 100; ++k) {
        last = spectral_frame_at(model, path, -0.5 + k / 100.0, prev);
        prev = last;
    }
    // At t = +0.5, tracked column 0 started as the lowest-energy state, which
    // for B < 0 is the field-ALIGNED one; after the crossing it has E = +B/2.
    const SpectralFrame ana = analytic_spin_frame(theta, phi, 0.5);
    CHECK(phase_overlap(last.state(0), ana.state(0)) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(last.energies[0] == doctest::Approx(0.25));  // no longer the lowest
    CHECK(last.energies[1] == doctest::Approx(-0.25));
    CHECK(last.labels[0].group == 0);
    CHECK(last.labels[1].group == 1);
}

TEST_CASE("label continuity for small steps (no spurious swaps)") {
    HamiltonianModel model = numeric_spin_model(0.7);
    ParameterPath path;
    path.t_start = 0.0;
    path.t_end = 1.0;
    path.r = [](double t) { return std::vector<double>{2.0 * kPi * t, 1.0}; };
    std::optional<SpectralFrame> prev;
    for (int k = 0; k <= 200; ++k) {
        const SpectralFrame f = spectral_frame_at(model, path, k / 200.0, prev);
        if (prev) {
            for (int l = 0; l < 2; ++l) {
                const Complex ov = inner(prev->state(l), f.state(l));
                CHECK(std::abs(ov) > 0.9);
                CHECK(ov.real() >= 0.0);  // parallel-transport smoothing
            }
        }
        prev = f;
    }
}

TEST_CASE("ambiguous tracking raises a diagnostic") {
    // prev in the discrete-Fourier basis vs a diagonal Hamiltonian: every
    // overlap mass is 1/3, far from a permutation.
    HamiltonianModel model;
    model.dim = 3;
    model.h = [](const std::vector<double>&) {
        ComplexMatrix h(3);
        h(0, 0) = 1.0;
        h(1, 1) = 2.0;
        h(2, 2) = 3.0;
        return HermitianMatrix{h};
    };
    ParameterPath path;
    path.r = [](double) { return std::vector<double>{0.0}; };
    SpectralFrame prev;
    prev.t = 0.0;
    prev.labels = {{0, 0}, {1, 0}, {2, 0}};
    prev.energies = {1.0, 2.0, 3.0};
    prev.vectors = ComplexMatrix(3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            prev.vectors(i, j) =
                std::exp(Complex(0.0, 2.0 * kPi * i * j / 3.0)) / std::sqrt(3.0);
    CHECK_THROWS_AS(spectral_frame_at(model, path, 0.1, prev), std::runtime_error);
}

TEST_CASE("frame field over a degenerate 4-dim model tracks groups") {
    // spin-½ ⊗ I₂: two two-fold degenerate groups all along the path.
    const double theta = 0.6;
    HamiltonianModel model;
    model.dim = 4;
    const HamiltonianModel spin = numeric_spin_model(theta);
    model.h = [spin](const std::vector<double>& r) {
        const ComplexMatrix s = spin.h(r).m();
        ComplexMatrix h(4);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int b = 0; b < 2; ++b) h(2 * i + b, 2 * j + b) = s(i, j);
        return HermitianMatrix{h};
    };
    ParameterPath path;
    path.t_start = 0.0;
    path.t_end = 1.0;
    path.r = [](double t) { return std::vector<double>{1.5 * t, 1.0}; };

    const FrameField field = make_frame_field(model, path, 256);
    CHECK_FALSE(field.smooth_gauge);
    CHECK(field.labels.size() == 4);
    const SpectralFrame f = field.frame(0.7);
    CHECK(distance(f.vectors.adjoint() * f.vectors, ComplexMatrix::identity(4)) < 1e-10);
    // tracked columns stay eigenvectors: H|v⟩ = E|v⟩ per label
    {
        const HermitianMatrix h = model.h(path.at(0.7));
        for (int k = 0; k < 4; ++k) {
            const CVector v = f.state(k);
            const CVector hv = h.m().apply(v);
            double res = 0.0;
            for (int i = 0; i < 4; ++i) res += std::norm(hv[i] - f.energies[k] * v[i]);
            CHECK(std::sqrt(res) < 1e-10 * std::max(1.0, h.m().frobenius_norm()));
        }
    }
    int groups_seen[2] = {0, 0};
    for (const LevelLabel& l : f.labels) ++groups_seen[l.group];
    CHECK(groups_seen[0] == 2);
    CHECK(groups_seen[1] == 2);
    // phases: ∫E dt per label, E = ∓1/2
    const std::vector<double> ph = field.phase(1.0);
    CHECK(ph[0] == doctest::Approx(-0.5).epsilon(1e-6));
    CHECK(ph[3] == doctest::Approx(0.5).epsilon(1e-6));
}
