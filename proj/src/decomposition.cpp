#include "adiascope/decomposition.hpp"

#include <algorithm>
#include <cmath>

namespace adiascope {

namespace {

const Complex kI(0.0, 1.0);

// Step grid over [t0, t1] refined so every breakpoint lands on a boundary.
std::vector<double> make_grid(const FrameField& field, int steps) {
    std::vector<double> cuts{field.t0};
    for (double b : field.breakpoints)
        if (b > field.t0 && b < field.t1) cuts.push_back(b);
    cuts.push_back(field.t1);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    const double span = field.t1 - field.t0;
    std::vector<double> grid{field.t0};
    for (size_t s = 0; s + 1 < cuts.size(); ++s) {
        const double a = cuts[s], b = cuts[s + 1];
        const int nsub = std::max(4, static_cast<int>(std::llround(steps * (b - a) / span)));
        for (int k = 1; k <= nsub; ++k) grid.push_back(a + (b - a) * k / nsub);
    }
    return grid;
}

struct Stencil {
    SpectralFrame center;
    SpectralFrame plus_h, minus_h;    // t ± h
    SpectralFrame plus_h2, minus_h2;  // t ± h/2
    double h;
};

Stencil frame_stencil(const FrameField& field, double t, double h) {
    Stencil s;
    s.h = h;
    s.center = field.frame(t);
    s.plus_h = field.frame(t + h);
    s.minus_h = field.frame(t - h);
    s.plus_h2 = field.frame(t + 0.5 * h);
    s.minus_h2 = field.frame(t - 0.5 * h);
    if (!field.smooth_gauge) {
        // Chain gauges are only piecewise smooth; re-align the stencil onto
        // the expansion point so the difference quotients are well defined.
        const double tol = 1e-9;
        s.plus_h = align_frame(s.center, std::move(s.plus_h), tol);
        s.minus_h = align_frame(s.center, std::move(s.minus_h), tol);
        s.plus_h2 = align_frame(s.center, std::move(s.plus_h2), tol);
        s.minus_h2 = align_frame(s.center, std::move(s.minus_h2), tol);
    }
    return s;
}

// Label-space connection C(p,q) = ⟨n_p(t)| i d/dt |n_q(t)⟩: central
// differences at h and h/2 with one Richardson step, Hermitized.
ComplexMatrix connection_matrix(const Stencil& s) {
    const int n = s.center.dim();
    ComplexMatrix c(n);
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) {
            Complex acc_h = 0.0, acc_h2 = 0.0;
            for (int i = 0; i < n; ++i) {
                const Complex cp = std::conj(s.center.vectors(i, p));
                acc_h += cp * (s.plus_h.vectors(i, q) - s.minus_h.vectors(i, q));
                acc_h2 += cp * (s.plus_h2.vectors(i, q) - s.minus_h2.vectors(i, q));
            }
            const Complex d_h = acc_h / (2.0 * s.h);
            const Complex d_h2 = acc_h2 / s.h;
            c(p, q) = kI * (4.0 * d_h2 - d_h) / 3.0;
        }
    ComplexMatrix herm(n);
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q)
            herm(p, q) = 0.5 * (c(p, q) + std::conj(c(q, p)));
    return herm;
}

ComplexMatrix mask_same_group(const ComplexMatrix& c, const std::vector<LevelLabel>& labels) {
    ComplexMatrix r(c.dim());
    for (int p = 0; p < c.dim(); ++p)
        for (int q = 0; q < c.dim(); ++q)
            if (labels[p].group == labels[q].group) r(p, q) = c(p, q);
    return r;
}

ComplexMatrix mask_cross_group(const ComplexMatrix& c, const std::vector<LevelLabel>& labels) {
    ComplexMatrix r(c.dim());
    for (int p = 0; p < c.dim(); ++p)
        for (int q = 0; q < c.dim(); ++q)
            if (labels[p].group != labels[q].group) r(p, q) = c(p, q);
    return r;
}

// V0 · M · V0† — label space to the computational basis through the anchor.
ComplexMatrix to_anchor_basis(const ComplexMatrix& v0, const ComplexMatrix& m) {
    return v0 * m * v0.adjoint();
}

// Geometric condition: same-group accumulated phases may differ only by 2π
// multiples, otherwise U_G2 is not purely geometric.
void check_geometric_condition(const std::vector<double>& phases,
                               const std::vector<LevelLabel>& labels, double t) {
    constexpr double kTwoPi = 6.283185307179586476925287;
    for (size_t p = 0; p < labels.size(); ++p)
        for (size_t q = p + 1; q < labels.size(); ++q) {
            if (labels[p].group != labels[q].group) continue;
            const double diff = phases[p] - phases[q];
            const double frac = std::abs(diff / kTwoPi - std::round(diff / kTwoPi));
            if (frac > 1e-6)
                throw std::runtime_error(
                    "geometric condition violated at t=" + std::to_string(t) + " for pair (" +
                    std::to_string(labels[p].group) + "," + std::to_string(labels[p].index) +
                    ")/(" + std::to_string(labels[q].group) + "," +
                    std::to_string(labels[q].index) + "): phase gap " + std::to_string(diff));
        }
}

bool has_degenerate_groups(const std::vector<LevelLabel>& labels) {
    for (size_t p = 0; p < labels.size(); ++p)
        for (size_t q = p + 1; q < labels.size(); ++q)
            if (labels[p].group == labels[q].group) return true;
    return false;
}

ComplexMatrix modulated_cross(const ComplexMatrix& c_cross, const std::vector<double>& phases,
                              const std::vector<LevelLabel>& labels) {
    ComplexMatrix r(c_cross.dim());
    for (int p = 0; p < c_cross.dim(); ++p)
        for (int q = 0; q < c_cross.dim(); ++q) {
            if (labels[p].group == labels[q].group) continue;
            r(p, q) = std::exp(kI * (phases[p] - phases[q])) * c_cross(p, q);
        }
    return r;
}

}  // namespace

UnitaryMatrix u_dyn(const SpectralFrame& frame_t, const std::vector<double>& phase_integrals) {
    const int n = frame_t.dim();
    if (static_cast<int>(phase_integrals.size()) != static_cast<int>(frame_t.labels.size()))
        throw std::invalid_argument("u_dyn: phase table does not match frame labels");
    ComplexMatrix u(n);
    for (int l = 0; l < n; ++l) {
        const Complex ph = std::exp(-kI * phase_integrals[l]);
        const CVector v = frame_t.state(l);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) u(i, j) += ph * v[i] * std::conj(v[j]);
    }
    return UnitaryMatrix(std::move(u));
}

UnitaryMatrix u_g1(const SpectralFrame& frame_0, const SpectralFrame& frame_t) {
    if (frame_0.labels != frame_t.labels)
        throw std::invalid_argument("u_g1: frames carry different label sets");
    const int n = frame_0.dim();
    ComplexMatrix u(n);
    for (int l = 0; l < n; ++l) {
        const CVector vt = frame_t.state(l);
        const CVector v0 = frame_0.state(l);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) u(i, j) += vt[i] * std::conj(v0[j]);
    }
    return UnitaryMatrix(std::move(u));
}

UnitaryMatrix u_g2(const FrameField& field, int steps) {
    const double span = field.t1 - field.t0;
    const SpectralFrame f0 = field.frame(field.t0);
    if (span == 0.0) return UnitaryMatrix::identity(f0.dim());

    const std::vector<double> grid = make_grid(field, steps);
    const double h = span / (8.0 * steps);
    const ComplexMatrix v0 = f0.vectors;

    const bool check_condition = has_degenerate_groups(field.labels);
    ComplexMatrix w = ComplexMatrix::identity(f0.dim());
    for (size_t k = 0; k + 1 < grid.size(); ++k) {
        const double delta = grid[k + 1] - grid[k];
        const double tm = 0.5 * (grid[k] + grid[k + 1]);
        if (check_condition) check_geometric_condition(field.phase(tm), field.labels, tm);
        const Stencil st = frame_stencil(field, tm, h);
        const ComplexMatrix a =
            to_anchor_basis(v0, mask_same_group(connection_matrix(st), field.labels));
        w = expm_skew(HermitianMatrix{a}, -delta).m() * w;  // exp(+iAΔ)
    }
    return UnitaryMatrix(std::move(w));
}

UnitaryMatrix u_geo(const FrameField& field, int steps) {
    const SpectralFrame f0 = field.frame(field.t0);
    const SpectralFrame f1 = field.frame(field.t1);
    return u_g1(f0, f1) * u_g2(field, steps);
}

UnitaryMatrix u_err_extracted(const UnitaryMatrix& u_total, const UnitaryMatrix& ud,
                              const UnitaryMatrix& ug) {
    return ug.adjoint() * ud.adjoint() * u_total;
}

UnitaryMatrix u_err_direct(const FrameField& field, int steps) {
    const double span = field.t1 - field.t0;
    const SpectralFrame f0 = field.frame(field.t0);
    if (span == 0.0) return UnitaryMatrix::identity(f0.dim());

    const std::vector<double> grid = make_grid(field, steps);
    const double h = span / (8.0 * steps);
    const ComplexMatrix v0 = f0.vectors;

    ComplexMatrix w = ComplexMatrix::identity(f0.dim());  // running U_G2
    ComplexMatrix ue = ComplexMatrix::identity(f0.dim());
    for (size_t k = 0; k + 1 < grid.size(); ++k) {
        const double delta = grid[k + 1] - grid[k];
        const double tm = 0.5 * (grid[k] + grid[k + 1]);
        const Stencil st = frame_stencil(field, tm, h);
        const ComplexMatrix c = connection_matrix(st);
        const ComplexMatrix a_same =
            to_anchor_basis(v0, mask_same_group(c, field.labels));

        const ComplexMatrix w_mid =
            expm_skew(HermitianMatrix{a_same}, -(tm - grid[k])).m() * w;

        const std::vector<double> phases = field.phase(tm);
        if (has_degenerate_groups(field.labels))
            check_geometric_condition(phases, field.labels, tm);
        const ComplexMatrix m_label =
            modulated_cross(mask_cross_group(c, field.labels), phases, field.labels);
        const ComplexMatrix m_eff = w_mid.adjoint() * to_anchor_basis(v0, m_label) * w_mid;
        ComplexMatrix m_herm(m_eff.dim());
        for (int p = 0; p < m_eff.dim(); ++p)
            for (int q = 0; q < m_eff.dim(); ++q)
                m_herm(p, q) = 0.5 * (m_eff(p, q) + std::conj(m_eff(q, p)));

        ue = expm_skew(HermitianMatrix{m_herm}, -delta).m() * ue;  // exp(+iMΔ)
        w = expm_skew(HermitianMatrix{a_same}, -delta).m() * w;
    }
    return UnitaryMatrix(std::move(ue));
}

ModulationTrace modulation_trace(const FrameField& field, int samples_per_interval) {
    ModulationTrace trace;
    const int n = static_cast<int>(field.labels.size());

    std::vector<double> cuts{field.t0};
    for (double b : field.breakpoints)
        if (b > field.t0 && b < field.t1) cuts.push_back(b);
    cuts.push_back(field.t1);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::vector<double> ts{field.t0};
    for (size_t s = 0; s + 1 < cuts.size(); ++s)
        for (int i = 0; i < samples_per_interval; ++i)
            ts.push_back(cuts[s] + (cuts[s + 1] - cuts[s]) * (i + 0.5) / samples_per_interval);

    for (double t : ts) {
        const std::vector<double> phases = field.phase(t);
        for (int p = 0; p < n; ++p)
            for (int q = 0; q < n; ++q) {
                if (p == q || field.labels[p].group == field.labels[q].group) continue;
                if (field.labels[p].group > field.labels[q].group) continue;
                trace.samples.push_back(
                    {t, field.labels[p], field.labels[q],
                     std::exp(kI * (phases[p] - phases[q]))});
            }
    }
    return trace;
}

namespace {

HermitianMatrix h_generator(const FrameField& field, double t, double fd_step, bool same_group) {
    if (!(fd_step > 0.0))
        throw std::invalid_argument("h_operator: derivative step underflow");
    const SpectralFrame f0 = field.frame(field.t0);
    const Stencil st = frame_stencil(field, t, fd_step);
    const ComplexMatrix c = connection_matrix(st);
    const ComplexMatrix part =
        same_group ? mask_same_group(c, field.labels) : mask_cross_group(c, field.labels);
    const std::vector<double> phases = field.phase(t);
    ComplexMatrix mod(part.dim());
    for (int p = 0; p < part.dim(); ++p)
        for (int q = 0; q < part.dim(); ++q)
            mod(p, q) = std::exp(kI * (phases[p] - phases[q])) * part(p, q);
    // H = −Σ |n_p^0⟩⟨n_p^t| i |ṅ_q^t⟩ ⟨n_q^0| e^{iΔΦ}; C already carries i d/dt.
    ComplexMatrix hmat = to_anchor_basis(f0.vectors, mod) * Complex(-1.0, 0.0);
    ComplexMatrix herm(hmat.dim());
    for (int p = 0; p < hmat.dim(); ++p)
        for (int q = 0; q < hmat.dim(); ++q)
            herm(p, q) = 0.5 * (hmat(p, q) + std::conj(hmat(q, p)));
    return HermitianMatrix{std::move(herm)};
}

}  // namespace

HermitianMatrix h_g2_operator(const FrameField& field, double t, double fd_step) {
    return h_generator(field, t, fd_step, true);
}

HermitianMatrix h_err_operator(const FrameField& field, double t, double fd_step) {
    return h_generator(field, t, fd_step, false);
}

HermitianMatrix transformed_generator(const HamiltonianModel& model, const FrameField& field,
                                      const ParameterPath& path, double t, double fd_step) {
    const SpectralFrame f0 = field.frame(field.t0);
    auto s_at = [&](double tt) {
        const SpectralFrame f = field.frame(tt);
        return u_dyn(f, field.phase(tt)).m() * u_g1(f0, f).m();
    };
    const ComplexMatrix s = s_at(t);
    const ComplexMatrix sp = s_at(t + fd_step);
    const ComplexMatrix sm = s_at(t - fd_step);
    ComplexMatrix sdot(s.dim());
    for (int i = 0; i < s.dim(); ++i)
        for (int j = 0; j < s.dim(); ++j)
            sdot(i, j) = (sp(i, j) - sm(i, j)) / (2.0 * fd_step);

    const ComplexMatrix h = model.h(path.at(t)).m();
    const ComplexMatrix hs = s.adjoint() * h * s - kI * (s.adjoint() * sdot);
    ComplexMatrix herm(hs.dim());
    for (int p = 0; p < hs.dim(); ++p)
        for (int q = 0; q < hs.dim(); ++q)
            herm(p, q) = 0.5 * (hs(p, q) + std::conj(hs(q, p)));
    return HermitianMatrix{std::move(herm)};
}

EvolutionDecomposition decompose(const FrameField& field, const EvolutionResult& evo,
                                 const DecomposeOptions& opts) {
    EvolutionDecomposition d;
    const SpectralFrame f0 = field.frame(field.t0);
    const SpectralFrame f1 = field.frame(field.t1);

    d.u_total = evo.u_total;
    d.dynamic_phase = evo.phase_at_end();
    d.u_dyn = u_dyn(f1, d.dynamic_phase);
    d.u_g1 = u_g1(f0, f1);
    d.u_g2 = u_g2(field, opts.path_steps);
    d.u_geo = d.u_g1 * d.u_g2;
    d.u_err = u_err_extracted(d.u_total, d.u_dyn, d.u_geo);
    d.reconstruction_residual =
        distance((d.u_dyn * d.u_geo * d.u_err).m(), d.u_total.m());
    if (d.reconstruction_residual > opts.residual_tol)
        throw std::runtime_error("decompose: reconstruction residual " +
                                 std::to_string(d.reconstruction_residual) +
                                 " exceeds tolerance");
    return d;
}

}  // namespace adiascope
