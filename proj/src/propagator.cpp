#include "adiascope/propagator.hpp"

#include <cmath>
#include <numbers>

namespace adiascope {

namespace {

const Complex kI(0.0, 1.0);

EvolutionResult propagate_once(const HamiltonianModel& model, const FrameField& field,
                               const ParameterPath& path, int slices) {
    const double dt = path.span() / slices;
    const int nlab = static_cast<int>(field.labels.size());

    ComplexMatrix u = ComplexMatrix::identity(model.dim);
    EvolutionResult res;
    res.checkpoints.reserve(slices + 1);
    res.dynamic_phase.reserve(slices + 1);
    res.checkpoints.push_back(path.t_start);
    res.dynamic_phase.emplace_back(nlab, 0.0);

    std::vector<double> acc(nlab, 0.0);
    for (int k = 0; k < slices; ++k) {
        const double tm = path.t_start + (k + 0.5) * dt;
        const HermitianMatrix h = model.h(path.at(tm));
        u = expm_skew(h, dt).m() * u;

        const SpectralFrame f = field.frame(tm);
        for (int l = 0; l < nlab; ++l) acc[l] += f.energies[l] * dt;
        res.checkpoints.push_back(path.t_start + (k + 1) * dt);
        res.dynamic_phase.push_back(acc);
    }
    // Long products drift off the unitary group by ~n·eps; project back.
    res.u_total = UnitaryMatrix(polar_unitary_factor(u));
    return res;
}

}  // namespace

EvolutionResult propagate_continuous(const HamiltonianModel& model, const FrameField& field,
                                     const ParameterPath& path, const PropagateOptions& opts) {
    if (opts.slices_per_period < 16)
        throw std::invalid_argument("propagate_continuous: slices_per_period must be >= 16");
    const int slices =
        static_cast<int>(std::ceil(opts.slices_per_period * std::max(1.0, path.periods)));
    EvolutionResult res = propagate_once(model, field, path, slices);
    if (opts.verify_convergence) {
        const EvolutionResult fine = propagate_once(model, field, path, 2 * slices);
        const double dev = distance(res.u_total.m(), fine.u_total.m());
        if (dev > opts.convergence_tol)
            throw ConvergenceError("propagate_continuous: step-halving disagreement " +
                                       std::to_string(dev),
                                   dev, res.u_total.m(), fine.u_total.m());
    }
    return res;
}

EvolutionResult propagate_pulses(const FrameField& field, const PulseSequence& seq) {
    if (seq.pulses.empty())
        throw std::invalid_argument("propagate_pulses: empty pulse sequence");
    const int nlab = static_cast<int>(field.labels.size());

    EvolutionResult res;
    res.checkpoints.reserve(seq.pulses.size() + 1);
    res.dynamic_phase.reserve(seq.pulses.size() + 1);
    res.checkpoints.push_back(field.t0);
    res.dynamic_phase.emplace_back(nlab, 0.0);

    int dim = 0;
    {
        const SpectralFrame f0 = field.frame(field.t0);
        dim = f0.dim();
    }
    ComplexMatrix u = ComplexMatrix::identity(dim);
    std::vector<double> acc(nlab, 0.0);

    for (const Pulse& pulse : seq.pulses) {
        if (static_cast<int>(pulse.theta.size()) != nlab)
            throw std::invalid_argument("propagate_pulses: theta table misses a label");
        const SpectralFrame f = field.frame(pulse.t);
        ComplexMatrix p(dim);
        for (int l = 0; l < nlab; ++l) {
            const Complex ph = std::exp(-kI * pulse.theta[l]);
            const CVector v = f.state(l);
            for (int i = 0; i < dim; ++i)
                for (int j = 0; j < dim; ++j) p(i, j) += ph * v[i] * std::conj(v[j]);
        }
        u = p * u;
        for (int l = 0; l < nlab; ++l) acc[l] += pulse.theta[l];
        res.checkpoints.push_back(pulse.t);
        res.dynamic_phase.push_back(acc);
    }
    res.u_total = UnitaryMatrix(std::move(u));
    return res;
}

PhaseConditionReport dyn_phase_condition_check(const PulseSequence& seq, double tol) {
    PhaseConditionReport rep;
    const int nlab = static_cast<int>(seq.labels.size());
    std::vector<double> acc(nlab, 0.0);
    for (size_t lam = 0; lam < seq.pulses.size(); ++lam) {
        for (int l = 0; l < nlab; ++l) acc[l] += seq.pulses[lam].theta[l];
        for (int p = 0; p < nlab; ++p)
            for (int q = p + 1; q < nlab; ++q) {
                if (seq.labels[p].group != seq.labels[q].group) continue;
                const double diff = acc[p] - acc[q];
                const double frac =
                    std::abs(diff / (2.0 * std::numbers::pi) -
                             std::round(diff / (2.0 * std::numbers::pi)));
                if (frac > tol) {
                    rep.ok = false;
                    rep.violations.push_back({static_cast<int>(lam) + 1, seq.labels[p],
                                              seq.labels[q], diff});
                }
            }
    }
    return rep;
}

}  // namespace adiascope
