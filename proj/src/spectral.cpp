#include "adiascope/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>

namespace adiascope {

namespace {

const Complex kI(0.0, 1.0);

// Clusters of adjacent (ascending) eigenvalues closer than tol.
std::vector<std::pair<int, int>> degeneracy_clusters(const std::vector<double>& evals,
                                                     double tol) {
    std::vector<std::pair<int, int>> out;
    int start = 0;
    for (int k = 1; k <= static_cast<int>(evals.size()); ++k) {
        if (k == static_cast<int>(evals.size()) || evals[k] - evals[k - 1] > tol) {
            out.emplace_back(start, k - start);
            start = k;
        }
    }
    return out;
}

ComplexMatrix polar_unitary(const ComplexMatrix& m) {
    try {
        return polar_unitary_factor(m);
    } catch (const std::runtime_error&) {
        throw std::runtime_error(
            "frame alignment: overlap matrix is singular (label-tracking ambiguity)");
    }
}

ComplexMatrix submatrix_product(const ComplexMatrix& a, const std::vector<int>& rows_of,
                                const ComplexMatrix& b, const std::vector<int>& cols_of) {
    // (A restricted to columns rows_of)† · (B restricted to columns cols_of)
    const int n = a.dim();
    ComplexMatrix r(static_cast<int>(rows_of.size()));
    for (size_t i = 0; i < rows_of.size(); ++i)
        for (size_t j = 0; j < cols_of.size(); ++j) {
            Complex s = 0.0;
            for (int k = 0; k < n; ++k)
                s += std::conj(a(k, rows_of[i])) * b(k, cols_of[j]);
            r(static_cast<int>(i), static_cast<int>(j)) = s;
        }
    return r;
}

// Re-gauge `cur` against `ref`: per degeneracy cluster of cur, rotate the
// basis so the overlap block with the matched ref columns is Hermitian
// positive. Labels and energies are re-associated to follow ref's columns.
SpectralFrame align_frame_to(const SpectralFrame& ref, SpectralFrame cur, double cluster_tol) {
    const int n = cur.dim();
    const auto clusters = degeneracy_clusters(cur.energies, cluster_tol);

    // Assign every ref column to the cluster carrying its weight.
    std::vector<std::vector<int>> members(clusters.size());
    for (int p = 0; p < n; ++p) {
        double best = -1.0;
        size_t best_c = 0;
        for (size_t c = 0; c < clusters.size(); ++c) {
            double mass = 0.0;
            for (int q = clusters[c].first; q < clusters[c].first + clusters[c].second; ++q) {
                Complex ov = 0.0;
                for (int k = 0; k < n; ++k)
                    ov += std::conj(ref.vectors(k, p)) * cur.vectors(k, q);
                mass += std::norm(ov);
            }
            if (mass > best) {
                best = mass;
                best_c = c;
            }
        }
        if (best < 0.5)
            throw std::runtime_error(
                "spectral_frame_at: overlap matrix far from a permutation (tracking ambiguity)");
        members[best_c].push_back(p);
    }
    for (size_t c = 0; c < clusters.size(); ++c)
        if (static_cast<int>(members[c].size()) != clusters[c].second)
            throw std::runtime_error(
                "spectral_frame_at: group assignment mismatch (tracking ambiguity)");

    SpectralFrame out;
    out.t = cur.t;
    out.labels.resize(n);
    out.energies.resize(n);
    out.vectors = ComplexMatrix(n);
    for (size_t c = 0; c < clusters.size(); ++c) {
        std::vector<int> cur_cols(clusters[c].second);
        for (int q = 0; q < clusters[c].second; ++q) cur_cols[q] = clusters[c].first + q;
        const ComplexMatrix ov = submatrix_product(ref.vectors, members[c], cur.vectors, cur_cols);
        const ComplexMatrix w = polar_unitary(ov);  // ov = w·h
        // rotated = cur_block · w†  so that ref_block† · rotated is Hermitian PSD
        const int d = clusters[c].second;
        for (int jj = 0; jj < d; ++jj) {
            const int dest = members[c][jj];
            for (int i = 0; i < n; ++i) {
                Complex acc = 0.0;
                for (int kk = 0; kk < d; ++kk)
                    acc += cur.vectors(i, cur_cols[kk]) * std::conj(w(jj, kk));
                out.vectors(i, dest) = acc;
            }
            out.labels[dest] = ref.labels[dest];
            // Energy of the rotated column: exact when the cluster is truly
            // degenerate, weighted mean otherwise.
            double e_acc = 0.0;
            for (int kk = 0; kk < d; ++kk)
                e_acc += cur.energies[cur_cols[kk]] * std::norm(w(jj, kk));
            out.energies[dest] = e_acc;
        }
    }
    return out;
}

}  // namespace

SpectralFrame align_frame(const SpectralFrame& ref, SpectralFrame cur, double cluster_tol) {
    return align_frame_to(ref, std::move(cur), cluster_tol);
}

SpectralFrame analytic_spin_frame(double theta, double phi, double amplitude) {
    SpectralFrame f;
    f.labels = {{0, 0}, {1, 0}};  // group 0 = "+" (field aligned), group 1 = "−"
    f.energies = {amplitude / 2.0, -amplitude / 2.0};
    f.vectors = ComplexMatrix(2);
    const Complex em = std::exp(-kI * (phi / 2.0));
    const Complex ep = std::exp(kI * (phi / 2.0));
    const double ch = std::cos(theta / 2.0);
    const double sh = std::sin(theta / 2.0);
    f.vectors(0, 0) = ch * em;
    f.vectors(1, 0) = sh * ep;
    f.vectors(0, 1) = -sh * em;
    f.vectors(1, 1) = ch * ep;
    return f;
}

HamiltonianModel spin_half_field_model(double theta) {
    HamiltonianModel m;
    m.dim = 2;
    m.h = [theta](const std::vector<double>& r) {
        const double phi = r[0];
        const double b = r.size() > 1 ? r[1] : 1.0;
        const double nx = std::sin(theta) * std::cos(phi);
        const double ny = std::sin(theta) * std::sin(phi);
        const double nz = std::cos(theta);
        ComplexMatrix h(2);
        h(0, 0) = 0.5 * b * nz;
        h(1, 1) = -0.5 * b * nz;
        h(0, 1) = 0.5 * b * Complex(nx, -ny);
        h(1, 0) = 0.5 * b * Complex(nx, ny);
        return HermitianMatrix{std::move(h)};
    };
    m.frame_at = [theta](const std::vector<double>& r) {
        return analytic_spin_frame(theta, r[0], r.size() > 1 ? r[1] : 1.0);
    };
    return m;
}

SpectralFrame spectral_frame_at(const HamiltonianModel& model, const ParameterPath& path,
                                double t, const std::optional<SpectralFrame>& prev) {
    const std::vector<double> r = path.at(t);
    if (model.frame_at) {
        SpectralFrame f = model.frame_at(r);
        f.t = t;
        return f;
    }
    const HermitianMatrix h = model.h(r);
    const double hnorm = h.m().frobenius_norm();
    const EigResult e = eig_hermitian(h);

    SpectralFrame raw;
    raw.t = t;
    raw.energies = e.eigenvalues;
    raw.vectors = e.eigenvectors;
    const double tol = model.grouping_tol(hnorm);

    if (!prev) {
        // Anchor frame: groups ascending in energy, largest entry real positive.
        const auto clusters = degeneracy_clusters(raw.energies, tol);
        raw.labels.resize(model.dim);
        for (size_t c = 0; c < clusters.size(); ++c)
            for (int j = 0; j < clusters[c].second; ++j)
                raw.labels[clusters[c].first + j] = {static_cast<int>(c), j};
        for (int k = 0; k < model.dim; ++k) {
            int imax = 0;
            for (int i = 1; i < model.dim; ++i)
                if (std::abs(raw.vectors(i, k)) > std::abs(raw.vectors(imax, k))) imax = i;
            const Complex z = raw.vectors(imax, k);
            if (std::abs(z) > 0.0) {
                const Complex ph = std::conj(z) / std::abs(z);
                for (int i = 0; i < model.dim; ++i) raw.vectors(i, k) = raw.vectors(i, k) * ph;
            }
        }
        return raw;
    }
    raw.labels = prev->labels;  // placeholder; align re-associates by column
    return align_frame_to(*prev, std::move(raw), tol);
}

FrameField make_frame_field(const HamiltonianModel& model, const ParameterPath& path,
                            int chain_steps) {
    FrameField field;
    field.t0 = path.t_start;
    field.t1 = path.t_end;

    if (model.frame_at) {
        auto r = path.r;
        auto fat = model.frame_at;
        field.frame = [r, fat](double t) {
            SpectralFrame f = fat(r(t));
            f.t = t;
            return f;
        };
        field.labels = field.frame(path.t_start).labels;
        field.smooth_gauge = true;
    } else {
        // Parallel-transported chain; queries align against the nearest node.
        auto chain = std::make_shared<std::vector<SpectralFrame>>();
        chain->reserve(chain_steps + 1);
        const double dt = path.span() / chain_steps;
        std::optional<SpectralFrame> prev;
        for (int k = 0; k <= chain_steps; ++k) {
            SpectralFrame f = spectral_frame_at(model, path, path.t_start + k * dt, prev);
            prev = f;
            chain->push_back(std::move(f));
        }
        field.labels = chain->front().labels;
        field.smooth_gauge = false;
        const double t0 = path.t_start;
        field.frame = [chain, model, path, dt, t0, chain_steps](double t) {
            int k = static_cast<int>(std::floor((t - t0) / dt + 0.5));
            k = std::clamp(k, 0, chain_steps);
            return spectral_frame_at(model, path, t, (*chain)[static_cast<size_t>(k)]);
        };
    }

    // Default dynamic-phase integrals: cached midpoint prefix sums.
    {
        const int pn = std::max(chain_steps, 1024);
        auto prefix = std::make_shared<std::vector<std::vector<double>>>();
        prefix->reserve(pn + 1);
        const double dt = path.span() / pn;
        const int nlab = static_cast<int>(field.labels.size());
        prefix->push_back(std::vector<double>(nlab, 0.0));
        auto frame_fn = field.frame;
        for (int k = 0; k < pn; ++k) {
            const SpectralFrame f = frame_fn(path.t_start + (k + 0.5) * dt);
            std::vector<double> row = prefix->back();
            for (int l = 0; l < nlab; ++l) row[l] += f.energies[l] * dt;
            prefix->push_back(std::move(row));
        }
        const double t0 = path.t_start;
        field.phase = [prefix, frame_fn, dt, t0, pn, nlab](double t) {
            int k = static_cast<int>(std::floor((t - t0) / dt));
            k = std::clamp(k, 0, pn);
            std::vector<double> out = (*prefix)[static_cast<size_t>(k)];
            const double rem = t - (t0 + k * dt);
            if (rem > 0.0) {
                const SpectralFrame f = frame_fn(t0 + k * dt + 0.5 * rem);
                for (int l = 0; l < nlab; ++l) out[l] += f.energies[l] * rem;
            }
            return out;
        };
    }
    return field;
}

}  // namespace adiascope
