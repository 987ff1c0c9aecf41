#include "adiascope/complexmat.hpp"

#include <algorithm>
#include <numeric>

namespace adiascope {

ComplexMatrix outer(const CVector& a, const CVector& b) {
    if (a.size() != b.size()) throw std::invalid_argument("outer: size mismatch");
    ComplexMatrix r(static_cast<int>(a.size()));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j)
            r(static_cast<int>(i), static_cast<int>(j)) = a[i] * std::conj(b[j]);
    return r;
}

Complex inner(const CVector& a, const CVector& b) {
    if (a.size() != b.size()) throw std::invalid_argument("inner: size mismatch");
    Complex s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

double distance(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("distance: dimension mismatch");
    double s = 0.0;
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j) s += std::norm(a(i, j) - b(i, j));
    return std::sqrt(s);
}

namespace {

double offdiag_norm(const ComplexMatrix& a) {
    double s = 0.0;
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j)
            if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

// One Jacobi rotation eliminating a(p,q). A ← R†AR, V ← V·R where R acts on
// the (p,q) plane: R(p,p)=c, R(p,q)=−s, R(q,p)=s·e^{−iα}, R(q,q)=c·e^{−iα},
// with a(p,q)=|a(p,q)|e^{iα} and the closest-to-identity angle choice.
void jacobi_rotate(ComplexMatrix& a, ComplexMatrix& v, int p, int q) {
    const Complex apq = a(p, q);
    const double h = std::abs(apq);
    if (h == 0.0) return;
    const Complex eia = apq / h;  // e^{iα}
    const double app = a(p, p).real();
    const double aqq = a(q, q).real();
    const double tau = (app - aqq) / (2.0 * h);
    const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;

    const int n = a.dim();
    // Column update: col_p ← c·col_p + s·conj(eia)·col_q ; col_q ← −s·eia·col_p + c·col_q
    // folded together with the conjugate row update.
    for (int k = 0; k < n; ++k) {
        const Complex akp = a(k, p);
        const Complex akq = a(k, q);
        a(k, p) = c * akp + s * std::conj(eia) * akq;
        a(k, q) = -s * eia * akp + c * akq;
    }
    for (int k = 0; k < n; ++k) {
        const Complex apk = a(p, k);
        const Complex aqk = a(q, k);
        a(p, k) = c * apk + s * eia * aqk;
        a(q, k) = -s * std::conj(eia) * apk + c * aqk;
    }
    // Clean the eliminated pair and enforce real diagonal.
    a(p, q) = 0.0;
    a(q, p) = 0.0;
    a(p, p) = Complex(a(p, p).real(), 0.0);
    a(q, q) = Complex(a(q, q).real(), 0.0);

    for (int k = 0; k < n; ++k) {
        const Complex vkp = v(k, p);
        const Complex vkq = v(k, q);
        v(k, p) = c * vkp + s * std::conj(eia) * vkq;
        v(k, q) = -s * eia * vkp + c * vkq;
    }
}

}  // namespace

EigResult eig_hermitian(const HermitianMatrix& h) {
    const int n = h.dim();
    // Work on the Hermitized copy so the invariant holds exactly.
    ComplexMatrix a(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            a(i, j) = 0.5 * (h.m()(i, j) + std::conj(h.m()(j, i)));
    ComplexMatrix v = ComplexMatrix::identity(n);

    const double hnorm = a.frobenius_norm();
    const double stop = 1e-14 * std::max(1e-300, hnorm);
    constexpr int kMaxSweeps = 100;

    double off = offdiag_norm(a);
    int sweep = 0;
    while (off > stop && sweep < kMaxSweeps) {
        for (int p = 0; p < n - 1; ++p)
            for (int q = p + 1; q < n; ++q)
                if (std::abs(a(p, q)) > stop / (n * n)) jacobi_rotate(a, v, p, q);
        off = offdiag_norm(a);
        ++sweep;
    }
    if (off > stop)
        throw EigConvergenceError("eig_hermitian: Jacobi sweeps exhausted", off);

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return a(i, i).real() < a(j, j).real(); });

    EigResult r;
    r.eigenvalues.resize(n);
    r.eigenvectors = ComplexMatrix(n);
    for (int k = 0; k < n; ++k) {
        r.eigenvalues[k] = a(order[k], order[k]).real();
        for (int i = 0; i < n; ++i) r.eigenvectors(i, k) = v(i, order[k]);
    }
    return r;
}

UnitaryMatrix expm_skew(const HermitianMatrix& a, double scale) {
    const EigResult e = eig_hermitian(a);
    const int n = a.dim();
    ComplexMatrix r(n);
    for (int k = 0; k < n; ++k) {
        const Complex ph = std::exp(Complex(0.0, -scale * e.eigenvalues[k]));
        for (int i = 0; i < n; ++i) {
            const Complex vik = e.eigenvectors(i, k) * ph;
            for (int j = 0; j < n; ++j) r(i, j) += vik * std::conj(e.eigenvectors(j, k));
        }
    }
    return UnitaryMatrix(std::move(r));
}

ComplexMatrix polar_unitary_factor(const ComplexMatrix& m) {
    const EigResult e = eig_hermitian(HermitianMatrix{m.adjoint() * m});
    const int d = m.dim();
    for (double ev : e.eigenvalues)
        if (ev < 1e-12)
            throw std::runtime_error("polar_unitary_factor: singular matrix");
    ComplexMatrix inv_sqrt(d);
    for (int k = 0; k < d; ++k) {
        const double s = 1.0 / std::sqrt(e.eigenvalues[k]);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                inv_sqrt(i, j) += e.eigenvectors(i, k) * s * std::conj(e.eigenvectors(j, k));
    }
    return m * inv_sqrt;
}

UnitaryEig unitary_eigenphases(const UnitaryMatrix& u) {
    const int n = u.dim();
    const ComplexMatrix ua = u.m().adjoint();
    ComplexMatrix cosm(n), sinm(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            cosm(i, j) = 0.5 * (u.m()(i, j) + ua(i, j));
            sinm(i, j) = Complex(0.0, -0.5) * (u.m()(i, j) - ua(i, j));
        }
    const HermitianMatrix hc{cosm};
    const EigResult ec = eig_hermitian(hc);

    // Group eigenvalues of the cosine part, then split each group by the sine
    // part (they share eigenvectors since U is normal).
    ComplexMatrix vecs = ec.eigenvectors;
    std::vector<double> phases(n);
    const double gtol = 1e-8 * std::max(1.0, std::abs(ec.eigenvalues.back()));
    int g0 = 0;
    while (g0 < n) {
        int g1 = g0 + 1;
        while (g1 < n && ec.eigenvalues[g1] - ec.eigenvalues[g1 - 1] < gtol) ++g1;
        const int gd = g1 - g0;
        if (gd > 1) {
            ComplexMatrix sub(gd);
            for (int ii = 0; ii < gd; ++ii)
                for (int jj = 0; jj < gd; ++jj) {
                    Complex sum = 0.0;
                    for (int r = 0; r < n; ++r)
                        for (int c = 0; c < n; ++c)
                            sum += std::conj(vecs(r, g0 + ii)) * sinm(r, c) * vecs(c, g0 + jj);
                    sub(ii, jj) = sum;
                }
            const EigResult es = eig_hermitian(HermitianMatrix{sub});
            ComplexMatrix rotated(n);
            for (int k = 0; k < gd; ++k)
                for (int i = 0; i < n; ++i) {
                    Complex acc = 0.0;
                    for (int jj = 0; jj < gd; ++jj)
                        acc += vecs(i, g0 + jj) * es.eigenvectors(jj, k);
                    rotated(i, k) = acc;
                }
            for (int k = 0; k < gd; ++k)
                for (int i = 0; i < n; ++i) vecs(i, g0 + k) = rotated(i, k);
        }
        g0 = g1;
    }
    for (int k = 0; k < n; ++k) {
        Complex c = 0.0, s = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                c += std::conj(vecs(i, k)) * cosm(i, j) * vecs(j, k);
                s += std::conj(vecs(i, k)) * sinm(i, j) * vecs(j, k);
            }
        phases[k] = std::atan2(s.real(), c.real());
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return phases[i] < phases[j]; });
    UnitaryEig out;
    out.phases.resize(n);
    out.eigenvectors = ComplexMatrix(n);
    for (int k = 0; k < n; ++k) {
        out.phases[k] = phases[order[k]];
        for (int i = 0; i < n; ++i) out.eigenvectors(i, k) = vecs(i, order[k]);
    }
    return out;
}

}  // namespace adiascope
