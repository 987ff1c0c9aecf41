// complexmat.hpp — small dense complex matrices, Hermitian eigensolver,
// unitary exponentials, and operator metrics. Sized for dim 2..16.

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace adiascope {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;

// Thrown when the Jacobi sweep cap is hit; carries the remaining residual.
class EigConvergenceError : public std::runtime_error {
public:
    EigConvergenceError(const std::string& what, double residual)
        : std::runtime_error(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }
private:
    double residual_;
};

// ----------------------------- ComplexMatrix --------------------------------

// Dense square complex matrix, row-major. Value type; all ops pure.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(int dim) : dim_(dim), a_(static_cast<size_t>(dim) * dim) {
        if (dim <= 0) throw std::invalid_argument("ComplexMatrix: dim must be positive");
    }
    ComplexMatrix(int dim, std::vector<Complex> entries) : dim_(dim), a_(std::move(entries)) {
        if (dim <= 0) throw std::invalid_argument("ComplexMatrix: dim must be positive");
        if (a_.size() != static_cast<size_t>(dim) * dim)
            throw std::invalid_argument("ComplexMatrix: entry count does not match dim*dim");
    }

    static ComplexMatrix identity(int dim) {
        ComplexMatrix m(dim);
        for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
        return m;
    }
    static ComplexMatrix zero(int dim) { return ComplexMatrix(dim); }

    int dim() const noexcept { return dim_; }

    Complex& operator()(int i, int j) { return a_[static_cast<size_t>(i) * dim_ + j]; }
    const Complex& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * dim_ + j]; }

    const std::vector<Complex>& data() const noexcept { return a_; }

    bool all_finite() const noexcept {
        for (const auto& z : a_)
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
        return true;
    }

    ComplexMatrix adjoint() const {
        ComplexMatrix r(dim_);
        for (int i = 0; i < dim_; ++i)
            for (int j = 0; j < dim_; ++j) r(j, i) = std::conj((*this)(i, j));
        return r;
    }

    Complex trace() const {
        Complex t = 0.0;
        for (int i = 0; i < dim_; ++i) t += (*this)(i, i);
        return t;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (const auto& z : a_) s += std::norm(z);
        return std::sqrt(s);
    }

    ComplexMatrix operator+(const ComplexMatrix& o) const {
        check_same_dim(o);
        ComplexMatrix r(dim_);
        for (size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] + o.a_[k];
        return r;
    }
    ComplexMatrix operator-(const ComplexMatrix& o) const {
        check_same_dim(o);
        ComplexMatrix r(dim_);
        for (size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] - o.a_[k];
        return r;
    }
    ComplexMatrix operator*(const ComplexMatrix& o) const {
        check_same_dim(o);
        ComplexMatrix r(dim_);
        for (int i = 0; i < dim_; ++i)
            for (int k = 0; k < dim_; ++k) {
                const Complex aik = (*this)(i, k);
                if (aik == Complex(0.0)) continue;
                for (int j = 0; j < dim_; ++j) r(i, j) += aik * o(k, j);
            }
        return r;
    }
    ComplexMatrix operator*(Complex s) const {
        ComplexMatrix r(dim_);
        for (size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] * s;
        return r;
    }
    friend ComplexMatrix operator*(Complex s, const ComplexMatrix& m) { return m * s; }

    CVector apply(const CVector& v) const {
        if (static_cast<int>(v.size()) != dim_)
            throw std::invalid_argument("ComplexMatrix::apply: vector size mismatch");
        CVector r(dim_, Complex(0.0));
        for (int i = 0; i < dim_; ++i)
            for (int j = 0; j < dim_; ++j) r[i] += (*this)(i, j) * v[j];
        return r;
    }

    CVector column(int j) const {
        CVector c(dim_);
        for (int i = 0; i < dim_; ++i) c[i] = (*this)(i, j);
        return c;
    }
    void set_column(int j, const CVector& c) {
        for (int i = 0; i < dim_; ++i) (*this)(i, j) = c[i];
    }

private:
    void check_same_dim(const ComplexMatrix& o) const {
        if (dim_ != o.dim_) throw std::invalid_argument("ComplexMatrix: dimension mismatch");
    }
    int dim_ = 0;
    std::vector<Complex> a_;
};

// |a><b| for vectors a, b of equal size.
ComplexMatrix outer(const CVector& a, const CVector& b);

Complex inner(const CVector& a, const CVector& b);  // <a|b>

// ‖a − b‖_F; throws on dimension mismatch.
double distance(const ComplexMatrix& a, const ComplexMatrix& b);

// ----------------------------- checked wrappers -----------------------------

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kUnitaryTol = 1e-10;

class HermitianMatrix {
public:
    explicit HermitianMatrix(ComplexMatrix m) : m_(std::move(m)) {
        if (!m_.all_finite())
            throw std::runtime_error("HermitianMatrix: non-finite entries");
        const double scale = std::max(1.0, m_.frobenius_norm());
        const double dev = distance(m_, m_.adjoint());
        if (dev > kHermitianTol * scale)
            throw std::runtime_error("HermitianMatrix: deviation from self-adjointness " +
                                     std::to_string(dev));
    }
    const ComplexMatrix& m() const noexcept { return m_; }
    int dim() const noexcept { return m_.dim(); }
private:
    ComplexMatrix m_;
};

class UnitaryMatrix {
public:
    explicit UnitaryMatrix(ComplexMatrix m) : m_(std::move(m)) {
        if (!m_.all_finite())
            throw std::runtime_error("UnitaryMatrix: non-finite entries");
        const double dev = distance(m_.adjoint() * m_, ComplexMatrix::identity(m_.dim()));
        if (dev > kUnitaryTol)
            throw std::runtime_error("UnitaryMatrix: deviation from unitarity " +
                                     std::to_string(dev));
    }
    static UnitaryMatrix identity(int dim) { return UnitaryMatrix(ComplexMatrix::identity(dim)); }

    const ComplexMatrix& m() const noexcept { return m_; }
    int dim() const noexcept { return m_.dim(); }

    UnitaryMatrix operator*(const UnitaryMatrix& o) const { return UnitaryMatrix(m_ * o.m()); }
    UnitaryMatrix adjoint() const { return UnitaryMatrix(m_.adjoint()); }
private:
    ComplexMatrix m_;
};

// ----------------------------- eigensolver ----------------------------------

struct EigResult {
    std::vector<double> eigenvalues;  // ascending
    ComplexMatrix eigenvectors;       // columns, orthonormal
};

// Cyclic Jacobi for complex Hermitian matrices. Deterministic; sweep cap 100.
// Post: H v_k = λ_k v_k with residual ≤ 1e−10·‖H‖_F per column.
EigResult eig_hermitian(const HermitianMatrix& h);

// exp(−i·scale·a) through the eigendecomposition of a; exactly unitary up to
// rounding.
UnitaryMatrix expm_skew(const HermitianMatrix& a, double scale);

// Unitary polar factor M(M†M)^{−1/2}; projects long products back onto the
// unitary group. Throws if M is singular.
ComplexMatrix polar_unitary_factor(const ComplexMatrix& m);

// ----------------------------- unitary eigenphases --------------------------

struct UnitaryEig {
    std::vector<double> phases;  // in (−π, π], sorted ascending
    ComplexMatrix eigenvectors;  // columns matching phases
};

// Eigenphases of a unitary via joint diagonalization of its Hermitian and
// anti-Hermitian parts (they commute for normal matrices).
UnitaryEig unitary_eigenphases(const UnitaryMatrix& u);

}  // namespace adiascope
