// Shared helpers for the test suites: deterministic random matrices and a few
// constructors used across modules.

#pragma once

#include <cstdint>
#include <numbers>

#include "adiascope/complexmat.hpp"

namespace testing_support {

using adiascope::Complex;
using adiascope::ComplexMatrix;
using adiascope::HermitianMatrix;

// splitmix64 stream; fixed seeds keep every test reproducible.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}
    double uniform() {  // [0, 1)
        std::uint64_t x = (state_ += 0x9E3779B97F4A7C15ull);
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
        x ^= x >> 31;
        return static_cast<double>(x >> 11) * 0x1.0p-53;
    }
    double symmetric() { return 2.0 * uniform() - 1.0; }
private:
    std::uint64_t state_;
};

inline ComplexMatrix random_complex(int dim, Rng& rng) {
    ComplexMatrix m(dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) m(i, j) = Complex(rng.symmetric(), rng.symmetric());
    return m;
}

inline HermitianMatrix random_hermitian(int dim, Rng& rng) {
    const ComplexMatrix m = random_complex(dim, rng);
    ComplexMatrix h(dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) h(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
    return HermitianMatrix{std::move(h)};
}

inline ComplexMatrix pauli_x() {
    ComplexMatrix m(2);
    m(0, 1) = 1.0;
    m(1, 0) = 1.0;
    return m;
}

inline ComplexMatrix pauli_y() {
    ComplexMatrix m(2);
    m(0, 1) = Complex(0.0, -1.0);
    m(1, 0) = Complex(0.0, 1.0);
    return m;
}

inline ComplexMatrix pauli_z() {
    ComplexMatrix m(2);
    m(0, 0) = 1.0;
    m(1, 1) = -1.0;
    return m;
}

}  // namespace testing_support
