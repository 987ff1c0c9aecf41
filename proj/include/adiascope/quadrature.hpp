// quadrature.hpp — Gauss–Legendre nodes and adaptive Gauss–Kronrod integration
// for the oscillatory integrals used by the modulation averages.

#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace adiascope {

struct GaussLegendreRule {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;  // sum to 2
};

// Nodes/weights by Newton iteration on P_n; deterministic to double precision.
GaussLegendreRule gauss_legendre(int n);

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int evaluations = 0;
};

// Adaptive G7-K15 on [a, b] splitting the worst interval until the summed
// error estimate is below abs_tol.
QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                              double abs_tol = 1e-11, int max_intervals = 4096);

// Bracketed root finding (Brent). Requires f(a)·f(b) ≤ 0.
double find_root_brent(const std::function<double(double)>& f, double a, double b,
                       double xtol = 1e-13, int max_iter = 200);

}  // namespace adiascope
