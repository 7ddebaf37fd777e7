#pragma once

#include <functional>
#include <vector>

namespace bergman {

// Gauss-Legendre rule on [-1, 1]. Nodes ascending, weights positive.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Cached rule of the given order (computed once via Newton on the Legendre
// recurrence; order <= 64).
const GaussRule& gauss_legendre(int order);

// Fixed-order Gauss-Legendre on [a, b].
double integrate_gl(const std::function<double(double)>& f, double a, double b,
                    int order = 12);

struct QuadResult {
    double value = 0.0;
    double error = 0.0;   // estimate from the last bisection layer
    long evals = 0;
};

// Adaptive bisection with a Gauss-Legendre core. `breaks` may list interior
// points where the integrand has kinks; they become panel boundaries.
QuadResult integrate_adaptive(const std::function<double(double)>& f, double a,
                              double b, double rel_tol = 1e-12,
                              double abs_tol = 1e-300,
                              const std::vector<double>& breaks = {});

}  // namespace bergman
