#pragma once

#include <functional>
#include <span>
#include <vector>

namespace scatter {

struct GaussLegendreRule {
  std::vector<double> nodes;    // on (-1, 1)
  std::vector<double> weights;  // sum to 2
};

/// Nodes/weights of the n-point Gauss-Legendre rule; cached per order.
const GaussLegendreRule& gauss_legendre(int n);

/// integral of f over [a, b] with the n-point rule.
double gl_integrate(const std::function<double(double)>& f, double a, double b, int n = 64);

/// Adaptive Simpson to absolute tolerance tol.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol);

}  // namespace scatter
