#pragma once

#include <functional>
#include <vector>

// Gaussian quadrature rules, computed once at runtime by Newton iteration
// on the orthogonal-polynomial recurrences.

namespace symlik {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Legendre rule on [-1, 1]; sum of weights is 2.
const QuadratureRule& gauss_legendre(int order);

// Gauss-Hermite rule for weight exp(-t^2) on (-inf, inf) (physicists'
// convention); sum of weights is sqrt(pi).
const QuadratureRule& gauss_hermite(int order);

// Integrate f over [a, b] with a Gauss-Legendre rule of the given order.
template <typename F>
double integrate_gl(F&& f, double a, double b, int order = 24) {
  const QuadratureRule& rule = gauss_legendre(order);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return half * sum;
}

// Adaptive Simpson integration of f over [a, b] to absolute tolerance tol.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol, int max_depth = 50);

}  // namespace symlik
