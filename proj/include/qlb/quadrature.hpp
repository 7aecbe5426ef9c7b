#pragma once

#include <vector>

namespace qlb {

struct QuadRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Legendre rule on [-1, 1], computed by Newton iteration on P_n.
const QuadRule& gauss_legendre(int n);

// Gauss-Legendre rule mapped to [a, b].
QuadRule gauss_legendre(int n, double a, double b);

// Gauss-Hermite rule for the weight exp(-t^2) on (-inf, inf).
const QuadRule& gauss_hermite(int n);

// Integrate f over [a, b] with an n-point Gauss-Legendre rule.
template <class F>
double integrate_gl(F&& f, double a, double b, int n) {
  const QuadRule r = gauss_legendre(n, a, b);
  double s = 0.0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * f(r.nodes[i]);
  return s;
}

}  // namespace qlb
