#pragma once

// Test-only reference implementations, kept independent of the library code
// paths they are used to check.

#include <cmath>
#include <complex>
#include <functional>

#include "qlb/params.hpp"
#include "qlb/vec3.hpp"

namespace oracle {

// erf by Gauss-Legendre quadrature of the defining integral.
inline double erf_quadrature(double x) {
  const int n = 96;
  // 96-point rule on [0, x] via recursive midpoint construction would be
  // overkill; use composite Simpson with fine spacing instead.
  const int steps = 4000;
  const double h = x / steps;
  double sum = 0.0;
  for (int i = 0; i < steps; ++i) {
    const double a = i * h;
    const double m = a + 0.5 * h;
    const double b = a + h;
    sum += h / 6.0 * (std::exp(-a * a) + 4.0 * std::exp(-m * m) + std::exp(-b * b));
  }
  (void)n;
  return 2.0 / std::sqrt(M_PI) * sum;
}

// Direct Kummer series sum_k (a)_k/(b)_k z^k / k! in extended precision with
// compensated summation; reference for the closed-form 1F1 evaluations.
inline double kummer_series_ld(double a, double b, double z) {
  long double term = 1.0L;
  long double sum = 1.0L;
  long double comp = 0.0L;
  for (int k = 0; k < 400; ++k) {
    term *= (static_cast<long double>(a) + k) / (static_cast<long double>(b) + k) * z / (k + 1);
    const long double y = term - comp;
    const long double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    if (fabsl(term) < 1e-25L * fabsl(sum) && k > 4) break;
  }
  return static_cast<double>(sum);
}

// 2D quadrature of the plane integral int_{Q_perp} d2p mu_beta(p + shift)
// sigma(p), in a rotated frame, by composite Simpson on a truncated square.
// Independent of the Gauss-Hermite factorization used in the library.
inline double plane_integral_simpson(const qlb::Vec3& Q, const qlb::Vec3& shift,
                                     const qlb::PhysicalParams& par,
                                     const std::function<double(const qlb::Vec3&)>& sigma_of_p,
                                     int steps = 200) {
  const auto basis = qlb::perpendicular_basis(Q);
  const double p_beta = std::sqrt(2.0 * par.m * par.T);
  const double half = 7.0 * p_beta;
  const double h = 2.0 * half / steps;
  double sum = 0.0;
  for (int i = 0; i <= steps; ++i) {
    const double wi = (i == 0 || i == steps) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    for (int j = 0; j <= steps; ++j) {
      const double wj = (j == 0 || j == steps) ? 1.0 : (j % 2 ? 4.0 : 2.0);
      const qlb::Vec3 p = basis[0] * (-half + i * h) + basis[1] * (-half + j * h);
      sum += wi * wj * qlb::maxwell_boltzmann(p + shift, par) * sigma_of_p(p);
    }
  }
  return sum * h * h / 9.0;
}

}  // namespace oracle
