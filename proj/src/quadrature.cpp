#include "qlb/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace qlb {

namespace {

QuadRule compute_gauss_legendre(int n) {
  QuadRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  const int mid = (n + 1) / 2;
  for (int i = 0; i < mid; ++i) {
    // Chebyshev-like initial guess, then Newton on P_n(x) = 0.
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  return r;
}

QuadRule compute_gauss_hermite(int n) {
  QuadRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  const double pi_quarter = std::pow(M_PI, -0.25);
  double x = 0.0;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // initial guesses per Numerical Recipes ordering (largest root first)
    if (i == 0)
      x = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
    else if (i == 1)
      x -= 1.14 * std::pow(n, 0.426) / x;
    else if (i == 2)
      x = 1.86 * x - 0.86 * r.nodes[n - 1];
    else if (i == 3)
      x = 1.91 * x - 0.91 * r.nodes[n - 2];
    else
      x = 2.0 * x - r.nodes[n - i + 1];
    double dp = 0.0;
    for (int iter = 0; iter < 200; ++iter) {
      double p0 = pi_quarter, p1 = 0.0;
      // orthonormal Hermite recurrence
      double pj = p0;
      p1 = 0.0;
      for (int k = 0; k < n; ++k) {
        const double pk = x * std::sqrt(2.0 / (k + 1)) * pj -
                          (k > 0 ? std::sqrt(double(k) / (k + 1)) * p1 : 0.0);
        p1 = pj;
        pj = pk;
      }
      dp = std::sqrt(2.0 * n) * p1;
      const double dx = pj / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    r.nodes[n - 1 - i] = x;
    r.nodes[i] = -x;
    const double w = 2.0 / (dp * dp);
    r.weights[n - 1 - i] = w;
    r.weights[i] = w;
  }
  return r;
}

std::mutex cache_mutex;

}  // namespace

const QuadRule& gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n >= 1 required");
  static std::map<int, QuadRule> cache;
  std::lock_guard<std::mutex> lock(cache_mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gauss_legendre(n)).first;
  return it->second;
}

QuadRule gauss_legendre(int n, double a, double b) {
  const QuadRule& base = gauss_legendre(n);
  QuadRule r = base;
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    r.nodes[i] = mid + half * base.nodes[i];
    r.weights[i] = half * base.weights[i];
  }
  return r;
}

const QuadRule& gauss_hermite(int n) {
  if (n < 1) throw std::invalid_argument("gauss_hermite: n >= 1 required");
  static std::map<int, QuadRule> cache;
  std::lock_guard<std::mutex> lock(cache_mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gauss_hermite(n)).first;
  return it->second;
}

}  // namespace qlb
