#include "qlb/special.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace qlb {

namespace {

constexpr double kSqrtPi = 1.7724538509055160273;
constexpr double kTwoOverSqrtPi = 1.1283791670955125739;

// erf(x) = (2/sqrt(pi)) sum_k (-1)^k x^(2k+1) / (k! (2k+1)), |x| <= 2.
double erf_series(double x) {
  const double x2 = x * x;
  double term = x;  // k = 0 term before the 2/sqrt(pi) factor
  double sum = x;
  for (int k = 1; k < 80; ++k) {
    term *= -x2 / k;
    const double contrib = term / (2 * k + 1);
    sum += contrib;
    if (std::abs(contrib) < 1e-18 * std::abs(sum)) break;
  }
  return kTwoOverSqrtPi * sum;
}

// erfc(x) = exp(-x^2)/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
// evaluated with the modified Lentz algorithm, x >= 2.
double erfc_cf(double x) {
  const double tiny = 1e-300;
  double f = x;
  double c = f;
  double d = 0.0;
  for (int k = 1; k < 300; ++k) {
    const double a = 0.5 * k;
    d = x + a * d;
    if (std::abs(d) < tiny) d = tiny;
    c = x + a / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-17) break;
  }
  return std::exp(-x * x) / (kSqrtPi * f);
}

}  // namespace

double erf(double x) {
  if (std::isnan(x)) throw std::invalid_argument("erf: non-finite argument");
  const double ax = std::abs(x);
  double r;
  if (ax <= 2.0)
    r = erf_series(ax);
  else if (ax < 30.0)
    r = 1.0 - erfc_cf(ax);
  else
    r = 1.0;
  return x < 0 ? -r : r;  // odd by construction
}

namespace {

// Direct Kummer series sum_k (a)_k/(b)_k z^k/k! with z = -u2; safe for small
// u2 where no cancellation occurs.
double kummer_series(double a, double b, double u2) {
  double term = 1.0;
  double sum = 1.0;
  for (int k = 0; k < 200; ++k) {
    term *= (a + k) / (b + k) * (-u2) / (k + 1);
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

constexpr double kSeriesCrossover = 0.25;

}  // namespace

double kummer_a(double u2) {
  if (!(u2 >= 0)) throw std::invalid_argument("kummer_a: u2 must be >= 0");
  if (u2 < kSeriesCrossover) return kummer_series(-0.5, 2.5, u2);
  const double u = std::sqrt(u2);
  // (3/16)(1/u^2) { [1 + 2u^2] e^{-u^2} - [1 - 4u^2 - 4u^4] (sqrt(pi)/2) erf(u)/u }
  const double e = std::exp(-u2);
  const double g = 0.5 * kSqrtPi * erf(u) / u;
  return (3.0 / 16.0) / u2 * ((1.0 + 2.0 * u2) * e - (1.0 - 4.0 * u2 - 4.0 * u2 * u2) * g);
}

double kummer_b(double u2) {
  if (!(u2 >= 0)) throw std::invalid_argument("kummer_b: u2 must be >= 0");
  if (u2 < kSeriesCrossover) return kummer_series(-1.5, 1.5, u2);
  const double u = std::sqrt(u2);
  // (1/8) { [5 + 2u^2] e^{-u^2} + [3 + 12u^2 + 4u^4] (sqrt(pi)/2) erf(u)/u }
  const double e = std::exp(-u2);
  const double g = 0.5 * kSqrtPi * erf(u) / u;
  return 0.125 * ((5.0 + 2.0 * u2) * e + (3.0 + 12.0 * u2 + 4.0 * u2 * u2) * g);
}

}  // namespace qlb
