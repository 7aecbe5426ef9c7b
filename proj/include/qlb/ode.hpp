#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "qlb/errors.hpp"

namespace qlb {

namespace detail {

struct Dp5Work {
  std::vector<double> k1, k2, k3, k4, k5, k6, k7, tmp, ynew;
  explicit Dp5Work(std::size_t n)
      : k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), ynew(n) {}
};

// One Dormand-Prince 5(4) step from (t, y) with step h.  k1 must hold rhs(t, y)
// on entry; on exit ynew is the 5th-order solution and k7 = rhs(t+h, ynew)
// (FSAL).  Returns the embedded error estimate per component in k2 (reused).
template <class Rhs>
void dp5_step(Rhs&& rhs, double t, double h, const std::vector<double>& y, Dp5Work& w) {
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                          e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                          e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;
  const std::size_t n = y.size();
  for (std::size_t i = 0; i < n; ++i) w.tmp[i] = y[i] + h * a21 * w.k1[i];
  rhs(t + h / 5, w.tmp, w.k2);
  for (std::size_t i = 0; i < n; ++i) w.tmp[i] = y[i] + h * (a31 * w.k1[i] + a32 * w.k2[i]);
  rhs(t + 3 * h / 10, w.tmp, w.k3);
  for (std::size_t i = 0; i < n; ++i)
    w.tmp[i] = y[i] + h * (a41 * w.k1[i] + a42 * w.k2[i] + a43 * w.k3[i]);
  rhs(t + 4 * h / 5, w.tmp, w.k4);
  for (std::size_t i = 0; i < n; ++i)
    w.tmp[i] = y[i] + h * (a51 * w.k1[i] + a52 * w.k2[i] + a53 * w.k3[i] + a54 * w.k4[i]);
  rhs(t + 8 * h / 9, w.tmp, w.k5);
  for (std::size_t i = 0; i < n; ++i)
    w.tmp[i] =
        y[i] + h * (a61 * w.k1[i] + a62 * w.k2[i] + a63 * w.k3[i] + a64 * w.k4[i] + a65 * w.k5[i]);
  rhs(t + h, w.tmp, w.k6);
  for (std::size_t i = 0; i < n; ++i)
    w.ynew[i] = y[i] + h * (b1 * w.k1[i] + b3 * w.k3[i] + b4 * w.k4[i] + b5 * w.k5[i] +
                            b6 * w.k6[i]);
  rhs(t + h, w.ynew, w.k7);
  for (std::size_t i = 0; i < n; ++i)
    w.k2[i] = h * (e1 * w.k1[i] + e3 * w.k3[i] + e4 * w.k4[i] + e5 * w.k5[i] + e6 * w.k6[i] +
                   e7 * w.k7[i]);
}

}  // namespace detail

// Adaptive Dormand-Prince 5(4) integration of y' = rhs(t, y) from t0 to t1,
// in place.  rhs(t, y, dydt).
template <class Rhs>
void integrate_rk45(Rhs&& rhs, std::vector<double>& y, double t0, double t1, double rel_tol,
                    double abs_tol) {
  const std::size_t n = y.size();
  detail::Dp5Work w(n);
  double t = t0;
  double h = (t1 - t0) * 1e-3;
  const double h_min = (t1 - t0) * 1e-14;
  rhs(t, y, w.k1);
  int rejects_in_a_row = 0;
  while (t < t1) {
    h = std::min(h, t1 - t);
    detail::dp5_step(rhs, t, h, y, w);
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double scale = abs_tol + rel_tol * std::max(std::abs(y[i]), std::abs(w.ynew[i]));
      err = std::max(err, std::abs(w.k2[i]) / scale);
    }
    if (err <= 1.0) {
      t += h;
      y = w.ynew;
      w.k1.swap(w.k7);  // FSAL
      rejects_in_a_row = 0;
    } else if (++rejects_in_a_row > 50) {
      throw NumericError("integrate_rk45: repeated step rejection");
    }
    const double factor = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
    h *= std::clamp(factor, 0.2, 5.0);
    if (h < h_min) throw NumericError("integrate_rk45: step size underflow");
  }
}

// Same tableau with n_steps equal steps and no error control; used for
// convergence-order studies.
template <class Rhs>
void integrate_rk45_fixed(Rhs&& rhs, std::vector<double>& y, double t0, double t1, int n_steps) {
  detail::Dp5Work w(y.size());
  const double h = (t1 - t0) / n_steps;
  rhs(t0, y, w.k1);
  for (int s = 0; s < n_steps; ++s) {
    detail::dp5_step(rhs, t0 + s * h, h, y, w);
    y = w.ynew;
    w.k1.swap(w.k7);
  }
}

}  // namespace qlb
