#pragma once

namespace qlb {

// Error function, implemented in-repo for reproducibility across platforms.
// Maclaurin series for |x| <= 2, Lentz continued fraction for erfc beyond.
// Absolute accuracy better than 1e-14 over the real line.
double erf(double x);

// 1F1(-1/2, 5/2; -u2).  Kummer power series for u2 < 0.25, otherwise the
// erf-based closed form; both routes are positive and monotonically
// increasing in u2.
double kummer_a(double u2);

// 1F1(-3/2, 3/2; -u2), same evaluation strategy.
double kummer_b(double u2);

}  // namespace qlb
