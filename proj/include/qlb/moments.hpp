#pragma once

#include <vector>

#include "qlb/params.hpp"
#include "qlb/vec3.hpp"

namespace qlb {

// Mean momentum and mean kinetic energy under the delta-state closure
// <f(P)> ~ f(<P>).
struct MomentState {
  Vec3 P;
  double E = 0.0;
};

enum class MomentMode {
  ExactClosure,  // full confluent-hypergeometric right-hand sides
  Diffusive      // linear friction -eta P, -2 eta (E - 3/(2 beta))
};

// Rescaled momentum drift: dU/dt for U = P/(M v_beta).  Antiparallel to U.
Vec3 i1(const Vec3& U, const PhysicalParams& par);

// Rescaled energy drift as a function of u2 = beta E m / M = U^2.
double i2(double u2, const PhysicalParams& par);

// Right-hand sides in original units.
Vec3 momentum_rhs(const Vec3& P, const PhysicalParams& par);
double energy_rhs(double E, const PhysicalParams& par);

// Integrate the closure ODEs from t = 0 and sample on time_grid (increasing,
// nonnegative).  Adaptive embedded Runge-Kutta, relative tolerance 1e-10.
std::vector<MomentState> integrate_moments(const MomentState& initial,
                                           const std::vector<double>& time_grid,
                                           const PhysicalParams& par, MomentMode mode);

}  // namespace qlb
