#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <vector>

#include "qlb/params.hpp"
#include "qlb/rates.hpp"
#include "qlb/vec3.hpp"

namespace qlb {

// One jump event; momentum is constant between events.
struct TrajectoryEvent {
  double t;
  Vec3 P;  // momentum after the collision at time t
};

struct Trajectory {
  std::vector<TrajectoryEvent> events;  // first entry at t = 0

  // piecewise-constant evaluation
  Vec3 at(double t) const;
};

// Event-driven Gillespie simulation of the classical linear Boltzmann jump
// process: exponential waiting times with rate M_out^cl(P), transfers drawn
// from the exact collision sampler.  No time discretization is involved.
Trajectory simulate_trajectory(const Vec3& P0, double t_max, const PhysicalParams& par,
                               const CrossSectionModel& model, std::mt19937_64& rng);

struct InitialCondition {
  enum class Kind { Delta, MaxwellTracer };
  Kind kind = Kind::Delta;
  Vec3 P0{};  // used by Delta

  static InitialCondition delta(const Vec3& P0) { return {Kind::Delta, P0}; }
  static InitialCondition maxwell_tracer() { return {Kind::MaxwellTracer, {}}; }
};

struct EnsembleStats {
  std::vector<double> t;
  std::vector<Vec3> mean_P;
  std::vector<double> mean_E;
  // covariance of P, packed xx yy zz xy xz yz
  std::vector<std::array<double, 6>> cov_P;
  std::vector<Vec3> se_P;  // standard errors of the momentum means
  std::vector<double> se_E;
  int n_traj = 0;
  std::uint64_t root_seed = 0;
};

// Ensemble relaxation statistics over a fixed time grid.  Per-trajectory RNG
// streams are derived from root_seed by counter-based splitting, and blocks
// are reduced in fixed order, so the result is bit-identical for a given seed
// regardless of n_workers.
EnsembleStats ensemble_moments(const InitialCondition& init, int n_traj,
                               const std::vector<double>& time_grid, const PhysicalParams& par,
                               const CrossSectionModel& model, std::uint64_t root_seed,
                               int n_workers = 0);

// Geometric time grid from t_min to t_max (n points), the default statistics
// grid spanning transient and equilibrium.
std::vector<double> geometric_time_grid(double t_min, double t_max, int n);

}  // namespace qlb
