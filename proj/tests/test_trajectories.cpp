#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "qlb/rng.hpp"
#include "qlb/trajectories.hpp"

using namespace qlb;

namespace {

PhysicalParams base_params() {
  PhysicalParams par;
  par.m = 1.0;
  par.M = 1.0;
  par.T = 1.0;
  par.n_gas = 1.0;
  par.sigma_tot = 1.0;
  par.hbar = 1.0;
  return par;
}

// Thermally averaged |v_rel| for a tracer moving at speed V through the gas,
// times n sigma: the closed-form total collision rate used as an oracle.
double flux_rate(double V, const PhysicalParams& par) {
  const double v_beta = std::sqrt(2.0 * par.T / par.m);
  if (V == 0.0) return par.n_gas * par.sigma_tot * 2.0 * v_beta / std::sqrt(M_PI);
  const double u = V / v_beta;
  const double avg =
      v_beta * (std::exp(-u * u) / std::sqrt(M_PI) + (u + 0.5 / u) * std::erf(u));
  return par.n_gas * par.sigma_tot * avg;
}

}  // namespace

TEST_CASE("zero density freezes the trajectory") {
  PhysicalParams par = base_params();
  par.n_gas = 0.0;
  auto rng = derive_stream(7, 0);
  const Vec3 P0{0.3, -1.2, 2.0};
  const Trajectory traj = simulate_trajectory(P0, 50.0, par, CrossSectionModel::constant(), rng);
  CHECK(traj.events.size() == 1);
  CHECK(traj.at(0.0).z == doctest::Approx(P0.z));
  CHECK(traj.at(49.9).x == doctest::Approx(P0.x));
}

TEST_CASE("event times strictly increase and momentum is piecewise constant") {
  PhysicalParams par = base_params();
  auto rng = derive_stream(11, 0);
  const Trajectory traj =
      simulate_trajectory({1.0, 0.0, 0.0}, 20.0, par, CrossSectionModel::constant(), rng);
  REQUIRE(traj.events.size() > 5);
  for (std::size_t i = 1; i < traj.events.size(); ++i)
    CHECK(traj.events[i].t > traj.events[i - 1].t);
  // between two adjacent events at() returns the earlier momentum
  const auto& e = traj.events[2];
  const double mid = 0.5 * (e.t + traj.events[3].t);
  CHECK(traj.at(mid).x == doctest::Approx(e.P.x));
}

TEST_CASE("first waiting time is exponential (KS test)") {
  PhysicalParams par = base_params();
  const Vec3 P0{0.0, 0.0, 1.3};
  const double rate = m_out_classical(P0, par, CrossSectionModel::constant());
  const double t_max = 1.0 / rate;
  const int n = 100000;
  std::vector<double> waits;
  waits.reserve(n);
  for (int k = 0; k < n; ++k) {
    auto rng = derive_stream(321, static_cast<std::uint64_t>(k));
    const Trajectory traj =
        simulate_trajectory(P0, t_max, par, CrossSectionModel::constant(), rng);
    if (traj.events.size() > 1) waits.push_back(traj.events[1].t);
  }
  std::sort(waits.begin(), waits.end());
  // censored at t_max, so compare against the truncated exponential CDF
  const double norm = -std::expm1(-rate * t_max);
  double d = 0.0;
  const double nn = static_cast<double>(waits.size());
  for (std::size_t i = 0; i < waits.size(); ++i) {
    const double f = -std::expm1(-rate * waits[i]) / norm;
    d = std::max(d, std::abs(f - (i + 1) / nn));
    d = std::max(d, std::abs(f - i / nn));
  }
  // KS critical value at significance 1e-3
  CHECK(d < 1.949 / std::sqrt(nn));
}

TEST_CASE("short-horizon event count matches the collision rate") {
  PhysicalParams par = base_params();
  par.M = 4.0;
  const Vec3 P0{0.0, 0.9, -0.7};
  const double rate_quad = m_out_classical(P0, par, CrossSectionModel::constant());
  const double rate_oracle = flux_rate(P0.norm() / par.M, par);
  CHECK(rate_quad == doctest::Approx(rate_oracle).epsilon(1e-6));
  const double t = 0.05 / rate_quad;
  const int n = 20000;
  long events = 0;
  for (int k = 0; k < n; ++k) {
    auto rng = derive_stream(99, static_cast<std::uint64_t>(k));
    events += static_cast<long>(
        simulate_trajectory(P0, t, par, CrossSectionModel::constant(), rng).events.size() - 1);
  }
  const double mean = static_cast<double>(events) / n;
  const double expected = rate_quad * t;
  const double se = std::sqrt(expected / n);  // Poisson spread
  CHECK(std::abs(mean - expected) < std::max(4.0 * se, 0.01 * expected));
}

TEST_CASE("equilibrium initial condition is stationary in energy") {
  PhysicalParams par = base_params();
  const auto grid = std::vector<double>{0.2, 0.5, 1.0, 2.0, 4.0};
  const EnsembleStats stats = ensemble_moments(InitialCondition::maxwell_tracer(), 4000, grid,
                                               par, CrossSectionModel::constant(), 2024);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(std::abs(stats.mean_E[i] - 1.5 * par.T) < 3.0 * stats.se_E[i]);
    // covariance diagonal near M k_B T
    CHECK(stats.cov_P[i][0] == doctest::Approx(par.M * par.T).epsilon(0.15));
  }
}

TEST_CASE("mean momentum decays as exp(-eta t) at small mass ratio") {
  PhysicalParams par = base_params();
  par.m = 0.01;  // m/M = 0.01
  const double eta =
      (16.0 / 3.0) * par.n_gas * par.sigma_tot * std::sqrt(par.m * par.T / (2.0 * M_PI)) / par.M;
  // twice the tracer thermal momentum: slow on the gas velocity scale, so the
  // linear-friction exponential applies
  const Vec3 P0{0.0, 0.0, 2.0 * std::sqrt(2.0 * par.M * par.T)};
  const std::vector<double> grid{1.0 / eta, 2.0 / eta};
  const EnsembleStats stats = ensemble_moments(InitialCondition::delta(P0), 2000, grid, par,
                                               CrossSectionModel::constant(), 77);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double ref = P0.z * std::exp(-eta * grid[i]);
    CHECK(std::abs(stats.mean_P[i].z - ref) < 3.0 * stats.se_P[i].z);
    // cylindrical symmetry about z
    CHECK(std::abs(stats.mean_P[i].x) < 3.0 * stats.se_P[i].x);
    CHECK(std::abs(stats.mean_P[i].y) < 3.0 * stats.se_P[i].y);
  }
}

TEST_CASE("long-time ensemble thermalizes to the tracer Maxwell distribution") {
  PhysicalParams par = base_params();
  const double v_beta = std::sqrt(2.0 * par.T / par.m);
  const Vec3 P0{0.0, 0.0, 1.5 * par.M * v_beta};
  const double eta =
      (16.0 / 3.0) * par.n_gas * par.sigma_tot * std::sqrt(par.m * par.T / (2.0 * M_PI)) / par.M;
  const double t_final = 10.0 / eta;
  const int n = 10000;
  const double sigma_p = std::sqrt(par.M * par.T);
  // 20 bins per axis over +-4 sigma, tails folded into the edge bins
  constexpr int kBins = 20;
  std::array<std::array<double, kBins>, 3> counts{};
  for (int k = 0; k < n; ++k) {
    auto rng = derive_stream(5150, static_cast<std::uint64_t>(k));
    const Vec3 P =
        simulate_trajectory(P0, t_final, par, CrossSectionModel::constant(), rng).at(t_final);
    const double comps[3] = {P.x, P.y, P.z};
    for (int a = 0; a < 3; ++a) {
      int bin = static_cast<int>((comps[a] / sigma_p + 4.0) / 8.0 * kBins);
      bin = std::clamp(bin, 0, kBins - 1);
      counts[a][bin] += 1.0;
    }
  }
  for (int a = 0; a < 3; ++a) {
    double chi2 = 0.0;
    for (int b = 0; b < kBins; ++b) {
      const double lo = -4.0 + 8.0 * b / kBins;
      const double hi = lo + 8.0 / kBins;
      double p = 0.5 * (std::erf(hi / std::sqrt(2.0)) - std::erf(lo / std::sqrt(2.0)));
      if (b == 0) p = 0.5 * (1.0 + std::erf(hi / std::sqrt(2.0)));
      if (b == kBins - 1) p = 0.5 * (1.0 - std::erf(lo / std::sqrt(2.0)));
      const double expect = n * p;
      chi2 += (counts[a][b] - expect) * (counts[a][b] - expect) / expect;
    }
    // chi^2 critical value, 19 dof, significance 1e-3
    CHECK(chi2 < 43.82);
  }
}

TEST_CASE("ensemble statistics are bit-identical for a fixed seed") {
  PhysicalParams par = base_params();
  const auto grid = geometric_time_grid(0.05, 2.0, 6);
  const auto a = ensemble_moments(InitialCondition::delta({1.0, 0.0, 0.5}), 300, grid, par,
                                  CrossSectionModel::constant(), 42, 1);
  const auto b = ensemble_moments(InitialCondition::delta({1.0, 0.0, 0.5}), 300, grid, par,
                                  CrossSectionModel::constant(), 42, 3);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(a.mean_P[i].x == b.mean_P[i].x);
    CHECK(a.mean_P[i].z == b.mean_P[i].z);
    CHECK(a.mean_E[i] == b.mean_E[i]);
    for (int k = 0; k < 6; ++k) CHECK(a.cov_P[i][k] == b.cov_P[i][k]);
  }
  const auto c = ensemble_moments(InitialCondition::delta({1.0, 0.0, 0.5}), 300, grid, par,
                                  CrossSectionModel::constant(), 43, 2);
  CHECK(a.mean_E[3] != c.mean_E[3]);
}

TEST_CASE("geometric time grid endpoints and monotonicity") {
  const auto g = geometric_time_grid(0.01, 10.0, 64);
  CHECK(g.size() == 64);
  CHECK(g.front() == doctest::Approx(0.01));
  CHECK(g.back() == doctest::Approx(10.0));
  for (std::size_t i = 1; i < g.size(); ++i) {
    CHECK(g[i] > g[i - 1]);
    // constant ratio
    CHECK(g[i] / g[i - 1] == doctest::Approx(g[1] / g[0]).epsilon(1e-9));
  }
  CHECK_THROWS_AS(geometric_time_grid(0.0, 1.0, 8), std::invalid_argument);
}
