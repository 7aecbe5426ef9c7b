#include "qlb/trajectories.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qlb/parallel.hpp"
#include "qlb/rng.hpp"

namespace qlb {

Vec3 Trajectory::at(double t) const {
  // events are time-ordered; return momentum after the last event <= t
  auto it = std::upper_bound(events.begin(), events.end(), t,
                             [](double tt, const TrajectoryEvent& e) { return tt < e.t; });
  if (it == events.begin()) return events.front().P;
  return std::prev(it)->P;
}

Trajectory simulate_trajectory(const Vec3& P0, double t_max, const PhysicalParams& par,
                               const CrossSectionModel& model, std::mt19937_64& rng) {
  if (!(t_max > 0)) throw std::invalid_argument("simulate_trajectory: t_max must be positive");
  par.validate();
  Trajectory traj;
  traj.events.push_back({0.0, P0});
  if (par.n_gas == 0.0) return traj;
  std::exponential_distribution<double> expo;
  double t = 0.0;
  Vec3 P = P0;
  MOutOptions fast;  // convergence of the default rule is covered by tests
  fast.check_convergence = false;
  while (true) {
    const double rate = m_out_classical(P, par, model, fast);
    t += expo(rng) / rate;
    if (t >= t_max) break;
    P += sample_collision(P, par, model, rng);
    traj.events.push_back({t, P});
  }
  return traj;
}

std::vector<double> geometric_time_grid(double t_min, double t_max, int n) {
  if (!(t_min > 0) || !(t_max > t_min) || n < 2)
    throw std::invalid_argument("geometric_time_grid: need 0 < t_min < t_max and n >= 2");
  std::vector<double> grid(n);
  const double r = std::pow(t_max / t_min, 1.0 / (n - 1));
  double t = t_min;
  for (int i = 0; i < n; ++i, t *= r) grid[i] = t;
  grid.back() = t_max;
  return grid;
}

namespace {

struct Accumulator {
  // per-time sums over trajectories
  std::vector<Vec3> sum_P;
  std::vector<std::array<double, 6>> sum_PP;  // xx yy zz xy xz yz
  std::vector<double> sum_E, sum_E2;

  explicit Accumulator(std::size_t nt)
      : sum_P(nt), sum_PP(nt, {0, 0, 0, 0, 0, 0}), sum_E(nt, 0.0), sum_E2(nt, 0.0) {}

  void add(std::size_t i, const Vec3& P, double M) {
    sum_P[i] += P;
    auto& s = sum_PP[i];
    s[0] += P.x * P.x;
    s[1] += P.y * P.y;
    s[2] += P.z * P.z;
    s[3] += P.x * P.y;
    s[4] += P.x * P.z;
    s[5] += P.y * P.z;
    const double E = P.norm2() / (2.0 * M);
    sum_E[i] += E;
    sum_E2[i] += E * E;
  }

  void merge(const Accumulator& o) {
    for (std::size_t i = 0; i < sum_P.size(); ++i) {
      sum_P[i] += o.sum_P[i];
      for (int k = 0; k < 6; ++k) sum_PP[i][k] += o.sum_PP[i][k];
      sum_E[i] += o.sum_E[i];
      sum_E2[i] += o.sum_E2[i];
    }
  }
};

}  // namespace

EnsembleStats ensemble_moments(const InitialCondition& init, int n_traj,
                               const std::vector<double>& time_grid, const PhysicalParams& par,
                               const CrossSectionModel& model, std::uint64_t root_seed,
                               int n_workers) {
  if (n_traj < 2) throw std::invalid_argument("ensemble_moments: n_traj >= 2 required");
  if (time_grid.empty() || !std::is_sorted(time_grid.begin(), time_grid.end()))
    throw std::invalid_argument("ensemble_moments: time grid must be sorted and nonempty");
  par.validate();
  if (n_workers <= 0) n_workers = default_workers();

  const std::size_t nt = time_grid.size();
  const double t_max = time_grid.back() * (1.0 + 1e-12) + 1e-300;

  // fixed-size blocks reduced in block order: the float sums are independent
  // of the worker count
  constexpr int kBlock = 64;
  const int n_blocks = (n_traj + kBlock - 1) / kBlock;
  std::vector<Accumulator> block_acc(n_blocks, Accumulator(nt));

  parallel_for(n_blocks, n_workers, [&](std::size_t b0, std::size_t b1) {
    for (std::size_t b = b0; b < b1; ++b) {
      Accumulator& acc = block_acc[b];
      const int lo = static_cast<int>(b) * kBlock;
      const int hi = std::min(n_traj, lo + kBlock);
      for (int k = lo; k < hi; ++k) {
        auto rng = derive_stream(root_seed, static_cast<std::uint64_t>(k));
        Vec3 P0 = init.P0;
        if (init.kind == InitialCondition::Kind::MaxwellTracer) {
          std::normal_distribution<double> g(0.0, std::sqrt(par.M * par.T));
          P0 = {g(rng), g(rng), g(rng)};
        }
        const Trajectory traj = simulate_trajectory(P0, t_max, par, model, rng);
        std::size_t ev = 0;
        for (std::size_t i = 0; i < nt; ++i) {
          while (ev + 1 < traj.events.size() && traj.events[ev + 1].t <= time_grid[i]) ++ev;
          acc.add(i, traj.events[ev].P, par.M);
        }
      }
    }
  });

  Accumulator total(nt);
  for (const auto& acc : block_acc) total.merge(acc);

  EnsembleStats out;
  out.t = time_grid;
  out.n_traj = n_traj;
  out.root_seed = root_seed;
  out.mean_P.resize(nt);
  out.mean_E.resize(nt);
  out.cov_P.resize(nt);
  out.se_P.resize(nt);
  out.se_E.resize(nt);
  const double n = n_traj;
  for (std::size_t i = 0; i < nt; ++i) {
    const Vec3 mp = total.sum_P[i] / n;
    out.mean_P[i] = mp;
    out.mean_E[i] = total.sum_E[i] / n;
    const auto& s = total.sum_PP[i];
    const double c = n / (n - 1.0);
    out.cov_P[i] = {c * (s[0] / n - mp.x * mp.x), c * (s[1] / n - mp.y * mp.y),
                    c * (s[2] / n - mp.z * mp.z), c * (s[3] / n - mp.x * mp.y),
                    c * (s[4] / n - mp.x * mp.z), c * (s[5] / n - mp.y * mp.z)};
    out.se_P[i] = {std::sqrt(std::max(0.0, out.cov_P[i][0]) / n),
                   std::sqrt(std::max(0.0, out.cov_P[i][1]) / n),
                   std::sqrt(std::max(0.0, out.cov_P[i][2]) / n)};
    const double varE = c * (total.sum_E2[i] / n - out.mean_E[i] * out.mean_E[i]);
    out.se_E[i] = std::sqrt(std::max(0.0, varE) / n);
  }
  return out;
}

}  // namespace qlb
