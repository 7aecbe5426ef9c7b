#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "doctest.h"
#include "qlb/errors.hpp"
#include "qlb/qlbe_grid.hpp"
#include "qlb/quadrature.hpp"
#include "qlb/rates.hpp"

using namespace qlb;
using cplx = std::complex<double>;

namespace {

PhysicalParams params(double m, double M, double T = 1.0) {
  PhysicalParams par;
  par.m = m;
  par.M = M;
  par.T = T;
  par.n_gas = 1.0;
  par.sigma_tot = 1.0;
  par.hbar = 1.0;
  return par;
}

CoherenceSlice random_slice(const MomentumGrid3D& g, const Vec3& K, unsigned seed,
                            bool real_positive = false) {
  CoherenceSlice s;
  s.grid = g;
  s.K = K;
  s.values.resize(g.size());
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(real_positive ? 0.1 : -1.0, 1.0);
  for (auto& v : s.values) v = real_positive ? cplx(u(rng), 0.0) : cplx(u(rng), u(rng));
  return s;
}

// Thermal average of the total loss rate, by radial Gauss-Legendre quadrature
// against the tracer Maxwell-Boltzmann weight (isotropic integrand).
double thermal_m_out(const PhysicalParams& par) {
  const auto rule = gauss_legendre(96, 0.0, 8.0 * std::sqrt(par.M * par.T));
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double P = rule.nodes[i];
    const double w = rule.weights[i] * P * P * std::exp(-P * P / (2.0 * par.M * par.T));
    num += w * m_out_classical({P, 0.0, 0.0}, par, CrossSectionModel::constant());
    den += w;
  }
  return num / den;
}

}  // namespace

TEST_CASE("grid construction and validation") {
  const PhysicalParams par = params(0.5, 1.0);
  const MomentumGrid3D g = make_momentum_grid(par, 15);
  const double floor_ = 5.0 * std::max(derive_scales(par).p_beta, std::sqrt(par.M * par.T));
  CHECK(g.p_max == doctest::Approx(floor_).epsilon(1e-14));
  CHECK(g.coord(7) == 0.0);  // origin is a node
  CHECK(g.coord(0) == -g.p_max);
  CHECK(g.coord(14) == g.p_max);
  CHECK_THROWS_AS(make_momentum_grid(par, 14), ConfigError);
  CHECK_THROWS_AS(make_momentum_grid(par, 3), ConfigError);
  CHECK_THROWS_AS(make_momentum_grid(par, 15, 0.5 * floor_), ConfigError);
  // strict resolution bar: at the minimal extent the 15-node grid is coarse
  const CoherenceSlice s = maxwell_slice(g, {0, 0, 0}, par);
  CHECK_THROWS_AS(apply_generator(s, par, CrossSectionModel::constant(), {}), ConfigError);
}

TEST_CASE("population-sector trace is conserved exactly") {
  const PhysicalParams par = params(0.2, 1.0);
  const MomentumGrid3D g = make_momentum_grid(par, 11);
  const CoherenceSlice s = random_slice(g, {0, 0, 0}, 77, true);
  GeneratorOptions opts;
  opts.allow_coarse = true;
  const CoherenceSlice d = apply_generator(s, par, CrossSectionModel::constant(), opts);
  // scale: total gain+loss throughput, so the check is relative
  double scale = 0.0;
  for (const auto& v : d.values) scale += std::abs(v);
  scale *= std::pow(g.dp(), 3);
  CHECK(std::abs(d.trace()) < 1e-12 * scale);
  // populations stay real
  for (const auto& v : d.values) CHECK(v.imag() == 0.0);
}

TEST_CASE("generator is linear") {
  const PhysicalParams par = params(0.2, 1.0);
  const MomentumGrid3D g = make_momentum_grid(par, 7);
  const Vec3 K{0.3, -0.1, 0.5};
  GeneratorOptions opts;
  opts.allow_coarse = true;
  const CoherenceSlice a = random_slice(g, K, 1);
  const CoherenceSlice b = random_slice(g, K, 2);
  const cplx ca(0.7, -1.3), cb(-0.4, 0.9);
  CoherenceSlice comb = a;
  for (std::size_t i = 0; i < comb.values.size(); ++i)
    comb.values[i] = ca * a.values[i] + cb * b.values[i];
  const auto da = apply_generator(a, par, CrossSectionModel::constant(), opts);
  const auto db = apply_generator(b, par, CrossSectionModel::constant(), opts);
  const auto dc = apply_generator(comb, par, CrossSectionModel::constant(), opts);
  for (std::size_t i = 0; i < dc.values.size(); ++i)
    CHECK(std::abs(dc.values[i] - (ca * da.values[i] + cb * db.values[i])) < 1e-12);
}

TEST_CASE("hermiticity: conjugate field at -K evolves to the conjugate") {
  const PhysicalParams par = params(0.2, 1.0);
  const MomentumGrid3D g = make_momentum_grid(par, 7);
  const Vec3 K{0.4, 0.2, -0.6};
  GeneratorOptions opts;
  opts.allow_coarse = true;
  CoherenceSlice a = random_slice(g, K, 5);
  a.include_free_phase = true;
  CoherenceSlice ac = a;
  ac.K = K * -1.0;
  for (auto& v : ac.values) v = std::conj(v);
  const auto da = apply_generator(a, par, CrossSectionModel::constant(), opts);
  const auto dac = apply_generator(ac, par, CrossSectionModel::constant(), opts);
  for (std::size_t i = 0; i < da.values.size(); ++i)
    CHECK(std::abs(dac.values[i] - std::conj(da.values[i])) < 1e-12);
}

TEST_CASE("single-node field matches the kernel functions directly") {
  const PhysicalParams par = params(0.3, 1.0);
  const MomentumGrid3D g = make_momentum_grid(par, 5);
  const Vec3 K{0.5, 0.0, -0.3};
  CoherenceSlice s;
  s.grid = g;
  s.K = K;
  s.values.assign(g.size(), 0.0);
  const int si = 1, sj = 3, sk = 2;
  const cplx amp(0.8, -0.4);
  s.values[g.index(si, sj, sk)] = amp;
  GeneratorOptions opts;
  opts.allow_coarse = true;
  const auto d = apply_generator(s, par, CrossSectionModel::constant(), opts);
  const Vec3 S = g.node(si, sj, sk);
  const double dp3 = std::pow(g.dp(), 3);
  const auto model = CrossSectionModel::constant();
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int k = 0; k < g.n; ++k) {
        const Vec3 T = g.node(i, j, k);
        cplx ref = 0.0;
        if (i != si || j != sj || k != sk) {
          const Vec3 Q = T - S;
          ref = m_in_quantum(T + K / 2.0, T - K / 2.0, Q, par, model) * amp * dp3;
        } else {
          // loss: half-sum of the two classical branch rates, summed over
          // grid-representable transfers away from S
          double loss = 0.0;
          for (int a = 0; a < g.n; ++a)
            for (int b = 0; b < g.n; ++b)
              for (int c = 0; c < g.n; ++c) {
                if (a == si && b == sj && c == sk) continue;
                const Vec3 R = g.node(a, b, c) - S;
                loss += 0.5 * (m_in_classical(S + K / 2.0 + R, R, par, model) +
                               m_in_classical(S - K / 2.0 + R, R, par, model));
              }
          ref = -loss * amp * dp3;
        }
        CHECK(std::abs(d.values[g.index(i, j, k)] - ref) < 1e-12);
      }
}

TEST_CASE("thermal state is stationary at every resolution") {
  // the pairwise gain/loss symmetrization satisfies detailed balance termwise,
  // so the discrete Maxwell state is stationary to roundoff, not merely in the
  // refinement limit
  const PhysicalParams par = params(0.155, 1.0);
  const double mo = thermal_m_out(par);
  for (int n : {11, 15, 21}) {
    const MomentumGrid3D g = make_momentum_grid(par, n);
    const CoherenceSlice s = maxwell_slice(g, {0, 0, 0}, par);
    GeneratorOptions opts;
    opts.allow_coarse = true;
    const auto d = apply_generator(s, par, CrossSectionModel::constant(), opts);
    CHECK(d.l1_norm() < 1e-12 * mo);  // L1 of d rho/dt, rho L1-normalized
  }
}

TEST_CASE("population relaxation keeps trace, realness and positivity") {
  const PhysicalParams par = params(0.2, 1.0);
  const MomentumGrid3D g = make_momentum_grid(par, 11);
  // off-center thermal-width bump
  CoherenceSlice s;
  s.grid = g;
  s.K = {0, 0, 0};
  s.values.resize(g.size());
  double sum = 0.0;
  const double w2 = par.M * par.T;
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int k = 0; k < g.n; ++k) {
        const Vec3 P = g.node(i, j, k) - Vec3{0, 0, 1.5 * std::sqrt(par.M * par.T)};
        const double v = std::exp(-P.norm2() / (2.0 * w2));
        s.values[g.index(i, j, k)] = v;
        sum += v;
      }
  const double dp3 = std::pow(g.dp(), 3);
  for (auto& v : s.values) v /= sum * dp3;
  GeneratorOptions opts;
  opts.allow_coarse = true;
  const double rate = m_out_classical({0, 0, 0}, par, CrossSectionModel::constant());
  const double corner_rate = m_out_classical({std::sqrt(3.0) * g.p_max, 0, 0}, par,
                                             CrossSectionModel::constant());
  const auto evolved = propagate_slice(s, 6.0 / rate, 0.09 / corner_rate, par,
                                       CrossSectionModel::constant(), opts);
  CHECK(std::abs(evolved.trace() - 1.0) < 1e-10);
  double pz0 = 0.0, pz1 = 0.0;
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int k = 0; k < g.n; ++k) {
        pz0 += g.coord(k) * s.values[g.index(i, j, k)].real();
        pz1 += g.coord(k) * evolved.values[g.index(i, j, k)].real();
      }
  CHECK(pz1 < 0.5 * pz0);  // mean momentum decays toward zero
  CHECK(pz1 > -0.05 * pz0);
  for (const auto& v : evolved.values) {
    CHECK(std::abs(v.imag()) < 1e-14);
    CHECK(v.real() > -1e-10);
  }
}

TEST_CASE("propagation rejects an unstable time step") {
  const PhysicalParams par = params(0.2, 1.0);
  const MomentumGrid3D g = make_momentum_grid(par, 7);
  CoherenceSlice s = maxwell_slice(g, {0, 0, 0}, par);
  GeneratorOptions opts;
  opts.allow_coarse = true;
  CHECK_THROWS_AS(propagate_slice(s, 10.0, 10.0, par, CrossSectionModel::constant(), opts),
                  ConfigError);
  CHECK_THROWS_AS(propagate_slice(s, 1.0, -0.1, par, CrossSectionModel::constant(), opts),
                  std::invalid_argument);
}

TEST_CASE("coherence decay rate: zero at K = 0, monotone, saturating") {
  const PhysicalParams par = params(0.155, 1.0);
  const double p_beta = derive_scales(par).p_beta;
  const double mo = thermal_m_out(par);
  CHECK(std::abs(coherence_decay_rate({0, 0, 0}, par)) < 1e-8);
  double prev = 0.0;
  std::vector<double> rates;
  for (double f : {1.0, 2.0, 4.0, 8.0, 20.0}) {
    const double r = coherence_decay_rate({0, 0, f * p_beta}, par);
    CHECK(r > prev);
    prev = r;
    rates.push_back(r);
  }
  // far regime: localization rate approaches the thermal collision rate
  CHECK(std::abs(rates.back() / mo - 1.0) < 0.05);
  // near regime stays far below saturation
  CHECK(rates.front() < 0.01 * mo);
}

TEST_CASE("decay rate regression pin") {
  const PhysicalParams par = params(0.155, 1.0);
  const double p_beta = derive_scales(par).p_beta;
  const double r = coherence_decay_rate({0, 0, p_beta}, par);
  CHECK(r == doctest::Approx(0.0158544830730305).epsilon(1e-9));
}
