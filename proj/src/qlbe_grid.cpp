#include "qlb/qlbe_grid.hpp"

#include <cmath>
#include <stdexcept>

#include "qlb/errors.hpp"
#include "qlb/parallel.hpp"

namespace qlb {

MomentumGrid3D make_momentum_grid(const PhysicalParams& par, int n, double p_max) {
  par.validate();
  if (n < 5 || n % 2 == 0) throw ConfigError("make_momentum_grid: n must be odd and >= 5");
  const double floor_ = 5.0 * std::max(derive_scales(par).p_beta, std::sqrt(par.M * par.T));
  if (p_max <= 0.0) p_max = floor_;
  if (p_max < floor_ * (1.0 - 1e-12))
    throw ConfigError("make_momentum_grid: extent below 5 max(p_beta, sqrt(M T))");
  return {p_max, n};
}

std::complex<double> CoherenceSlice::trace() const {
  std::complex<double> s = 0.0;
  for (const auto& v : values) s += v;
  const double dp = grid.dp();
  return s * (dp * dp * dp);
}

double CoherenceSlice::l1_norm() const {
  double s = 0.0;
  for (const auto& v : values) s += std::abs(v);
  const double dp = grid.dp();
  return s * (dp * dp * dp);
}

CoherenceSlice maxwell_slice(const MomentumGrid3D& grid, const Vec3& K,
                             const PhysicalParams& par) {
  par.validate();
  CoherenceSlice s;
  s.grid = grid;
  s.K = K;
  s.values.resize(grid.size());
  double sum = 0.0;
  for (int i = 0; i < grid.n; ++i)
    for (int j = 0; j < grid.n; ++j)
      for (int k = 0; k < grid.n; ++k) {
        const double w = std::exp(-grid.node(i, j, k).norm2() / (2.0 * par.M * par.T));
        s.values[grid.index(i, j, k)] = w;
        sum += w;
      }
  const double dp3 = std::pow(grid.dp(), 3);
  for (auto& v : s.values) v /= sum * dp3;
  return s;
}

namespace {

// Constant-model classical gain kernel, inlined for the hot pair loop:
// m_in_classical with the prefactor and Gaussian evaluated directly.
struct KernelContext {
  double m, M, m_star, p_beta2, pref_sigma;  // pref_sigma = n m sigma/(4 pi m*^2)
  double inv_sqrt_pi_pbeta;

  explicit KernelContext(const PhysicalParams& par) {
    m = par.m;
    M = par.M;
    m_star = par.m * par.M / (par.M + par.m);
    p_beta2 = 2.0 * par.m * par.T;
    pref_sigma = par.n_gas * par.m * par.sigma_tot / (4.0 * M_PI * m_star * m_star);
    inv_sqrt_pi_pbeta = 1.0 / (std::sqrt(M_PI) * std::sqrt(p_beta2));
  }

  // parallel shift for arrival momentum P via transfer Q (pre-collision P - Q)
  double shift(const Vec3& P, const Vec3& Q, double q_mag) const {
    return (m / m_star) * 0.5 * q_mag + (m / M) * ((P - Q).dot(Q) / q_mag);
  }

  double classical(const Vec3& P, const Vec3& Q, double q_mag) const {
    const double s = shift(P, Q, q_mag);
    return pref_sigma / q_mag * std::exp(-s * s / p_beta2) * inv_sqrt_pi_pbeta;
  }

  double quantum(const Vec3& P1, const Vec3& P2, const Vec3& Q, double q_mag) const {
    const double s1 = shift(P1, Q, q_mag);
    const double s2 = shift(P2, Q, q_mag);
    return pref_sigma / q_mag * std::exp(-0.5 * (s1 * s1 + s2 * s2) / p_beta2) *
           inv_sqrt_pi_pbeta;
  }
};

}  // namespace

CoherenceSlice apply_generator(const CoherenceSlice& slice, const PhysicalParams& par,
                               const CrossSectionModel& model, const GeneratorOptions& opts) {
  par.validate();
  if (model.kind() != CrossSectionModel::Kind::Constant)
    throw std::invalid_argument("apply_generator: constant cross-section model required");
  const MomentumGrid3D& g = slice.grid;
  if (slice.values.size() != g.size())
    throw std::invalid_argument("apply_generator: field size does not match grid");
  const double p_beta = derive_scales(par).p_beta;
  if (!opts.allow_coarse && g.dp() > 0.5 * p_beta * (1.0 + 1e-12))
    throw ConfigError("apply_generator: grid spacing above p_beta/2 (set allow_coarse to override)");

  const KernelContext ctx(par);
  const Vec3 half_k = slice.K / 2.0;
  const double dp3 = std::pow(g.dp(), 3);
  const int n = g.n;
  const double phase_scale = slice.include_free_phase ? 1.0 / (par.hbar * par.M) : 0.0;

  CoherenceSlice out;
  out.grid = g;
  out.K = slice.K;
  out.include_free_phase = slice.include_free_phase;
  out.time = slice.time;
  out.values.assign(g.size(), 0.0);

  const int n_workers = opts.n_workers > 0 ? opts.n_workers : default_workers();
  parallel_for(g.size(), n_workers, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t t = lo; t < hi; ++t) {
      const int ti = static_cast<int>(t) / (n * n);
      const int tj = (static_cast<int>(t) / n) % n;
      const int tk = static_cast<int>(t) % n;
      const Vec3 T = g.node(ti, tj, tk);
      std::complex<double> gain = 0.0;
      double loss = 0.0;
      for (int si = 0; si < n; ++si)
        for (int sj = 0; sj < n; ++sj)
          for (int sk = 0; sk < n; ++sk) {
            if (si == ti && sj == tj && sk == tk) continue;  // Q = 0 excluded
            const Vec3 S = g.node(si, sj, sk);
            const Vec3 Q = T - S;  // transfer arriving at T from S
            const double q_mag = Q.norm();
            gain += ctx.quantum(T + half_k, T - half_k, Q, q_mag) *
                    slice.values[g.index(si, sj, sk)];
            // loss uses the reverse transfer R = S - T leaving T; pairing it
            // with the gain sum makes the K = 0 trace derivative vanish
            const Vec3 R = S - T;
            const double r_mag = q_mag;
            loss += 0.5 * (ctx.classical(S + half_k, R, r_mag) +
                           ctx.classical(S - half_k, R, r_mag));
          }
      std::complex<double> d = (gain - loss * slice.values[t]) * dp3;
      if (slice.include_free_phase)
        d -= std::complex<double>(0.0, T.dot(slice.K) * phase_scale) * slice.values[t];
      out.values[t] = d;
    }
  });
  return out;
}

CoherenceSlice propagate_slice(const CoherenceSlice& slice, double t_final, double dt,
                               const PhysicalParams& par, const CrossSectionModel& model,
                               const GeneratorOptions& opts) {
  par.validate();
  if (!(dt > 0) || !(t_final > slice.time))
    throw std::invalid_argument("propagate_slice: need dt > 0 and t_final > slice.time");
  // stability bar from the stiffest (corner) loss rate
  const MomentumGrid3D& g = slice.grid;
  const double corner = std::sqrt(3.0) * g.p_max + 0.5 * slice.K.norm();
  const double max_loss = m_out_classical({corner, 0.0, 0.0}, par, model);
  if (max_loss > 0 && dt > 0.1 / max_loss)
    throw ConfigError("propagate_slice: dt above 0.1 / max loss rate");

  CoherenceSlice y = slice;
  const double horizon = t_final - slice.time;
  const long n_steps = static_cast<long>(std::ceil(horizon / dt - 1e-12));
  auto axpy = [](CoherenceSlice& a, const CoherenceSlice& b, double c) {
    for (std::size_t i = 0; i < a.values.size(); ++i) a.values[i] += c * b.values[i];
  };
  double done = 0.0;
  for (long s = 0; s < n_steps; ++s) {
    const double h = (s == n_steps - 1) ? horizon - done : dt;
    const CoherenceSlice k1 = apply_generator(y, par, model, opts);
    CoherenceSlice y2 = y;
    axpy(y2, k1, 0.5 * h);
    const CoherenceSlice k2 = apply_generator(y2, par, model, opts);
    CoherenceSlice y3 = y;
    axpy(y3, k2, 0.5 * h);
    const CoherenceSlice k3 = apply_generator(y3, par, model, opts);
    CoherenceSlice y4 = y;
    axpy(y4, k3, h);
    const CoherenceSlice k4 = apply_generator(y4, par, model, opts);
    axpy(y, k1, h / 6.0);
    axpy(y, k2, h / 3.0);
    axpy(y, k3, h / 3.0);
    axpy(y, k4, h / 6.0);
    done += h;
  }
  y.time = t_final;
  return y;
}

double coherence_decay_rate(const Vec3& K, const PhysicalParams& par,
                            const CrossSectionModel& model, int n, int n_workers) {
  const MomentumGrid3D g = make_momentum_grid(par, n);
  const CoherenceSlice rho = maxwell_slice(g, K, par);
  GeneratorOptions opts;
  opts.allow_coarse = true;  // diagnostic runs on the default (coarse) ladder
  opts.n_workers = n_workers;
  const CoherenceSlice d = apply_generator(rho, par, model, opts);
  // d/dt of the L1 norm at t = 0
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < rho.values.size(); ++i) {
    const double mag = std::abs(rho.values[i]);
    if (mag == 0.0) continue;
    num += (rho.values[i].real() * d.values[i].real() +
            rho.values[i].imag() * d.values[i].imag()) /
           mag;
    den += mag;
  }
  return -num / den;
}

}  // namespace qlb
