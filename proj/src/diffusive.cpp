#include "qlb/diffusive.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <memory>
#include <stdexcept>

#include "qlb/errors.hpp"
#include "qlb/quadrature.hpp"

namespace qlb {

DiffusionCoefficients coefficients(const PhysicalParams& par) {
  par.validate();
  DiffusionCoefficients c;
  c.eta = (16.0 / 3.0) * par.n_gas * par.sigma_tot *
          std::sqrt(par.m * par.T / (2.0 * M_PI)) / par.M;
  c.D_pp = c.eta * par.M * par.T;
  const double r = par.hbar / (4.0 * par.M * par.T);
  c.D_xx = c.D_pp * r * r;
  c.mass_ratio_warning = par.mass_ratio() > kDiffusiveMassRatioLimit;
  return c;
}

double eta_by_quadrature(const PhysicalParams& par) {
  par.validate();
  const double beta = par.beta();
  const double p_beta = std::sqrt(2.0 * par.m / beta);
  // transverse-plane average of mu_beta by Gauss-Hermite, one Gaussian axis
  // integrated out analytically per node pair
  auto plane = [&](int n) {
    const QuadRule& gh = gauss_hermite(n);
    double s = 0.0;
    for (double wi : gh.weights)
      for (double wj : gh.weights) s += wi * wj;
    return s / (std::pow(M_PI, 1.5) * p_beta);
  };
  auto radial = [&](int n) {
    const double a = beta / (8.0 * par.m);
    const QuadRule rule = gauss_legendre(n, 0.0, 10.0 / std::sqrt(a));
    double s = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double q = rule.nodes[i];
      s += rule.weights[i] * q * q * q * std::exp(-a * q * q);
    }
    return s;
  };
  auto value = [&](int nr, int np_) {
    return (beta / (6.0 * par.M)) * (par.n_gas / par.m) * (par.sigma_tot / (4.0 * M_PI)) *
           4.0 * M_PI * radial(nr) * plane(np_);
  };
  const double v = value(96, 16);
  const double refined = value(144, 24);
  if (std::abs(v - refined) > 1e-8 * std::abs(refined))
    throw NumericError("eta_by_quadrature: quadrature not converged");
  return refined;
}

double WignerField::mass() const {
  double s = 0.0;
  for (double v : w) s += v;
  return s * grid.dx() * grid.dp();
}

WignerField gaussian_wigner(const PhaseSpaceGrid& grid, double x0, double p0, double var_x,
                            double var_p, double cov_xp) {
  if (grid.nx < 2 || grid.np < 2 || !(grid.x_max > grid.x_min) || !(grid.p_max > grid.p_min))
    throw std::invalid_argument("gaussian_wigner: malformed grid");
  const double det = var_x * var_p - cov_xp * cov_xp;
  if (!(det > 0)) throw std::invalid_argument("gaussian_wigner: covariance not positive definite");
  WignerField W;
  W.grid = grid;
  W.w.resize(static_cast<std::size_t>(grid.nx) * grid.np);
  for (int i = 0; i < grid.nx; ++i) {
    const double dx = grid.x(i) - x0;
    for (int j = 0; j < grid.np; ++j) {
      const double dp = grid.p(j) - p0;
      const double q = (var_p * dx * dx - 2.0 * cov_xp * dx * dp + var_x * dp * dp) / det;
      W.w[static_cast<std::size_t>(i) * grid.np + j] =
          std::exp(-0.5 * q) / (2.0 * M_PI * std::sqrt(det));
    }
  }
  // renormalize the discrete mass
  const double m0 = W.mass();
  for (double& v : W.w) v /= m0;
  return W;
}

namespace {

// Spectral X update over time tau: exact advection by p/M (if streaming) and
// exact X diffusion, both diagonal in Fourier space.  Periodic in X.
class SpectralX {
 public:
  SpectralX(int nx, double length)
      : nx_(nx),
        length_(length),
        buf_(fftw_alloc_complex(static_cast<std::size_t>(nx))),
        fwd_(fftw_plan_dft_1d(nx, buf_.get(), buf_.get(), FFTW_FORWARD, FFTW_ESTIMATE)),
        bwd_(fftw_plan_dft_1d(nx, buf_.get(), buf_.get(), FFTW_BACKWARD, FFTW_ESTIMATE)) {}

  void step_row(double* w, std::ptrdiff_t stride, double velocity, double d_xx, double tau) {
    for (int i = 0; i < nx_; ++i) {
      buf_.get()[i][0] = w[i * stride];
      buf_.get()[i][1] = 0.0;
    }
    fftw_execute(fwd_.get());
    for (int i = 0; i < nx_; ++i) {
      const int mode = (i <= nx_ / 2) ? i : i - nx_;
      const double k = 2.0 * M_PI * mode / length_;
      const double damp = std::exp(-d_xx * k * k * tau);
      std::complex<double> h;
      if (2 * i == nx_) {
        // The Nyquist mode has no Hermitian partner: any real multiplier other
        // than pure damping breaks the semigroup property and degrades the
        // splitting order, so it is damped but not advected.
        h = damp;
      } else {
        h = damp * std::exp(std::complex<double>(0.0, -k * velocity * tau));
      }
      const std::complex<double> v(buf_.get()[i][0], buf_.get()[i][1]);
      const std::complex<double> r = v * h;
      buf_.get()[i][0] = r.real();
      buf_.get()[i][1] = r.imag();
    }
    fftw_execute(bwd_.get());
    for (int i = 0; i < nx_; ++i) w[i * stride] = buf_.get()[i][0] / nx_;
  }

 private:
  struct FreeComplex {
    void operator()(fftw_complex* p) const { fftw_free(p); }
  };
  struct DestroyPlan {
    void operator()(fftw_plan_s* p) const { fftw_destroy_plan(p); }
  };
  int nx_;
  double length_;
  std::unique_ptr<fftw_complex, FreeComplex> buf_;
  std::unique_ptr<fftw_plan_s, DestroyPlan> fwd_, bwd_;
};

// Chang-Cooper exponential fitting weight: delta(a) = 1/a - 1/(e^a - 1).
double cc_delta(double a) {
  if (std::abs(a) < 1e-4) return 0.5 - a / 12.0;
  return 1.0 / a - 1.0 / std::expm1(a);
}

// Crank-Nicolson step of dw/dt = d(eta p w)/dp + D d2w/dp2 in flux form with
// zero-flux walls.  Conserves the column sum to roundoff and leaves the
// discrete Maxwell profile exp(-p^2 eta/(2D)) exactly stationary.
class ChangCooperP {
 public:
  ChangCooperP(const PhaseSpaceGrid& g, double eta, double d_pp, double dt)
      : np_(g.np), dt_(dt) {
    const double dp = g.dp();
    a_.resize(np_ - 1);
    b_.resize(np_ - 1);
    for (int j = 0; j + 1 < np_; ++j) {
      const double ph = 0.5 * (g.p(j) + g.p(j + 1));
      const double arg = eta * ph * dp / d_pp;
      const double del = cc_delta(arg);
      // flux G_{j+1/2} = a_j w_j + b_j w_{j+1}
      a_[j] = (eta * ph * del - d_pp / dp) / dp;
      b_[j] = (eta * ph * (1.0 - del) + d_pp / dp) / dp;
    }
    lower_.assign(np_, 0.0);
    diag_.assign(np_, 0.0);
    upper_.assign(np_, 0.0);
    for (int j = 0; j < np_; ++j) {
      double d = 0.0;
      if (j + 1 < np_) d += a_[j];
      if (j > 0) d -= b_[j - 1];
      diag_[j] = 1.0 - 0.5 * dt * d;
      if (j > 0) lower_[j] = -0.5 * dt * (-a_[j - 1]);
      if (j + 1 < np_) upper_[j] = -0.5 * dt * b_[j];
    }
    work_.resize(np_);
    rhs_.resize(np_);
  }

  void step_row(double* w, std::ptrdiff_t stride) {
    // explicit half
    for (int j = 0; j < np_; ++j) {
      double d = 0.0;
      if (j + 1 < np_) d += a_[j] * w[j * stride] + b_[j] * w[(j + 1) * stride];
      if (j > 0) d -= a_[j - 1] * w[(j - 1) * stride] + b_[j - 1] * w[j * stride];
      rhs_[j] = w[j * stride] + 0.5 * dt_ * d;
    }
    // Thomas solve of the implicit half
    double beta = diag_[0];
    w[0] = rhs_[0] / beta;
    for (int j = 1; j < np_; ++j) {
      work_[j] = upper_[j - 1] / beta;
      beta = diag_[j] - lower_[j] * work_[j];
      w[j * stride] = (rhs_[j] - lower_[j] * w[(j - 1) * stride]) / beta;
    }
    for (int j = np_ - 2; j >= 0; --j) w[j * stride] -= work_[j + 1] * w[(j + 1) * stride];
  }

 private:
  int np_;
  double dt_;
  std::vector<double> a_, b_, lower_, diag_, upper_, work_, rhs_;
};

WignerField evolve_fp(const WignerField& W0, double t_final, const DiffusionCoefficients& coeffs,
                      double M, const FPOptions& opts, double d_xx) {
  const PhaseSpaceGrid& g = W0.grid;
  if (g.nx < 2 || g.np < 3) throw ConfigError("evolve_fp: grid too small");
  if (W0.w.size() != static_cast<std::size_t>(g.nx) * g.np)
    throw std::invalid_argument("evolve_fp: field size does not match grid");
  if (!(M > 0) || !(coeffs.eta > 0) || !(coeffs.D_pp > 0))
    throw std::invalid_argument("evolve_fp: need positive M, eta, D_pp");
  if (!(t_final > W0.time)) throw std::invalid_argument("evolve_fp: t_final must exceed W0.time");
  const double sigma_p = std::sqrt(coeffs.D_pp / coeffs.eta);
  if (g.dp() > sigma_p / 8.0)
    throw ConfigError("evolve_fp: momentum grid must resolve the thermal width by 8 cells");
  // domain adequacy is enforced dynamically by the boundary-leakage check below

  double dt = opts.dt;
  const double horizon = t_final - W0.time;
  if (dt <= 0) dt = std::min(0.02 / coeffs.eta, horizon / 10.0);
  if (dt * coeffs.eta > 0.2)
    throw ConfigError("evolve_fp: time step exceeds the stability guard 0.2/eta");

  WignerField W = W0;
  const long n_steps = static_cast<long>(std::ceil(horizon / dt - 1e-12));
  SpectralX spectral(g.nx, g.x_max - g.x_min);
  const bool do_x = opts.free_streaming || d_xx > 0;
  ChangCooperP cc(g, coeffs.eta, coeffs.D_pp, dt);
  double t_done = 0.0;
  std::unique_ptr<ChangCooperP> last;
  for (long s = 0; s < n_steps; ++s) {
    double step = dt;
    ChangCooperP* pstep = &cc;
    if (s == n_steps - 1) {
      step = horizon - t_done;
      last = std::make_unique<ChangCooperP>(g, coeffs.eta, coeffs.D_pp, step);
      pstep = last.get();
    }
    if (do_x) {
      for (int j = 0; j < g.np; ++j) {
        const double v = opts.free_streaming ? g.p(j) / M : 0.0;
        spectral.step_row(W.w.data() + j, g.np, v, d_xx, 0.5 * step);
      }
    }
    for (int i = 0; i < g.nx; ++i)
      pstep->step_row(W.w.data() + static_cast<std::size_t>(i) * g.np, 1);
    if (do_x) {
      for (int j = 0; j < g.np; ++j) {
        const double v = opts.free_streaming ? g.p(j) / M : 0.0;
        spectral.step_row(W.w.data() + j, g.np, v, d_xx, 0.5 * step);
      }
    }
    t_done += step;
  }
  // boundary leakage monitor: probability pressed against the momentum walls
  double edge = 0.0;
  for (int i = 0; i < g.nx; ++i) {
    edge += std::abs(W.w[static_cast<std::size_t>(i) * g.np]);
    edge += std::abs(W.w[static_cast<std::size_t>(i) * g.np + g.np - 1]);
  }
  if (edge * g.dx() * g.dp() > 1e-6)
    throw NumericError("evolve_fp: momentum domain too small (boundary leakage)");
  W.time = t_final;
  return W;
}

}  // namespace

WignerField evolve_quantum_fp(const WignerField& W0, double t_final,
                              const DiffusionCoefficients& coeffs, double M,
                              const FPOptions& opts) {
  return evolve_fp(W0, t_final, coeffs, M, opts, coeffs.D_xx);
}

WignerField evolve_classical_fp(const WignerField& W0, double t_final,
                                const DiffusionCoefficients& coeffs, double M,
                                const FPOptions& opts) {
  return evolve_fp(W0, t_final, coeffs, M, opts, 0.0);
}

PhaseSpaceMoments field_moments(const WignerField& W) {
  const PhaseSpaceGrid& g = W.grid;
  double m0 = 0, mx = 0, mp = 0;
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.np; ++j) {
      const double v = W.w[static_cast<std::size_t>(i) * g.np + j];
      m0 += v;
      mx += v * g.x(i);
      mp += v * g.p(j);
    }
  mx /= m0;
  mp /= m0;
  double vx = 0, vp = 0, cxp = 0;
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.np; ++j) {
      const double v = W.w[static_cast<std::size_t>(i) * g.np + j];
      const double dx = g.x(i) - mx;
      const double dp = g.p(j) - mp;
      vx += v * dx * dx;
      vp += v * dp * dp;
      cxp += v * dx * dp;
    }
  return {mx, mp, vx / m0, vp / m0, cxp / m0};
}

PhaseSpaceMoments gaussian_moment_oracle(const PhaseSpaceMoments& initial, double t,
                                         const DiffusionCoefficients& coeffs, double M,
                                         bool quantum, bool free_streaming) {
  const double eta = coeffs.eta;
  const double d_pp = coeffs.D_pp;
  const double d_xx = quantum ? coeffs.D_xx : 0.0;
  const double e1 = std::exp(-eta * t);
  const double e2 = e1 * e1;
  PhaseSpaceMoments out;
  out.mean_p = initial.mean_p * e1;
  const double s_inf = d_pp / eta;
  const double ds = initial.var_p - s_inf;
  out.var_p = s_inf + ds * e2;
  if (!free_streaming) {
    out.mean_x = initial.mean_x;
    out.cov_xp = initial.cov_xp * e1;
    out.var_x = initial.var_x + 2.0 * d_xx * t;
    return out;
  }
  out.mean_x = initial.mean_x + initial.mean_p / (M * eta) * (1.0 - e1);
  // cov(t) = A + B e^{-2 eta t} + C e^{-eta t}
  const double A = s_inf / (M * eta);
  const double B = -ds / (M * eta);
  const double C = initial.cov_xp - A - B;
  out.cov_xp = A + B * e2 + C * e1;
  out.var_x = initial.var_x + 2.0 * d_xx * t +
              (2.0 / M) * (A * t + B * (1.0 - e2) / (2.0 * eta) + C * (1.0 - e1) / eta);
  return out;
}

}  // namespace qlb
