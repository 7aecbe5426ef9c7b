#include "qlb/moments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qlb/diffusive.hpp"
#include "qlb/ode.hpp"
#include "qlb/special.hpp"

namespace qlb {

namespace {

// Common relaxation-rate prefactor
//   n sigma/(4 pi) (16/3) sqrt(8 pi/(m beta)) (m*/M),
// which reduces to eta when m* -> m and carries all dimensional content.
double rate_prefactor(const PhysicalParams& par) {
  const DerivedScales d = derive_scales(par);
  return par.n_gas * par.sigma_tot / (4.0 * M_PI) * (16.0 / 3.0) *
         std::sqrt(8.0 * M_PI * par.T / par.m) * (d.m_star / par.M);
}

}  // namespace

Vec3 i1(const Vec3& U, const PhysicalParams& par) {
  par.validate();
  const double u2 = U.norm2();
  return U * (-rate_prefactor(par) * kummer_a(u2));
}

double i2(double u2, const PhysicalParams& par) {
  par.validate();
  if (u2 < 0) throw std::invalid_argument("i2: u2 must be nonnegative");
  const DerivedScales d = derive_scales(par);
  const double brace = u2 * kummer_a(u2) - 1.5 * (d.m_star / par.M) * kummer_b(u2);
  return -2.0 * rate_prefactor(par) * brace;
}

Vec3 momentum_rhs(const Vec3& P, const PhysicalParams& par) {
  par.validate();
  const DerivedScales d = derive_scales(par);
  const double scale = par.M * d.v_beta;
  return i1(P / scale, par) * scale;
}

double energy_rhs(double E, const PhysicalParams& par) {
  par.validate();
  if (E < 0) throw std::invalid_argument("energy_rhs: E must be nonnegative");
  const double u2 = E * par.m / (par.T * par.M);
  return (par.M * par.T / par.m) * i2(u2, par);
}

std::vector<MomentState> integrate_moments(const MomentState& initial,
                                           const std::vector<double>& time_grid,
                                           const PhysicalParams& par, MomentMode mode) {
  par.validate();
  if (initial.E < 0) throw std::invalid_argument("integrate_moments: E0 must be nonnegative");
  if (time_grid.empty() || time_grid.front() < 0 ||
      !std::is_sorted(time_grid.begin(), time_grid.end()))
    throw std::invalid_argument("integrate_moments: time grid must be increasing, nonnegative");

  const double eta = coefficients(par).eta;
  auto rhs = [&](double, const std::vector<double>& y, std::vector<double>& dy) {
    const Vec3 P{y[0], y[1], y[2]};
    const double E = std::max(0.0, y[3]);
    if (mode == MomentMode::Diffusive) {
      dy[0] = -eta * P.x;
      dy[1] = -eta * P.y;
      dy[2] = -eta * P.z;
      dy[3] = -2.0 * eta * (E - 1.5 * par.T);
    } else {
      const Vec3 dP = momentum_rhs(P, par);
      dy[0] = dP.x;
      dy[1] = dP.y;
      dy[2] = dP.z;
      dy[3] = energy_rhs(E, par);
    }
  };

  const double scale =
      std::max({initial.P.norm(), initial.E, 1.5 * par.T, par.M * derive_scales(par).v_beta});
  std::vector<double> y{initial.P.x, initial.P.y, initial.P.z, initial.E};
  std::vector<MomentState> out;
  out.reserve(time_grid.size());
  double t = 0.0;
  for (double t_next : time_grid) {
    if (t_next > t) {
      integrate_rk45(rhs, y, t, t_next, 1e-10, 1e-13 * scale);
      t = t_next;
    }
    out.push_back({{y[0], y[1], y[2]}, y[3]});
  }
  return out;
}

}  // namespace qlb
