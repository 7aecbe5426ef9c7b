#pragma once

#include <cmath>
#include <stdexcept>

#include "qlb/vec3.hpp"

namespace qlb {

// Microscopic input: gas mass m, tracer mass M, temperature T (k_B = 1 in
// program units), gas number density, total cross-section and hbar.
// Immutable after construction; all derived quantities are pure functions.
struct PhysicalParams {
  double m = 1.0;          // gas-particle mass
  double M = 1.0;          // tracer mass
  double T = 1.0;          // temperature, k_B T in energy units
  double n_gas = 1.0;      // number density
  double sigma_tot = 1.0;  // total cross-section
  double hbar = 1.0;       // action scale

  double beta() const { return 1.0 / T; }
  double mass_ratio() const { return m / M; }

  void validate() const {
    if (!(m > 0) || !(M > 0) || !(T > 0) || !(sigma_tot > 0) || !(hbar > 0))
      throw std::invalid_argument("PhysicalParams: m, M, T, sigma_tot, hbar must be positive");
    if (!(n_gas >= 0)) throw std::invalid_argument("PhysicalParams: n_gas must be nonnegative");
  }
};

// Mass-ratio threshold above which diffusive-limit results carry a validity
// warning.  The expansion requires m/M << 1; 0.1 keeps first-order mass-ratio
// corrections at the ten-percent level.
inline constexpr double kDiffusiveMassRatioLimit = 0.1;

struct DerivedScales {
  double p_beta;         // most probable gas momentum sqrt(2m/beta)
  double v_beta;         // p_beta / m
  double m_star;         // reduced mass mM/(M+m)
  double lambda_th;      // tracer thermal de Broglie wavelength
  double lambda_th_gas;  // gas thermal de Broglie wavelength
};

inline DerivedScales derive_scales(const PhysicalParams& p) {
  p.validate();
  DerivedScales s{};
  s.p_beta = std::sqrt(2.0 * p.m * p.T);
  s.v_beta = s.p_beta / p.m;
  s.m_star = p.m * p.M / (p.M + p.m);
  const double two_pi = 2.0 * M_PI;
  s.lambda_th = std::sqrt(two_pi * p.hbar * p.hbar / (p.M * p.T));
  s.lambda_th_gas = std::sqrt(two_pi * p.hbar * p.hbar / (p.m * p.T));
  return s;
}

// rel(p, P) = (m*/m) p - (m*/M) P, the relative momentum of a gas particle p
// and the tracer P.
inline Vec3 rel(const Vec3& p, const Vec3& P, const PhysicalParams& par) {
  const double m_star = par.m * par.M / (par.M + par.m);
  return p * (m_star / par.m) - P * (m_star / par.M);
}

// Maxwell-Boltzmann momentum density of the gas, normalized over R^3.
inline double maxwell_boltzmann(const Vec3& p, const PhysicalParams& par) {
  const double pb2 = 2.0 * par.m * par.T;
  return std::exp(-p.norm2() / pb2) / (std::pow(M_PI, 1.5) * pb2 * std::sqrt(pb2));
}

// Maxwell-Boltzmann density at tracer mass M (the equilibrium state).
inline double maxwell_boltzmann_tracer(const Vec3& P, const PhysicalParams& par) {
  const double pb2 = 2.0 * par.M * par.T;
  return std::exp(-P.norm2() / pb2) / (std::pow(M_PI, 1.5) * pb2 * std::sqrt(pb2));
}

}  // namespace qlb
