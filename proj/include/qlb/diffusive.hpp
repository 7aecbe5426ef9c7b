#pragma once

#include <vector>

#include "qlb/params.hpp"

namespace qlb {

// Brownian-limit transport coefficients.  D_pp obeys the fluctuation-
// dissipation relation and D_xx sits at the minimal value compatible with a
// completely positive generator, 16 D_pp D_xx = eta^2 hbar^2.
struct DiffusionCoefficients {
  double eta;   // momentum friction rate
  double D_pp;  // momentum diffusion
  double D_xx;  // position diffusion
  bool mass_ratio_warning = false;  // set when m/M exceeds the validity bound
};

DiffusionCoefficients coefficients(const PhysicalParams& par);

// Independent evaluation of eta from its unreduced double integral (radial
// momentum-transfer integral times the transverse-plane average of mu_beta),
// constant cross-section only.
double eta_by_quadrature(const PhysicalParams& par);

// One spatial and one momentum axis; X is periodic on [x_min, x_max), P uses
// zero-flux walls.  X nodes sit at x_min + i dx, P nodes at cell centers.
struct PhaseSpaceGrid {
  double x_min, x_max;
  double p_min, p_max;
  int nx, np;

  double dx() const { return (x_max - x_min) / nx; }
  double dp() const { return (p_max - p_min) / np; }
  double x(int i) const { return x_min + i * dx(); }
  double p(int j) const { return p_min + (j + 0.5) * dp(); }
};

struct WignerField {
  PhaseSpaceGrid grid;
  std::vector<double> w;  // row-major, w[ix * np + ip]
  double time = 0.0;

  double mass() const;
};

// Normalized Gaussian initial datum.
WignerField gaussian_wigner(const PhaseSpaceGrid& grid, double x0, double p0, double var_x,
                            double var_p, double cov_xp = 0.0);

struct FPOptions {
  double dt = 0.0;  // <= 0 selects an automatic step
  bool free_streaming = true;
};

// Kramers equation with the quantum position-diffusion term:
//   dW/dt = -(P/M) dW/dX + eta d(P W)/dP + D_pp d2W/dP2 + D_xx d2W/dX2.
// Strang splitting: spectral X step (exact advection and X diffusion),
// Chang-Cooper Crank-Nicolson P step (mass conservative; the discrete Maxwell
// distribution is exactly stationary).
WignerField evolve_quantum_fp(const WignerField& W0, double t_final,
                              const DiffusionCoefficients& coeffs, double M,
                              const FPOptions& opts = {});

// Same operator with D_xx = 0.
WignerField evolve_classical_fp(const WignerField& W0, double t_final,
                                const DiffusionCoefficients& coeffs, double M,
                                const FPOptions& opts = {});

struct PhaseSpaceMoments {
  double mean_x = 0.0, mean_p = 0.0;
  double var_x = 0.0, var_p = 0.0, cov_xp = 0.0;
};

PhaseSpaceMoments field_moments(const WignerField& W);

// Closed-form solution of the linear moment system
//   d<p> = -eta <p>,      d Var(p) = -2 eta Var(p) + 2 D_pp,
//   d Cov = Var(p)/M - eta Cov,    d Var(x) = 2 Cov/M + 2 D_xx,
// used as the oracle for both solvers.  quantum=false drops D_xx;
// free_streaming=false drops the /M couplings.
PhaseSpaceMoments gaussian_moment_oracle(const PhaseSpaceMoments& initial, double t,
                                         const DiffusionCoefficients& coeffs, double M,
                                         bool quantum, bool free_streaming = true);

}  // namespace qlb
