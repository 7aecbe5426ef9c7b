#pragma once

#include <complex>
#include <functional>
#include <random>
#include <utility>
#include <vector>

#include "qlb/params.hpp"
#include "qlb/vec3.hpp"

namespace qlb {

// Differential cross-section model.  Constant: |f|^2 = sigma_tot/4pi.
// Born: |f_B(-Q, 0)|^2 supplied as a function of the momentum-transfer
// magnitude (the Born amplitude depends only on the transferred momentum).
class CrossSectionModel {
 public:
  enum class Kind { Constant, Born };

  static CrossSectionModel constant() { return CrossSectionModel(Kind::Constant, {}); }
  static CrossSectionModel born(std::function<double(double)> f2);
  // Tabulated (Q, |f_B|^2) pairs with linear interpolation, clamped at the ends.
  static CrossSectionModel born_table(std::vector<std::pair<double, double>> table);

  Kind kind() const { return kind_; }

  // |f|^2 for momentum-transfer magnitude q_mag.
  double f2(double q_mag, const PhysicalParams& par) const;

 private:
  CrossSectionModel(Kind k, std::function<double(double)> f2) : kind_(k), born_f2_(std::move(f2)) {}
  Kind kind_;
  std::function<double(double)> born_f2_;
};

// Classical in-rate density M_in^cl(P; Q): rate density of ending at momentum
// P after a gain Q.  Constant model evaluates the plane-integrated Gaussian in
// closed form; the Born model integrates over the Q-perpendicular plane
// numerically.  Throws std::domain_error at Q = 0.
double m_in_classical(const Vec3& P, const Vec3& Q, const PhysicalParams& par,
                      const CrossSectionModel& model);

// Complex in-rate density M_in(P, P'; Q) of the momentum-representation
// generator.  Hermitian in (P, P'); equals m_in_classical on the diagonal.
std::complex<double> m_in_quantum(const Vec3& P, const Vec3& Pprime, const Vec3& Q,
                                  const PhysicalParams& par, const CrossSectionModel& model);

struct MOutOptions {
  int n_radial = 64;
  int n_angular = 32;
  // When set, the quadrature is repeated at 1.5x resolution and the two
  // values must agree to rel_tol, else NumericError.
  bool check_convergence = false;
  double rel_tol = 1e-6;
};

// Total loss rate M_out^cl(P) = int dQ M_in^cl(P+Q; Q), by radial-angular
// Gauss-Legendre quadrature with the radial interval bounded away from the
// integrable Q = 0 singularity.
double m_out_classical(const Vec3& P, const PhysicalParams& par, const CrossSectionModel& model,
                       const MOutOptions& opts = {});

// Effective cross-section sigma~(P_perp, Q): the Q-perpendicular plane average
// of mu_beta against the differential cross-section.  P_perp must be
// perpendicular to Q (relative tolerance 1e-9).
double sigma_tilde(const Vec3& P_perp, const Vec3& Q, const PhysicalParams& par,
                   const CrossSectionModel& model);

// Exact sampler for the normalized transfer density
// M_in^cl(P+Q; Q) / M_out^cl(P), constant cross-section only.  Draws the gas
// momentum from the flux-weighted Maxwell-Boltzmann distribution by rejection
// and scatters isotropically on the elastic shell.
Vec3 sample_collision(const Vec3& P, const PhysicalParams& par, const CrossSectionModel& model,
                      std::mt19937_64& rng, Vec3* gas_momentum_out = nullptr);

}  // namespace qlb
