#include "qlb/rates.hpp"

#include <algorithm>
#include <cmath>

#include "qlb/errors.hpp"
#include "qlb/quadrature.hpp"

namespace qlb {

CrossSectionModel CrossSectionModel::born(std::function<double(double)> f2) {
  if (!f2) throw std::invalid_argument("CrossSectionModel::born: empty kernel");
  return CrossSectionModel(Kind::Born, std::move(f2));
}

CrossSectionModel CrossSectionModel::born_table(std::vector<std::pair<double, double>> table) {
  if (table.size() < 2) throw std::invalid_argument("born_table: need at least two points");
  std::sort(table.begin(), table.end());
  for (const auto& [q, v] : table)
    if (v < 0) throw std::invalid_argument("born_table: kernel values must be nonnegative");
  auto interp = [tab = std::move(table)](double q) {
    if (q <= tab.front().first) return tab.front().second;
    if (q >= tab.back().first) return tab.back().second;
    auto hi = std::upper_bound(tab.begin(), tab.end(), std::make_pair(q, 0.0),
                               [](const auto& a, const auto& b) { return a.first < b.first; });
    auto lo = hi - 1;
    const double t = (q - lo->first) / (hi->first - lo->first);
    return (1.0 - t) * lo->second + t * hi->second;
  };
  return CrossSectionModel(Kind::Born, interp);
}

double CrossSectionModel::f2(double q_mag, const PhysicalParams& par) const {
  if (kind_ == Kind::Constant) return par.sigma_tot / (4.0 * M_PI);
  return born_f2_(q_mag);
}

namespace {

// Parallel shift of the mu_beta argument appearing in the rate kernels:
// s = (m/m*)(Q/2) + (m/M) (P_pre . Qhat), with P_pre the pre-collision tracer
// momentum.
double parallel_shift(const Vec3& P_pre, const Vec3& Q, double q_mag, const PhysicalParams& par) {
  const double m_star = par.m * par.M / (par.M + par.m);
  return (par.m / m_star) * 0.5 * q_mag + (par.m / par.M) * (P_pre.dot(Q) / q_mag);
}

// n m /(m*^2 Q), the kernel prefactor before the cross-section and the plane
// integral of mu_beta.
double rate_prefactor(double q_mag, const PhysicalParams& par) {
  const double m_star = par.m * par.M / (par.M + par.m);
  return par.n_gas * par.m / (m_star * m_star * q_mag);
}

// Plane integral int_{Q_perp} d2p mu_beta(p + s Qhat) sigma(p), by
// Gauss-Hermite quadrature matched to the Gaussian weight.  For the supported
// models sigma does not depend on p and the rule is exact.
double plane_integral(const Vec3& Q, double s, const PhysicalParams& par,
                      const CrossSectionModel& model, int n_nodes = 16) {
  const double q_mag = Q.norm();
  const double p_beta = std::sqrt(2.0 * par.m * par.T);
  const QuadRule& gh = gauss_hermite(n_nodes);
  const double gauss = std::exp(-s * s / (p_beta * p_beta));
  double sum = 0.0;
  for (std::size_t i = 0; i < gh.nodes.size(); ++i)
    for (std::size_t j = 0; j < gh.nodes.size(); ++j)
      sum += gh.weights[i] * gh.weights[j] * model.f2(q_mag, par);
  // substitution p = p_beta t per axis; mu_beta normalization pi^{-3/2} p_beta^{-3}
  return sum * gauss / (std::pow(M_PI, 1.5) * p_beta);
}

constexpr double kSqrtPi = 1.7724538509055160273;

}  // namespace

double m_in_classical(const Vec3& P, const Vec3& Q, const PhysicalParams& par,
                      const CrossSectionModel& model) {
  par.validate();
  const double q_mag = Q.norm();
  if (q_mag == 0.0) throw std::domain_error("m_in_classical: Q = 0 (integrable kernel node)");
  const double s = parallel_shift(P - Q, Q, q_mag, par);
  const double pref = rate_prefactor(q_mag, par);
  if (model.kind() == CrossSectionModel::Kind::Constant) {
    const double p_beta = std::sqrt(2.0 * par.m * par.T);
    const double sigma = par.sigma_tot / (4.0 * M_PI);
    return pref * sigma * std::exp(-s * s / (p_beta * p_beta)) / (kSqrtPi * p_beta);
  }
  return pref * plane_integral(Q, s, par, model);
}

std::complex<double> m_in_quantum(const Vec3& P, const Vec3& Pprime, const Vec3& Q,
                                  const PhysicalParams& par, const CrossSectionModel& model) {
  par.validate();
  const double q_mag = Q.norm();
  if (q_mag == 0.0) throw std::domain_error("m_in_quantum: Q = 0 (integrable kernel node)");
  // The two L factors share the perpendicular Gaussian content; the parallel
  // shifts of the pre-collision momenta combine into the geometric mean
  // exp(-(s1^2 + s2^2)/(2 p_beta^2)).  Real for momentum-transfer cross-sections.
  const double s1 = parallel_shift(P - Q, Q, q_mag, par);
  const double s2 = parallel_shift(Pprime - Q, Q, q_mag, par);
  const double p_beta = std::sqrt(2.0 * par.m * par.T);
  const double pref = rate_prefactor(q_mag, par) * model.f2(q_mag, par);
  const double value =
      pref * std::exp(-0.5 * (s1 * s1 + s2 * s2) / (p_beta * p_beta)) / (kSqrtPi * p_beta);
  return {value, 0.0};
}

namespace {

double m_out_quadrature(const Vec3& P, const PhysicalParams& par, const CrossSectionModel& model,
                        int n_radial, int n_angular) {
  const double p_beta = std::sqrt(2.0 * par.m * par.T);
  const double m_star = par.m * par.M / (par.M + par.m);
  const double v_beta = p_beta / par.m;
  const double p_mag = P.norm();
  const double U = p_mag / (par.M * v_beta);
  const double eps = 1e-6 * m_star * v_beta;
  const double q_max = 12.0 * std::max(p_beta, m_star * v_beta * (1.0 + U));
  const QuadRule radial = gauss_legendre(n_radial, eps, q_max);
  const QuadRule& ang = gauss_legendre(n_angular);
  double total = 0.0;
  for (int i = 0; i < n_radial; ++i) {
    const double q = radial.nodes[i];
    const double pref = rate_prefactor(q, par) * model.f2(q, par) / (kSqrtPi * p_beta);
    double ang_sum = 0.0;
    for (int j = 0; j < n_angular; ++j) {
      const double xi = ang.nodes[j];
      // s for pre-collision momentum P: (m/m*)(q/2) + (m/M) |P| xi
      const double s = (par.m / m_star) * 0.5 * q + (par.m / par.M) * p_mag * xi;
      ang_sum += ang.weights[j] * std::exp(-s * s / (p_beta * p_beta));
    }
    total += radial.weights[i] * 2.0 * M_PI * q * q * pref * ang_sum;
  }
  return total;
}

}  // namespace

double m_out_classical(const Vec3& P, const PhysicalParams& par, const CrossSectionModel& model,
                       const MOutOptions& opts) {
  par.validate();
  if (par.n_gas == 0.0) return 0.0;
  const double value = m_out_quadrature(P, par, model, opts.n_radial, opts.n_angular);
  if (opts.check_convergence) {
    const double refined =
        m_out_quadrature(P, par, model, opts.n_radial * 3 / 2, opts.n_angular * 3 / 2);
    const double scale = std::max(std::abs(value), std::abs(refined));
    if (scale > 0 && std::abs(value - refined) > opts.rel_tol * scale)
      throw NumericError("m_out_classical: quadrature not converged to requested tolerance");
    return refined;
  }
  return value;
}

double sigma_tilde(const Vec3& P_perp, const Vec3& Q, const PhysicalParams& par,
                   const CrossSectionModel& model) {
  par.validate();
  const double q_mag = Q.norm();
  if (q_mag == 0.0) throw std::domain_error("sigma_tilde: Q = 0");
  const double perp_defect = std::abs(P_perp.dot(Q)) / q_mag;
  if (perp_defect > 1e-9 * std::max(1.0, P_perp.norm()))
    throw std::invalid_argument("sigma_tilde: P_perp not perpendicular to Q");
  // int_{Q_perp} d2p mu_beta(p) sigma(rel(p, P_perp) -+ Q/2); both supported
  // models depend on p only through the fixed transfer -Q, so the plane
  // integral of mu_beta factorizes; keep the quadrature for generality.
  return plane_integral(Q, 0.0, par, model);
}

Vec3 sample_collision(const Vec3& P, const PhysicalParams& par, const CrossSectionModel& model,
                      std::mt19937_64& rng, Vec3* gas_momentum_out) {
  par.validate();
  if (model.kind() != CrossSectionModel::Kind::Constant)
    throw std::invalid_argument("sample_collision: Born-model sampling not supported");
  const double p_beta = std::sqrt(2.0 * par.m * par.T);
  const double v_beta = p_beta / par.m;
  const double m_star = par.m * par.M / (par.M + par.m);
  const Vec3 V = P / par.M;
  // flux envelope c (2 v_beta/sqrt(pi) + |V|), c = 3
  const double envelope = 3.0 * (2.0 * v_beta / kSqrtPi + V.norm());
  std::normal_distribution<double> gauss(0.0, p_beta / std::sqrt(2.0));
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  constexpr int kMaxIter = 100000;
  Vec3 p0;
  double vrel_mag = 0.0;
  Vec3 vrel;
  int iter = 0;
  for (; iter < kMaxIter; ++iter) {
    p0 = {gauss(rng), gauss(rng), gauss(rng)};
    vrel = p0 / par.m - V;
    vrel_mag = vrel.norm();
    if (unif(rng) * envelope < vrel_mag) break;
  }
  if (iter == kMaxIter)
    throw NumericError("sample_collision: rejection cap exceeded (pathological parameters)");
  // isotropic post-collision direction of the relative momentum
  const double cz = 2.0 * unif(rng) - 1.0;
  const double phi = 2.0 * M_PI * unif(rng);
  const double sz = std::sqrt(std::max(0.0, 1.0 - cz * cz));
  const Vec3 n_hat{sz * std::cos(phi), sz * std::sin(phi), cz};
  const Vec3 rel_i = vrel * m_star;  // rel(p0, P) = m* (p0/m - P/M)
  const Vec3 rel_f = n_hat * rel_i.norm();
  if (gas_momentum_out) *gas_momentum_out = p0;
  return rel_i - rel_f;  // tracer momentum gain
}

}  // namespace qlb
