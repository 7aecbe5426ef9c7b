#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "qlb/params.hpp"
#include "qlb/rates.hpp"
#include "qlb/vec3.hpp"

namespace qlb {

// Uniform cubic momentum grid, symmetric about the origin (odd node count per
// axis so the origin is a node).
struct MomentumGrid3D {
  double p_max = 0.0;
  int n = 15;

  double dp() const { return 2.0 * p_max / (n - 1); }
  double coord(int i) const { return -p_max + i * dp(); }
  Vec3 node(int i, int j, int k) const { return {coord(i), coord(j), coord(k)}; }
  std::size_t size() const { return static_cast<std::size_t>(n) * n * n; }
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * n + j) * n + k;
  }
};

// p_max <= 0 selects the smallest admissible extent, 5 max(p_beta, sqrt(M T)).
MomentumGrid3D make_momentum_grid(const PhysicalParams& par, int n = 15, double p_max = 0.0);

// Density-matrix slice at fixed coherence vector K: the value at node P is
// rho(P + K/2, P - K/2).  K = 0 is the population (diagonal) sector.
struct CoherenceSlice {
  MomentumGrid3D grid;
  Vec3 K{};
  bool include_free_phase = false;
  std::vector<std::complex<double>> values;
  double time = 0.0;

  std::complex<double> trace() const;  // sum * dp^3
  double l1_norm() const;              // sum |.| * dp^3
};

// Thermal tracer profile placed on the slice (trace normalized to 1).
CoherenceSlice maxwell_slice(const MomentumGrid3D& grid, const Vec3& K, const PhysicalParams& par);

struct GeneratorOptions {
  // The strict resolution bar dp <= p_beta/2 requires n >= 21 at the minimal
  // extent; allow_coarse admits the coarser rungs of the refinement ladder.
  bool allow_coarse = false;
  int n_workers = 0;
};

// Time-derivative field of the master-equation generator restricted to the
// slice: discrete gain sum over grid-representable transfers (Q = 0 excluded),
// pairwise-symmetrized loss (trace conservation at K = 0 is exact by
// construction), optional free-Hamiltonian phase -(i/hbar)(P.K/M).
CoherenceSlice apply_generator(const CoherenceSlice& slice, const PhysicalParams& par,
                               const CrossSectionModel& model, const GeneratorOptions& opts = {});

// Classic fixed-step RK4 propagation; requires dt <= 0.1 / (max loss rate).
CoherenceSlice propagate_slice(const CoherenceSlice& slice, double t_final, double dt,
                               const PhysicalParams& par,
                               const CrossSectionModel& model = CrossSectionModel::constant(),
                               const GeneratorOptions& opts = {});

// Short-time L1 decay-rate estimate from a thermal-profile slice at coherence
// K.  Zero at K = 0; saturates near the total collision rate for |K| >> p_beta.
double coherence_decay_rate(const Vec3& K, const PhysicalParams& par,
                            const CrossSectionModel& model = CrossSectionModel::constant(),
                            int n = 15, int n_workers = 0);

}  // namespace qlb
