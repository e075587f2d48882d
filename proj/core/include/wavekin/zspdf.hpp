#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wavekin/lattice.hpp"

namespace wavekin {

/// Tensor-product discretization of the joint amplitude PDF of a small set of
/// participating modes (2 to 4 axes). Densities are cell averages; axis 0 is
/// the slowest index. The solver is a closed box: mass is conserved exactly
/// and `clamp_correction` records any positivity-limiter action.
struct JointPdfGrid {
  std::vector<int> modes;      // table mode ids, one per axis
  std::vector<int> cells;      // per axis
  std::vector<double> s_max;   // per axis
  std::vector<double> density; // row-major tensor of cell averages
  double clamp_correction = 0.0;

  int axes() const { return static_cast<int>(modes.size()); }
  std::size_t size() const;
  double cell_width(int ax) const {
    return s_max[static_cast<std::size_t>(ax)] / cells[static_cast<std::size_t>(ax)];
  }
  double cell_center(int ax, int i) const { return (i + 0.5) * cell_width(ax); }
  double cell_volume() const;
  double mass() const;
  double marginal_mean(int ax) const;          // <s_ax>
  double pair_mean(int ax1, int ax2) const;    // <s_ax1 s_ax2>
  std::vector<double> marginal(int ax) const;  // 1D marginal density

  /// Factorized product of per-axis exponentials with the given means,
  /// cell-averaged and normalized on the truncated box.
  static JointPdfGrid product_exponential(std::vector<int> modes, std::vector<int> cells,
                                          std::vector<double> s_max,
                                          std::span<const double> means);
};

/// How triads with a leg outside the participating set contribute.
enum class ClosureMode {
  kDrop,       // only triads fully inside act (closed triad cluster)
  kMeanField,  // one-leg-outside triads act through that leg's mean intensity
};

/// Triads of the participating set preprocessed into per-axis operators.
/// Each fully-inside triad (c; u, v) drives the detailed-balance flux
///   F_j = -sigma_j * rate * s_u s_v s_c * (d/ds_u + d/ds_v - d/ds_c) P,
/// sigma = +1 on the lower legs and -1 on the sum leg, with
/// rate = 8 pi eps^2 (2 pi / L)^d |V|^2 delta_Tb(Omega). This gauge carries
/// the same divergence as the flux-form ZS equation, annihilates the
/// resonant thermodynamic product pointwise, and marginalizes to the
/// one-mode flux with the matching eta and gamma.
struct ZsCluster {
  struct Inner {
    int ax_sum, ax_lo, ax_hi;
    double rate;
  };
  struct Reduced {
    int kind;  // 0: a lower leg is outside; 1: the sum mode is outside
    int ax_a, ax_b;  // kind 0: (inside lower leg, sum); kind 1: (lo, hi)
    double rate;
    double mean_outside;
  };
  std::vector<Inner> inner;
  std::vector<Reduced> reduced;
  int dropped = 0;
};

/// Preprocess the triad table for a participating grid. `outside_means` is
/// consulted only under the mean-field closure and must be sized like the
/// full mode set. Degenerate triads (lo == hi) inside the participating set
/// are rejected.
ZsCluster build_cluster(const JointPdfGrid& grid, const TriadTable& table, double epsilon,
                        double t_broad, ClosureMode closure,
                        std::span<const double> outside_means = {});

/// Face-centered probability fluxes, one tensor per axis (shape: cells, but
/// cells[ax] + 1 along the owning axis). Boundary faces carry zero flux: the
/// s_j factor kills the s = 0 face and the box is closed at s_max.
struct ZsFluxField {
  std::vector<std::vector<double>> axis_faces;
};

ZsFluxField zs_flux(const JointPdfGrid& grid, const ZsCluster& cluster);

/// Flux along one axis only (the per-mode probe).
std::vector<double> zs_flux_axis(const JointPdfGrid& grid, const ZsCluster& cluster, int axis);

double zs_cfl_limit(const JointPdfGrid& grid, const ZsCluster& cluster);

/// One conservative forward-Euler step: P -= dt * div F. Throws CflError
/// beyond the stability bound; negative cells beyond -1e-12 of the density
/// scale are clamped with a logged warning (recorded in clamp_correction).
JointPdfGrid zs_step(const JointPdfGrid& grid, const ZsCluster& cluster, double dt);

/// Least-squares slope of y(t) with its standard error.
struct RateFit {
  double rate = 0.0;
  double stderr_ = 0.0;
};
RateFit fit_rate(std::span<const double> times, std::span<const double> values);

}  // namespace wavekin
