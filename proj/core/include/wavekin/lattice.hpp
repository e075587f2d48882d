#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

namespace wavekin {

/// Integer lattice index; the second component is 0 for d = 1.
using Index2 = std::array<int, 2>;

/// Finite periodic Fourier lattice: all nonzero integer index vectors l with
/// |l_i| <= lmax, wavevector k_l = 2*pi*l/L. Ordering is lexicographic in the
/// index vector and therefore deterministic.
class ModeSet {
 public:
  ModeSet(double box_length, int dim, int lmax, std::vector<Index2> modes);

  double box_length() const { return box_length_; }
  int dim() const { return dim_; }
  int lmax() const { return lmax_; }
  int count() const { return static_cast<int>(modes_.size()); }
  const std::vector<Index2>& modes() const { return modes_; }
  Index2 index_vector(int i) const { return modes_[static_cast<std::size_t>(i)]; }

  std::array<double, 2> wavevector(int i) const;
  double kmag(int i) const;

  /// Position of the index vector in the ordered mode list, or -1 when the
  /// vector is outside the box or the zero vector.
  int find(Index2 l) const;

 private:
  double box_length_;
  int dim_;
  int lmax_;
  std::vector<Index2> modes_;
  std::vector<int> lookup_;  // dense (2*lmax+1)^d table of positions
};

ModeSet build_modeset(double box_length, int dim, int lmax);

/// Power-law dispersion omega(k) = c * |k|^alpha.
struct Dispersion {
  double scale = 1.0;     // c, rad/time
  double exponent = 1.0;  // alpha

  double omega(double kmag) const;
};

/// Triad coupling coefficient V^l_{mn}. Built-in families: constant V0 and the
/// product power law V0 * (|k_l||k_m||k_n|)^beta. Evaluation symmetrizes the
/// raw model in (m, n); no upper/lower index symmetry is imposed.
class InteractionModel {
 public:
  enum class Family { kConstant, kProductPower };

  static InteractionModel constant(double v0);
  static InteractionModel product_power(double v0, double beta);

  Family family() const { return family_; }
  double v0() const { return v0_; }
  double beta() const { return beta_; }

  std::complex<double> raw(const ModeSet& ms, int l, int m, int n) const;
  std::complex<double> value(const ModeSet& ms, int l, int m, int n) const;

 private:
  InteractionModel(Family f, double v0, double beta) : family_(f), v0_(v0), beta_(beta) {}
  Family family_;
  double v0_;
  double beta_;
};

/// One lattice triad k_sum = k_lo + k_hi in canonical order (lo <= hi as mode
/// positions). `mult` is the ordered-pair multiplicity (2 unless lo == hi)
/// restored when evaluating sums.
struct Triad {
  int sum;
  int lo;
  int hi;
  std::complex<double> coupling;  // V^sum_{lo,hi}
  double mismatch;                // omega_sum - omega_lo - omega_hi
  double mult;
};

/// Exhaustive canonical triad list plus the per-mode data every solver needs.
struct TriadTable {
  int n_modes = 0;
  int dim = 1;
  double box_length = 0.0;
  std::vector<double> omega;   // per mode, aligned with ModeSet order
  std::vector<Triad> entries;

  double omega_max() const;
  /// Lattice measure (2*pi/L)^d carried by one resolved wavevector integral.
  double measure() const;
};

TriadTable enumerate_triads(const ModeSet& ms, const Dispersion& disp,
                            const InteractionModel& im);

/// Finite-observation-time frequency kernel |Delta_T(x)|^2 / (2*pi*T):
/// nonnegative, unit mass over the real line, and -> delta(x) as T grows.
double broadened_delta(double x, double t_broad);

}  // namespace wavekin
