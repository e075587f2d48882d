#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "wavekin/dynamics.hpp"
#include "wavekin/stats.hpp"

namespace wavekin {

/// Per-mode intensity law of the initial ensemble. Phases are always
/// independent and uniform on the unit circle.
struct SamplerLaw {
  enum class Kind { kExponential, kDeterministic };
  Kind kind = Kind::kExponential;
  std::vector<double> level;  // per-mode mean (exponential) or fixed intensity
};

struct RpaSampler {
  SamplerLaw law;
  std::uint64_t seed = 1;
};

/// Draw member `member` of the ensemble: a_l = sqrt(s_l) e^{i theta_l} with
/// theta uniform. Reproducible: a pure function of (seed, member, mode).
WaveState sample_initial(const RpaSampler& sampler, std::uint64_t member);

struct ComplexMeanErr {
  std::complex<double> mean{0.0, 0.0};
  double stderr_ = 0.0;
};

struct FactorizationResult {
  double l1 = 0.0;        // distance between joint histogram and marginal product
  double null_q95 = 0.0;  // 95% quantile of the same statistic under resampled independence
  int sparse_cells = 0;   // cells with expected count below 5
  bool well_sampled = true;
};

/// Ensemble statistics at one sample time over a contiguous member range.
/// Merging adjacent ranges is associative and deterministic; standard errors
/// come from a fixed member-indexed block decomposition.
class SnapshotStats {
 public:
  SnapshotStats() = default;
  SnapshotStats(int n_modes, std::uint64_t begin, std::uint64_t end, int blocks,
                bool keep_samples, double time);

  void add_member(std::uint64_t member, const WaveState& state);
  static SnapshotStats merged(const SnapshotStats& a, const SnapshotStats& b);

  double time() const { return time_; }
  int n_modes() const { return n_modes_; }
  std::uint64_t members() const { return end_ - begin_; }
  bool has_samples() const { return keep_samples_; }

  MeanErr intensity_mean(int j) const;
  MeanErr intensity_moment(int j, int p) const;  // <s^p>, p in {1,2,3}
  ComplexMeanErr phase_harmonic(int j, int mu) const;  // mu in {0,...,3}
  MeanErr pair_cumulant(int j1, int j2) const;         // rejects j1 == j2

  /// KS test of phase-angle uniformity on [0, 2*pi); requires retained samples.
  double ks_phase_uniformity(int j) const;
  /// KS test of the intensity law against an exponential with the given mean.
  double ks_intensity_exponential(int j, double mean) const;

  Histogram intensity_histogram(int j, int bins, double hi) const;
  std::span<const double> intensity_samples(int j) const;
  std::span<const double> angle_samples(int j) const;

  /// L1 factorization error of an M <= 3 mode subset against the product of
  /// its marginals, with a resampled independence null quantile.
  FactorizationResult factorization_error(std::span<const int> modes, int bins,
                                          int resamples, std::uint64_t seed) const;

 private:
  int block_of(std::uint64_t member) const { return static_cast<int>(member % blocks_); }

  double time_ = 0.0;
  int n_modes_ = 0;
  std::uint64_t begin_ = 0, end_ = 0;
  int blocks_ = 1;
  bool keep_samples_ = false;

  // running sums (member count folds in via the range)
  std::vector<std::complex<double>> psi_sum_;  // [mode][mu-1], mu = 1..3
  std::vector<double> s_pow_sum_;              // [mode][p-1],  p  = 1..3
  std::vector<double> pair_sum_;               // [mode][mode] of s_j s_k
  // per-block sums for error bars
  std::vector<double> blk_count_;
  std::vector<std::complex<double>> blk_psi_;  // [block][mode][mu-1]
  std::vector<double> blk_s_;                  // [block][mode]
  std::vector<double> blk_pair_;               // [block][mode][mode]
  // retained raw samples (slot per member in range)
  std::vector<double> angles_;       // [mode][member-begin]
  std::vector<double> intensities_;  // [mode][member-begin]
};

struct EnsembleRunConfig {
  IntegratorConfig integrator;
  std::vector<double> sample_times;  // nondecreasing, first may be 0
  std::uint64_t members = 1;
  int blocks = 100;
  std::size_t chunk_members = 64;  // fixed work unit; independent of threads
  unsigned threads = 1;
  bool keep_samples = true;
};

/// Integrate `members` independent trajectories and accumulate statistics at
/// each sample time. Bit-identical for any thread count.
std::vector<SnapshotStats> run_ensemble(const RpaSampler& sampler, const TriadTable& table,
                                        const EnsembleRunConfig& cfg);

}  // namespace wavekin
