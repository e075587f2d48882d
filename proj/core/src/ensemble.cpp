#include "wavekin/ensemble.hpp"

#include <algorithm>
#include <cmath>

#include "wavekin/errors.hpp"
#include "wavekin/parallel.hpp"
#include "wavekin/rng.hpp"

namespace wavekin {

namespace {

MeanErr block_mean_err(std::span<const double> blk_sum, std::span<const double> blk_count,
                       double total_sum, double total_count) {
  MeanErr r;
  if (total_count <= 0.0) return r;
  r.mean = total_sum / total_count;
  double var = 0.0;
  int used = 0;
  for (std::size_t b = 0; b < blk_sum.size(); ++b) {
    if (blk_count[b] <= 0.0) continue;
    const double d = blk_sum[b] / blk_count[b] - r.mean;
    var += d * d;
    ++used;
  }
  if (used > 1) r.stderr_ = std::sqrt(var / (static_cast<double>(used) * (used - 1)));
  return r;
}

}  // namespace

WaveState sample_initial(const RpaSampler& sampler, std::uint64_t member) {
  const std::size_t n = sampler.law.level.size();
  WaveState state;
  state.t = 0.0;
  state.a.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    RngStream rng(sampler.seed, member, static_cast<std::uint32_t>(j));
    const double theta = rng.angle();
    const double s = sampler.law.kind == SamplerLaw::Kind::kExponential
                         ? rng.exponential(sampler.law.level[j])
                         : sampler.law.level[j];
    state.a[j] = std::polar(std::sqrt(s), theta);
  }
  return state;
}

SnapshotStats::SnapshotStats(int n_modes, std::uint64_t begin, std::uint64_t end, int blocks,
                             bool keep_samples, double time)
    : time_(time),
      n_modes_(n_modes),
      begin_(begin),
      end_(end),
      blocks_(std::max(blocks, 1)),
      keep_samples_(keep_samples) {
  const std::size_t n = static_cast<std::size_t>(n_modes);
  psi_sum_.assign(n * 3, {0.0, 0.0});
  s_pow_sum_.assign(n * 3, 0.0);
  pair_sum_.assign(n * n, 0.0);
  blk_count_.assign(static_cast<std::size_t>(blocks_), 0.0);
  blk_psi_.assign(static_cast<std::size_t>(blocks_) * n * 3, {0.0, 0.0});
  blk_s_.assign(static_cast<std::size_t>(blocks_) * n, 0.0);
  blk_pair_.assign(static_cast<std::size_t>(blocks_) * n * n, 0.0);
  if (keep_samples_) {
    angles_.assign(n * (end - begin), 0.0);
    intensities_.assign(n * (end - begin), 0.0);
  }
}

void SnapshotStats::add_member(std::uint64_t member, const WaveState& state) {
  const std::size_t n = static_cast<std::size_t>(n_modes_);
  const int blk = block_of(member);
  blk_count_[static_cast<std::size_t>(blk)] += 1.0;
  const std::size_t slot = static_cast<std::size_t>(member - begin_);

  std::vector<double> s(n);
  for (std::size_t j = 0; j < n; ++j) {
    const Complex a = state.a[j];
    s[j] = std::norm(a);
    const double mag = std::abs(a);
    const Complex psi = mag > 0.0 ? a / mag : Complex(1.0, 0.0);
    Complex pw = psi;
    for (int mu = 1; mu <= 3; ++mu) {
      psi_sum_[j * 3 + (mu - 1)] += pw;
      blk_psi_[(static_cast<std::size_t>(blk) * n + j) * 3 + (mu - 1)] += pw;
      pw *= psi;
    }
    double sp = s[j];
    for (int p = 1; p <= 3; ++p) {
      s_pow_sum_[j * 3 + (p - 1)] += sp;
      sp *= s[j];
    }
    blk_s_[static_cast<std::size_t>(blk) * n + j] += s[j];
    if (keep_samples_) {
      double theta = std::arg(a);
      if (theta < 0.0) theta += 2.0 * M_PI;
      angles_[j * (end_ - begin_) + slot] = theta;
      intensities_[j * (end_ - begin_) + slot] = s[j];
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      const double w = s[j] * s[k];
      pair_sum_[j * n + k] += w;
      blk_pair_[(static_cast<std::size_t>(blk) * n + j) * n + k] += w;
    }
  }
}

SnapshotStats SnapshotStats::merged(const SnapshotStats& a, const SnapshotStats& b) {
  if (a.n_modes_ != b.n_modes_ || a.blocks_ != b.blocks_ ||
      a.keep_samples_ != b.keep_samples_ || a.time_ != b.time_) {
    throw ValidationError("SnapshotStats::merged: incompatible accumulators");
  }
  if (a.end_ != b.begin_) {
    throw ValidationError("SnapshotStats::merged: member ranges are not adjacent");
  }
  SnapshotStats out = a;
  out.end_ = b.end_;
  for (std::size_t i = 0; i < out.psi_sum_.size(); ++i) out.psi_sum_[i] += b.psi_sum_[i];
  for (std::size_t i = 0; i < out.s_pow_sum_.size(); ++i) out.s_pow_sum_[i] += b.s_pow_sum_[i];
  for (std::size_t i = 0; i < out.pair_sum_.size(); ++i) out.pair_sum_[i] += b.pair_sum_[i];
  for (std::size_t i = 0; i < out.blk_count_.size(); ++i) out.blk_count_[i] += b.blk_count_[i];
  for (std::size_t i = 0; i < out.blk_psi_.size(); ++i) out.blk_psi_[i] += b.blk_psi_[i];
  for (std::size_t i = 0; i < out.blk_s_.size(); ++i) out.blk_s_[i] += b.blk_s_[i];
  for (std::size_t i = 0; i < out.blk_pair_.size(); ++i) out.blk_pair_[i] += b.blk_pair_[i];
  if (out.keep_samples_) {
    const std::size_t n = static_cast<std::size_t>(out.n_modes_);
    const std::size_t wa = a.end_ - a.begin_;
    const std::size_t wb = b.end_ - b.begin_;
    std::vector<double> ang(n * (wa + wb));
    std::vector<double> inten(n * (wa + wb));
    for (std::size_t j = 0; j < n; ++j) {
      std::copy_n(a.angles_.begin() + static_cast<std::ptrdiff_t>(j * wa), wa,
                  ang.begin() + static_cast<std::ptrdiff_t>(j * (wa + wb)));
      std::copy_n(b.angles_.begin() + static_cast<std::ptrdiff_t>(j * wb), wb,
                  ang.begin() + static_cast<std::ptrdiff_t>(j * (wa + wb) + wa));
      std::copy_n(a.intensities_.begin() + static_cast<std::ptrdiff_t>(j * wa), wa,
                  inten.begin() + static_cast<std::ptrdiff_t>(j * (wa + wb)));
      std::copy_n(b.intensities_.begin() + static_cast<std::ptrdiff_t>(j * wb), wb,
                  inten.begin() + static_cast<std::ptrdiff_t>(j * (wa + wb) + wa));
    }
    out.angles_ = std::move(ang);
    out.intensities_ = std::move(inten);
  }
  return out;
}

MeanErr SnapshotStats::intensity_mean(int j) const { return intensity_moment(j, 1); }

MeanErr SnapshotStats::intensity_moment(int j, int p) const {
  if (p < 1 || p > 3) throw ValidationError("intensity_moment: p must be in {1,2,3}");
  const std::size_t n = static_cast<std::size_t>(n_modes_);
  const double total = static_cast<double>(members());
  if (p == 1) {
    std::vector<double> bs(blk_count_.size());
    for (std::size_t b = 0; b < bs.size(); ++b) bs[b] = blk_s_[b * n + static_cast<std::size_t>(j)];
    return block_mean_err(bs, blk_count_, s_pow_sum_[static_cast<std::size_t>(j) * 3], total);
  }
  // higher moments: overall mean with a plain sqrt(var/n) error from samples
  MeanErr r;
  r.mean = s_pow_sum_[static_cast<std::size_t>(j) * 3 + (p - 1)] / total;
  if (keep_samples_ && members() > 1) {
    double var = 0.0;
    for (double s : intensity_samples(j)) {
      const double d = std::pow(s, p) - r.mean;
      var += d * d;
    }
    r.stderr_ = std::sqrt(var / (total * (total - 1.0)));
  }
  return r;
}

ComplexMeanErr SnapshotStats::phase_harmonic(int j, int mu) const {
  if (mu < 0 || mu > 3) throw ValidationError("phase_harmonic: mu must be in {0,...,3}");
  ComplexMeanErr r;
  if (mu == 0) {
    r.mean = {1.0, 0.0};
    return r;
  }
  const std::size_t n = static_cast<std::size_t>(n_modes_);
  const double total = static_cast<double>(members());
  if (total <= 0.0) return r;
  r.mean = psi_sum_[static_cast<std::size_t>(j) * 3 + (mu - 1)] / total;
  double var = 0.0;
  int used = 0;
  for (std::size_t b = 0; b < blk_count_.size(); ++b) {
    if (blk_count_[b] <= 0.0) continue;
    const Complex d =
        blk_psi_[(b * n + static_cast<std::size_t>(j)) * 3 + (mu - 1)] / blk_count_[b] - r.mean;
    var += std::norm(d);
    ++used;
  }
  if (used > 1) r.stderr_ = std::sqrt(var / (static_cast<double>(used) * (used - 1)));
  return r;
}

MeanErr SnapshotStats::pair_cumulant(int j1, int j2) const {
  if (j1 == j2) {
    throw ValidationError("pair_cumulant: j1 == j2 is not a pair statistic");
  }
  const std::size_t n = static_cast<std::size_t>(n_modes_);
  const double total = static_cast<double>(members());
  MeanErr r;
  if (total <= 0.0) return r;
  const double m_jk = pair_sum_[static_cast<std::size_t>(j1) * n + static_cast<std::size_t>(j2)] / total;
  const double m_j = s_pow_sum_[static_cast<std::size_t>(j1) * 3] / total;
  const double m_k = s_pow_sum_[static_cast<std::size_t>(j2) * 3] / total;
  r.mean = m_jk - m_j * m_k;
  double var = 0.0;
  int used = 0;
  for (std::size_t b = 0; b < blk_count_.size(); ++b) {
    if (blk_count_[b] <= 0.0) continue;
    const double c = blk_count_[b];
    const double cb =
        blk_pair_[(b * n + static_cast<std::size_t>(j1)) * n + static_cast<std::size_t>(j2)] / c -
        (blk_s_[b * n + static_cast<std::size_t>(j1)] / c) *
            (blk_s_[b * n + static_cast<std::size_t>(j2)] / c);
    const double d = cb - r.mean;
    var += d * d;
    ++used;
  }
  if (used > 1) r.stderr_ = std::sqrt(var / (static_cast<double>(used) * (used - 1)));
  return r;
}

std::span<const double> SnapshotStats::intensity_samples(int j) const {
  const std::size_t w = end_ - begin_;
  return {intensities_.data() + static_cast<std::size_t>(j) * w, w};
}

std::span<const double> SnapshotStats::angle_samples(int j) const {
  const std::size_t w = end_ - begin_;
  return {angles_.data() + static_cast<std::size_t>(j) * w, w};
}

double SnapshotStats::ks_phase_uniformity(int j) const {
  if (!keep_samples_) throw ValidationError("ks_phase_uniformity: samples were not retained");
  const auto ang = angle_samples(j);
  std::vector<double> unit(ang.size());
  for (std::size_t i = 0; i < ang.size(); ++i) unit[i] = ang[i] / (2.0 * M_PI);
  return ks_uniform_pvalue(unit);
}

double SnapshotStats::ks_intensity_exponential(int j, double mean) const {
  if (!keep_samples_) throw ValidationError("ks_intensity_exponential: samples were not retained");
  return ks_exponential_pvalue(intensity_samples(j), mean);
}

Histogram SnapshotStats::intensity_histogram(int j, int bins, double hi) const {
  if (!keep_samples_) throw ValidationError("intensity_histogram: samples were not retained");
  Histogram h(0.0, hi, bins);
  for (double s : intensity_samples(j)) h.add(s);
  return h;
}

namespace {

double joint_l1_error(const std::vector<std::span<const double>>& axes,
                      const std::vector<double>& hi, int bins) {
  const int m = static_cast<int>(axes.size());
  const std::size_t members = axes[0].size();
  std::size_t cells = 1;
  for (int i = 0; i < m; ++i) cells *= static_cast<std::size_t>(bins);

  std::vector<double> joint(cells, 0.0);
  std::vector<std::vector<double>> marg(static_cast<std::size_t>(m),
                                        std::vector<double>(static_cast<std::size_t>(bins), 0.0));
  auto bin_of = [&](int axis, double x) {
    int b = static_cast<int>(std::floor(x / hi[static_cast<std::size_t>(axis)] * bins));
    return std::clamp(b, 0, bins - 1);
  };
  for (std::size_t i = 0; i < members; ++i) {
    std::size_t idx = 0;
    for (int ax = 0; ax < m; ++ax) {
      const int b = bin_of(ax, axes[static_cast<std::size_t>(ax)][i]);
      idx = idx * static_cast<std::size_t>(bins) + static_cast<std::size_t>(b);
      marg[static_cast<std::size_t>(ax)][static_cast<std::size_t>(b)] += 1.0;
    }
    joint[idx] += 1.0;
  }
  const double inv = 1.0 / static_cast<double>(members);
  double l1 = 0.0;
  for (std::size_t c = 0; c < cells; ++c) {
    double prod = 1.0;
    std::size_t rem = c;
    for (int ax = m - 1; ax >= 0; --ax) {
      const std::size_t b = rem % static_cast<std::size_t>(bins);
      rem /= static_cast<std::size_t>(bins);
      prod *= marg[static_cast<std::size_t>(ax)][b] * inv;
    }
    l1 += std::abs(joint[c] * inv - prod);
  }
  return l1;
}

}  // namespace

FactorizationResult SnapshotStats::factorization_error(std::span<const int> modes, int bins,
                                                       int resamples,
                                                       std::uint64_t seed) const {
  if (!keep_samples_) throw ValidationError("factorization_error: samples were not retained");
  if (modes.size() < 2 || modes.size() > 3) {
    throw ValidationError("factorization_error: subset size must be 2 or 3");
  }
  const std::size_t members_n = members();
  const int m = static_cast<int>(modes.size());

  std::vector<std::span<const double>> axes;
  std::vector<double> hi;
  for (int ax = 0; ax < m; ++ax) {
    axes.push_back(intensity_samples(modes[static_cast<std::size_t>(ax)]));
    const double mean =
        s_pow_sum_[static_cast<std::size_t>(modes[static_cast<std::size_t>(ax)]) * 3] /
        static_cast<double>(members_n);
    hi.push_back(8.0 * mean);
  }

  FactorizationResult res;
  res.l1 = joint_l1_error(axes, hi, bins);

  // sparse-cell report: expected count under the marginal product
  {
    std::vector<std::vector<double>> marg(static_cast<std::size_t>(m),
                                          std::vector<double>(static_cast<std::size_t>(bins), 0.0));
    for (int ax = 0; ax < m; ++ax) {
      for (double x : axes[static_cast<std::size_t>(ax)]) {
        int b = static_cast<int>(std::floor(x / hi[static_cast<std::size_t>(ax)] * bins));
        marg[static_cast<std::size_t>(ax)][static_cast<std::size_t>(std::clamp(b, 0, bins - 1))] +=
            1.0;
      }
    }
    std::size_t cells = 1;
    for (int i = 0; i < m; ++i) cells *= static_cast<std::size_t>(bins);
    for (std::size_t c = 0; c < cells; ++c) {
      double expected = static_cast<double>(members_n);
      std::size_t rem = c;
      for (int ax = m - 1; ax >= 0; --ax) {
        const std::size_t b = rem % static_cast<std::size_t>(bins);
        rem /= static_cast<std::size_t>(bins);
        expected *= marg[static_cast<std::size_t>(ax)][b] / static_cast<double>(members_n);
      }
      if (expected < 5.0) ++res.sparse_cells;
    }
    res.well_sampled = res.sparse_cells == 0;
  }

  // null distribution: resample each axis independently from its own samples
  std::vector<double> null_stats;
  null_stats.reserve(static_cast<std::size_t>(resamples));
  std::vector<std::vector<double>> draw(static_cast<std::size_t>(m),
                                        std::vector<double>(members_n));
  for (int r = 0; r < resamples; ++r) {
    for (int ax = 0; ax < m; ++ax) {
      RngStream rng(seed, static_cast<std::uint64_t>(r),
                    static_cast<std::uint32_t>(1000 + ax));
      auto src = axes[static_cast<std::size_t>(ax)];
      for (std::size_t i = 0; i < members_n; ++i) {
        const std::size_t pick =
            std::min(members_n - 1, static_cast<std::size_t>(rng.uniform() *
                                                             static_cast<double>(members_n)));
        draw[static_cast<std::size_t>(ax)][i] = src[pick];
      }
    }
    std::vector<std::span<const double>> null_axes;
    for (int ax = 0; ax < m; ++ax) null_axes.emplace_back(draw[static_cast<std::size_t>(ax)]);
    null_stats.push_back(joint_l1_error(null_axes, hi, bins));
  }
  if (!null_stats.empty()) {
    std::sort(null_stats.begin(), null_stats.end());
    const std::size_t q = static_cast<std::size_t>(0.95 * (static_cast<double>(null_stats.size()) - 1.0));
    res.null_q95 = null_stats[q];
  }
  return res;
}

std::vector<SnapshotStats> run_ensemble(const RpaSampler& sampler, const TriadTable& table,
                                        const EnsembleRunConfig& cfg) {
  if (cfg.members < 1) throw ValidationError("ensemble.members: must be >= 1");
  if (sampler.law.level.size() != static_cast<std::size_t>(table.n_modes)) {
    throw ValidationError("ensemble: sampler level count must match mode count");
  }
  for (std::size_t i = 1; i < cfg.sample_times.size(); ++i) {
    if (cfg.sample_times[i] < cfg.sample_times[i - 1]) {
      throw ValidationError("ensemble.sample_times: must be nondecreasing");
    }
  }
  validate_integrator(cfg.integrator, table);

  using Partial = std::vector<SnapshotStats>;
  auto map = [&](std::size_t begin, std::size_t end) {
    Partial acc;
    acc.reserve(cfg.sample_times.size());
    for (double t : cfg.sample_times) {
      acc.emplace_back(table.n_modes, begin, end, cfg.blocks, cfg.keep_samples, t);
    }
    for (std::size_t member = begin; member < end; ++member) {
      WaveState state = sample_initial(sampler, member);
      for (std::size_t ti = 0; ti < cfg.sample_times.size(); ++ti) {
        const double target = cfg.sample_times[ti];
        if (target > state.t) {
          try {
            state = integrate(std::move(state), table, cfg.integrator, target);
          } catch (const BlowUpError& e) {
            throw BlowUpError(e.time(), static_cast<long long>(member));
          }
        }
        acc[ti].add_member(member, state);
      }
    }
    return acc;
  };
  auto merge = [](Partial& into, Partial&& next) {
    for (std::size_t i = 0; i < into.size(); ++i) {
      into[i] = SnapshotStats::merged(into[i], next[i]);
    }
  };
  return chunked_reduce<Partial>(cfg.members, cfg.chunk_members, cfg.threads, map, merge);
}

}  // namespace wavekin
