#pragma once

#include <span>
#include <vector>

namespace wavekin {

/// P(K > x) for the Kolmogorov distribution (two-sided KS tail probability).
double kolmogorov_tail(double x);

/// KS statistic D_n of samples against the uniform CDF on [0,1].
/// Values must already be mapped into [0,1]; the input is copied and sorted.
double ks_statistic_uniform(std::span<const double> unit_values);

/// Two-sided p-value of D_n with Stephens' finite-n correction.
double ks_uniform_pvalue(std::span<const double> unit_values);

/// p-value of samples against the exponential law with known mean.
double ks_exponential_pvalue(std::span<const double> samples, double mean);

/// Fixed-range uniform histogram; out-of-range mass folds into the end bins
/// so total probability is preserved.
struct Histogram {
  double lo = 0.0;
  double hi = 1.0;
  std::vector<double> count;

  Histogram(double lo_, double hi_, int bins) : lo(lo_), hi(hi_), count(bins, 0.0) {}
  int bins() const { return static_cast<int>(count.size()); }
  void add(double x, double weight = 1.0);
  double total() const;
};

/// Simple mean with standard error.
struct MeanErr {
  double mean = 0.0;
  double stderr_ = 0.0;
};

}  // namespace wavekin
