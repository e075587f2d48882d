#include "wavekin/stats.hpp"

#include <algorithm>
#include <cmath>

namespace wavekin {

double kolmogorov_tail(double x) {
  if (x < 0.1) return 1.0;
  if (x > 6.0) return 0.0;
  if (x <= 1.0) {
    // theta-function inversion: converges fast for small x
    const double v = 1.0 / (8.0 * x * x);
    const double k1 = -v * M_PI * M_PI;
    const double w = std::sqrt(2.0 * M_PI) / x;
    return 1.0 - w * (std::exp(k1) + std::exp(9.0 * k1) + std::exp(25.0 * k1) +
                      std::exp(49.0 * k1));
  }
  double sum = 0.0;
  double sign = 1.0;
  for (int i = 1; i <= 20; ++i) {
    const double term = sign * std::exp(-2.0 * i * i * x * x);
    sum += term;
    sign = -sign;
    if (std::abs(term) < 1e-16) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

double ks_statistic_uniform(std::span<const double> unit_values) {
  std::vector<double> sorted(unit_values.begin(), unit_values.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double fi = static_cast<double>(i);
    d = std::max(d, std::max((fi + 1.0) / n - sorted[i], sorted[i] - fi / n));
  }
  return d;
}

double ks_uniform_pvalue(std::span<const double> unit_values) {
  if (unit_values.empty()) return 1.0;
  const double d = ks_statistic_uniform(unit_values);
  const double n = static_cast<double>(unit_values.size());
  const double rn = std::sqrt(n);
  // Stephens' correction keeps the asymptotic tail accurate down to n ~ 10.
  return kolmogorov_tail(d * (rn + 0.12 + 0.11 / rn));
}

double ks_exponential_pvalue(std::span<const double> samples, double mean) {
  std::vector<double> unit(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    unit[i] = -std::expm1(-samples[i] / mean);
  }
  return ks_uniform_pvalue(unit);
}

void Histogram::add(double x, double weight) {
  if (count.empty()) return;
  const double w = hi - lo;
  int b = static_cast<int>(std::floor((x - lo) / w * static_cast<double>(bins())));
  b = std::clamp(b, 0, bins() - 1);
  count[static_cast<std::size_t>(b)] += weight;
}

double Histogram::total() const {
  double s = 0.0;
  for (double c : count) s += c;
  return s;
}

}  // namespace wavekin
