#include <doctest.h>

#include <cmath>
#include <vector>

#include "wavekin/rng.hpp"
#include "wavekin/stats.hpp"

using namespace wavekin;

TEST_CASE("kolmogorov tail reference points") {
  // classic critical value: P(K > 1.358) ~ 0.05
  CHECK(kolmogorov_tail(1.358) == doctest::Approx(0.05).epsilon(0.02));
  CHECK(kolmogorov_tail(1.628) == doctest::Approx(0.01).epsilon(0.03));
  CHECK(kolmogorov_tail(0.05) == 1.0);
  CHECK(kolmogorov_tail(8.0) == 0.0);
  // monotone decreasing
  double prev = 1.0;
  for (double x = 0.2; x < 3.0; x += 0.1) {
    const double p = kolmogorov_tail(x);
    CHECK(p <= prev + 1e-12);
    prev = p;
  }
}

TEST_CASE("ks statistic on a hand case") {
  // n=2 samples {0.25, 0.75}: D = max over the staircase = 0.25
  const std::vector<double> v{0.75, 0.25};
  CHECK(ks_statistic_uniform(v) == doctest::Approx(0.25));
}

TEST_CASE("ks p-value: uniform data passes, degenerate data fails") {
  std::vector<double> uniform(2000);
  RngStream rng(3, 0, 0);
  for (double& x : uniform) x = rng.uniform();
  CHECK(ks_uniform_pvalue(uniform) > 0.01);

  std::vector<double> locked(1000, 0.37);
  CHECK(ks_uniform_pvalue(locked) < 1e-6);
}

TEST_CASE("ks exponential wrapper") {
  std::vector<double> draws(5000);
  RngStream rng(9, 0, 0);
  for (double& x : draws) x = rng.exponential(2.5);
  CHECK(ks_exponential_pvalue(draws, 2.5) > 0.01);
  CHECK(ks_exponential_pvalue(draws, 1.0) < 1e-6);
}

TEST_CASE("histogram folds out-of-range mass into end bins") {
  Histogram h(0.0, 1.0, 4);
  h.add(-5.0);
  h.add(0.1);
  h.add(0.9);
  h.add(99.0);
  CHECK(h.count[0] == 2.0);
  CHECK(h.count[3] == 2.0);
  CHECK(h.total() == 4.0);
}
