#include <doctest.h>

#include <cmath>
#include <complex>

#include "helpers.hpp"
#include "wavekin/kernels.hpp"

using namespace wavekin;
using wavekin::testing::quad_complex;

namespace {

std::complex<double> delta_oracle(double x, double t) {
  return quad_complex([x](double s) { return std::polar(1.0, x * s); }, 0.0, t, 1e-13);
}

// E(x,y) with the running-time kernel inside the integrand
std::complex<double> e_oracle(double x, double y, double T) {
  return quad_complex(
      [x, y](double t) { return delta_kernel(x - y, t) * std::polar(1.0, y * t); }, 0.0, T,
      1e-13);
}

}  // namespace

TEST_CASE("delta kernel: limits and special points") {
  CHECK(delta_kernel(0.0, 7.0) == std::complex<double>(7.0, 0.0));
  const double t = 3.0;
  CHECK(std::abs(delta_kernel(2.0 * M_PI / t, t)) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(std::abs(delta_kernel(M_PI / t, t)) == doctest::Approx(2.0 * t / M_PI));
  // |Delta| <= t everywhere
  for (double x : {-9.0, -0.3, 0.01, 4.0, 40.0}) {
    CHECK(std::abs(delta_kernel(x, t)) <= t * (1.0 + 1e-14));
  }
}

TEST_CASE("delta kernel matches quadrature") {
  for (double t : {0.5, 4.0, 17.0}) {
    for (double x : {0.0, 1e-9, 1e-4, 0.37, 2.0, 15.0, -3.3}) {
      const auto got = delta_kernel(x, t);
      const auto want = delta_oracle(x, t);
      CHECK(std::abs(got - want) < 1e-10 * (1.0 + std::abs(want)));
    }
  }
}

TEST_CASE("E kernel: closed form vs quadrature on a grid") {
  for (double T : {2.0, 8.0}) {
    for (double x : {0.0, 0.1, 1.7, -2.2}) {
      for (double y : {0.0, 0.1, 0.1 + 1e-7, -1.0, 3.5}) {
        const auto got = e_kernel(x, y, T);
        const auto want = e_oracle(x, y, T);
        CHECK(std::abs(got - want) < 1e-10 * (1.0 + std::abs(want)));
      }
    }
  }
}

TEST_CASE("E kernel special values") {
  // E(0,0) = T^2/2
  CHECK(e_kernel(0.0, 0.0, 4.0).real() == doctest::Approx(8.0));
  CHECK(e_kernel(0.0, 0.0, 4.0).imag() == doctest::Approx(0.0));
  // E(x,x) equals the first oscillatory moment; cross-check by quadrature
  const auto diag = e_kernel(1.0, 1.0, 10.0);
  const auto want = e_oracle(1.0, 1.0, 10.0);
  CHECK(std::abs(diag - want) < 1e-10 * std::abs(want));
}

TEST_CASE("E(0,x): delta-plus-principal-value asymptotics") {
  const double T = 20.0;
  // Re E(0,0) = T^2/2 and Re E(0,x) = (1 - cos xT)/x^2 decays like 1/x^2
  CHECK(e_kernel(0.0, 0.0, T).real() == doctest::Approx(T * T / 2.0));
  for (double x : {0.5, 1.0, 2.0, 5.0}) {
    const double re = e_kernel(0.0, x, T).real();
    CHECK(re == doctest::Approx((1.0 - std::cos(x * T)) / (x * x)).epsilon(1e-10));
    CHECK(std::abs(re) <= 2.0 / (x * x) + 1e-12);
  }
  // Im E(0,x) -> T/x for |xT| >> 1 (the principal-value part)
  for (double x : {10.0 / T, 100.0 / T}) {
    const double im = e_kernel(0.0, x, T).imag();
    CHECK(im == doctest::Approx((x * T - std::sin(x * T)) / (x * x)).epsilon(1e-10));
  }
  const double x_far = 100.0 / T;
  CHECK(e_kernel(0.0, x_far, T).imag() == doctest::Approx(T / x_far).epsilon(0.02));
  // the delta part: integral of Re E(0,x) over x approaches pi*T
  const double mass = wavekin::testing::quad_real(
      [T](double x) { return e_kernel(0.0, x, T).real(); }, -60.0, 60.0, 1e-9);
  CHECK(mass == doctest::Approx(M_PI * T).epsilon(0.02));
}
