#pragma once

#include <cmath>
#include <complex>

namespace wavekin {

namespace detail {

/// Oscillatory moment M_k(y, T) = integral of t^k e^{iyt} over [0, T], k <= 3.
/// Closed form by parts for |yT| away from zero; power series otherwise
/// (the recursion loses accuracy when the phase barely turns).
inline std::complex<double> osc_moment(int k, double y, double t) {
  const std::complex<double> iy(0.0, y);
  const double phase = y * t;
  if (std::abs(phase) < 0.5) {
    // sum_j (iy)^j t^(k+j+1) / (j! (k+j+1)); converges fast for |yT| < 0.5
    std::complex<double> term = std::pow(t, k + 1) / static_cast<double>(k + 1);
    std::complex<double> sum = term;
    std::complex<double> pow_iy(1.0, 0.0);
    double factorial = 1.0;
    for (int j = 1; j <= 24; ++j) {
      pow_iy *= iy;
      factorial *= j;
      const std::complex<double> next =
          pow_iy * std::pow(t, k + j + 1) / (factorial * (k + j + 1));
      sum += next;
      if (std::abs(next) < 1e-18 * (1.0 + std::abs(sum))) break;
    }
    return sum;
  }
  const std::complex<double> eiyt = std::polar(1.0, phase);
  std::complex<double> m = (eiyt - 1.0) / iy;  // M_0
  double tk = 1.0;
  for (int j = 1; j <= k; ++j) {
    tk *= t;
    m = (tk * eiyt - static_cast<double>(j) * m) / iy;
  }
  return m;
}

}  // namespace detail

/// Delta_t(x) = integral of e^{ixs} over [0, t] = (e^{ixt} - 1)/(ix),
/// continuous at x = 0 with value t. |Delta_t(x)| <= t.
inline std::complex<double> delta_kernel(double x, double t) {
  return detail::osc_moment(0, x, t);
}

/// E(x, y) = integral over [0, T] of Delta_t(x - y) e^{iyt} dt, i.e. the
/// running-time kernel appears inside the integrand. Closed form
/// (Delta_T(x) - Delta_T(y)) / (i (x - y)) with a Taylor branch at x = y:
/// E(y, y) = M_1(y), dE/dx = M_2/2, ... in terms of oscillatory moments.
inline std::complex<double> e_kernel(double x, double y, double t) {
  const double h = x - y;
  if (std::abs(h) * t < 1e-4) {
    const std::complex<double> i(0.0, 1.0);
    // Delta_T^(k)(y) = i^k M_k; E = (Delta(x)-Delta(y))/(i h)
    const std::complex<double> m1 = detail::osc_moment(1, y, t);
    const std::complex<double> m2 = detail::osc_moment(2, y, t);
    const std::complex<double> m3 = detail::osc_moment(3, y, t);
    return m1 + h * (i * m2 / 2.0) + h * h * (-m3 / 6.0);
  }
  const std::complex<double> num = delta_kernel(x, t) - delta_kernel(y, t);
  return num / std::complex<double>(0.0, h);
}

}  // namespace wavekin
