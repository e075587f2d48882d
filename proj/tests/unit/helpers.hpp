#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "wavekin/dynamics.hpp"
#include "wavekin/lattice.hpp"
#include "wavekin/rng.hpp"

namespace wavekin::testing {

/// Adaptive Simpson quadrature for complex integrands (oracle for the
/// oscillatory kernels; tolerance is absolute per component).
inline std::complex<double> quad_complex(const std::function<std::complex<double>(double)>& f,
                                         double a, double b, double tol = 1e-12) {
  struct Impl {
    const std::function<std::complex<double>(double)>& f;
    std::complex<double> run(double a, double b, std::complex<double> fa,
                             std::complex<double> fm, std::complex<double> fb,
                             std::complex<double> whole, double tol, int depth) {
      const double m = 0.5 * (a + b);
      const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
      const std::complex<double> flm = f(lm), frm = f(rm);
      const std::complex<double> left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
      const std::complex<double> right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
      if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol) {
        return left + right + (left + right - whole) / 15.0;
      }
      return run(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
             run(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
    }
  } impl{f};
  const std::complex<double> fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const std::complex<double> whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return impl.run(a, b, fa, fm, fb, whole, tol, 48);
}

inline double quad_real(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-12) {
  return quad_complex([&](double x) { return std::complex<double>(f(x), 0.0); }, a, b, tol)
      .real();
}

/// Random complex state, reproducible, independent of library sampling code.
inline WaveState random_state(int n_modes, std::uint64_t seed, double scale = 1.0) {
  WaveState s;
  s.t = 0.0;
  s.a.resize(static_cast<std::size_t>(n_modes));
  for (int j = 0; j < n_modes; ++j) {
    RngStream rng(seed, 7777, static_cast<std::uint32_t>(j));
    const double re = 2.0 * rng.uniform() - 1.0;
    const double im = 2.0 * rng.uniform() - 1.0;
    s.a[static_cast<std::size_t>(j)] = scale * std::complex<double>(re, im);
  }
  return s;
}

/// Brute-force O(N^2) right-hand side straight from the equations of motion,
/// using only the ModeSet lattice lookup (independent of the TriadTable).
inline std::vector<Complex> rhs_bruteforce(const WaveState& state, const ModeSet& ms,
                                           const Dispersion& disp, const InteractionModel& im,
                                           double eps) {
  const int n = ms.count();
  std::vector<double> w(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) w[static_cast<std::size_t>(j)] = disp.omega(ms.kmag(j));
  std::vector<Complex> out(static_cast<std::size_t>(n), Complex(0.0, 0.0));
  const Complex mi(0.0, -1.0);
  for (int l = 0; l < n; ++l) {
    Complex acc(0.0, 0.0);
    for (int m = 0; m < n; ++m) {
      for (int nn = 0; nn < n; ++nn) {
        const Index2 im_v = ms.index_vector(m);
        const Index2 in_v = ms.index_vector(nn);
        // direct term: l = m + n
        if (ms.find({im_v[0] + in_v[0], im_v[1] + in_v[1]}) == l) {
          const double mism = w[static_cast<std::size_t>(l)] - w[static_cast<std::size_t>(m)] -
                              w[static_cast<std::size_t>(nn)];
          acc += im.value(ms, l, m, nn) * state.a[static_cast<std::size_t>(m)] *
                 state.a[static_cast<std::size_t>(nn)] * std::polar(1.0, mism * state.t);
        }
        // conjugate term: m = l + n
        const Index2 il_v = ms.index_vector(l);
        if (ms.find({il_v[0] + in_v[0], il_v[1] + in_v[1]}) == m) {
          const double mism = w[static_cast<std::size_t>(m)] - w[static_cast<std::size_t>(l)] -
                              w[static_cast<std::size_t>(nn)];
          acc += 2.0 * std::conj(im.value(ms, m, l, nn)) * state.a[static_cast<std::size_t>(m)] *
                 std::conj(state.a[static_cast<std::size_t>(nn)]) *
                 std::polar(1.0, -mism * state.t);
        }
      }
    }
    out[static_cast<std::size_t>(l)] = mi * eps * acc;
  }
  return out;
}

inline double rel_err(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::norm(a[i] - b[i]);
    den += std::norm(b[i]);
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

}  // namespace wavekin::testing
