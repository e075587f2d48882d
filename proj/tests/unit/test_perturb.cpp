#include <doctest.h>

#include <cmath>
#include <complex>

#include "helpers.hpp"
#include "wavekin/dynamics.hpp"
#include "wavekin/perturb.hpp"

using namespace wavekin;
using namespace wavekin::testing;

namespace {

struct Setup {
  ModeSet ms;
  Dispersion disp;
  InteractionModel im;
  TriadTable table;
  Setup(int lmax, double alpha)
      : ms(build_modeset(2.0 * M_PI, 1, lmax)),
        disp{1.0, alpha},
        im(InteractionModel::constant(1.0)),
        table(enumerate_triads(ms, disp, im)) {}
};

}  // namespace

TEST_CASE("iterates vanish on zero data") {
  Setup s(4, 1.5);
  const std::vector<Complex> zero(static_cast<std::size_t>(s.ms.count()), Complex(0.0, 0.0));
  for (const Complex& z : first_order(zero, s.table, 3.0)) CHECK(z == Complex(0.0, 0.0));
  for (const Complex& z : second_order(zero, s.table, 3.0)) CHECK(z == Complex(0.0, 0.0));
}

TEST_CASE("first iterate hand value on a resonant triad") {
  // modes {-2,-1,1,2}, omega = |k|: triad (2;1,1) resonant. a_1 = 1 only:
  // a2^(1) = -i V Delta(0) a_1^2 = -i T
  Setup s(2, 1.0);
  std::vector<Complex> a0(4, Complex(0.0, 0.0));
  a0[2] = 1.0;
  const double T = 5.0;
  const auto a1 = first_order(a0, s.table, T);
  CHECK(std::abs(a1[3] - Complex(0.0, -T)) < 1e-13);
  CHECK(std::abs(a1[0]) < 1e-15);
  CHECK(std::abs(a1[1]) < 1e-15);
  CHECK(std::abs(a1[2]) < 1e-15);
}

TEST_CASE("first iterate matches the small-eps dynamics limit") {
  Setup s(4, 1.5);
  const WaveState initial = random_state(s.ms.count(), 55, 0.7);
  const double T = 6.0;
  const auto a1 = first_order(initial.a, s.table, T);

  // ||a_direct - a0 - eps a1|| should scale as eps^2
  auto defect = [&](double eps) {
    const WaveState end = integrate(initial, s.table, {1e-3, eps}, T);
    double sq = 0.0;
    for (std::size_t j = 0; j < end.a.size(); ++j) {
      sq += std::norm(end.a[j] - initial.a[j] - eps * a1[j]);
    }
    return std::sqrt(sq);
  };
  const double d1 = defect(2e-3);
  const double d2 = defect(1e-3);
  CHECK(d1 / d2 == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("second iterate matches the dynamics on a single-triad system") {
  Setup s(2, 1.0);
  WaveState initial;
  initial.t = 0.0;
  initial.a = {Complex(0.0, 0.0), Complex(0.0, 0.0), std::polar(0.9, 0.4),
               std::polar(0.5, -1.1)};
  const double T = 3.0;
  const auto ex = expand(initial, s.table, T);

  auto defect = [&](double eps) {
    const WaveState end = integrate(initial, s.table, {5e-4, eps}, T);
    double sq = 0.0;
    for (std::size_t j = 0; j < end.a.size(); ++j) {
      sq += std::norm((end.a[j] - initial.a[j] - eps * ex.a1[j]) / (eps * eps) - ex.a2[j]);
    }
    return std::sqrt(sq);
  };
  // the eps^2-normalized defect shrinks linearly in eps toward zero
  const double d1 = defect(4e-3);
  const double d2 = defect(2e-3);
  CHECK(d2 < 0.02);
  CHECK(d1 / d2 == doctest::Approx(2.0).epsilon(0.2));
}

TEST_CASE("expansion residual has cubic order in eps") {
  Setup s(4, 1.5);  // N = 8, omega = |k|^{3/2}
  WaveState initial = random_state(s.ms.count(), 101, 0.8);
  const double T = 8.0;  // 2 pi / omega_max << T << 1/eps^2
  const std::vector<double> eps{1e-3, 2e-3, 4e-3, 8e-3};
  const ExpansionScan scan = expansion_residual_scan(initial, s.table, T, eps, 1e-3);
  CHECK(scan.slope == doctest::Approx(3.0).epsilon(0.1));
  // residuals grow monotonically with eps
  for (std::size_t i = 1; i < scan.residual.size(); ++i) {
    CHECK(scan.residual[i] > scan.residual[i - 1]);
  }
}
