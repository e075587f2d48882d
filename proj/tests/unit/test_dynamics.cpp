#include <doctest.h>

#include <cmath>
#include <complex>

#include "helpers.hpp"
#include "wavekin/dynamics.hpp"
#include "wavekin/errors.hpp"

using namespace wavekin;
using namespace wavekin::testing;

namespace {

struct Setup {
  ModeSet ms;
  Dispersion disp;
  InteractionModel im;
  TriadTable table;
  Setup(int lmax, double alpha, int dim = 1)
      : ms(build_modeset(2.0 * M_PI, dim, lmax)),
        disp{1.0, alpha},
        im(InteractionModel::constant(1.0)),
        table(enumerate_triads(ms, disp, im)) {}
};

}  // namespace

TEST_CASE("rhs vanishes at epsilon = 0") {
  Setup s(4, 1.5);
  const WaveState state = random_state(s.ms.count(), 1);
  for (const Complex& z : rhs(state, s.table, 0.0)) {
    CHECK(z == Complex(0.0, 0.0));
  }
}

TEST_CASE("rhs hand value on a single active triad") {
  // modes {-2,-1,1,2}: a_1 = 1 only; at t=0, eps=1:
  // da_2/dt = -i V a_1^2 = -i and the rest vanish
  Setup s(2, 1.0);
  WaveState state;
  state.t = 0.0;
  state.a.assign(4, Complex(0.0, 0.0));
  state.a[2] = 1.0;  // index vector (1)
  const auto out = rhs(state, s.table, 1.0);
  CHECK(std::abs(out[3] - Complex(0.0, -1.0)) < 1e-15);
  CHECK(std::abs(out[0]) < 1e-15);
  CHECK(std::abs(out[1]) < 1e-15);
  CHECK(std::abs(out[2]) < 1e-15);
}

TEST_CASE("rhs matches the brute-force oracle") {
  for (int lmax : {4, 16, 32}) {
    Setup s(lmax, 1.5);
    WaveState state = random_state(s.ms.count(), 77 + lmax);
    state.t = 0.83;
    const auto fast = rhs(state, s.table, 0.3);
    const auto slow = rhs_bruteforce(state, s.ms, s.disp, s.im, 0.3);
    CHECK(rel_err(fast, slow) < 1e-13);
  }
  // 2d with a nontrivial interaction family
  const ModeSet ms = build_modeset(5.0, 2, 2);
  const Dispersion disp{0.8, 0.7};
  const InteractionModel im = InteractionModel::product_power(1.1, 0.3);
  const TriadTable table = enumerate_triads(ms, disp, im);
  WaveState state = random_state(ms.count(), 5);
  state.t = 1.7;
  CHECK(rel_err(rhs(state, table, 0.2), rhs_bruteforce(state, ms, disp, im, 0.2)) < 1e-13);
}

TEST_CASE("integrate: eps=0 leaves amplitudes untouched") {
  Setup s(4, 1.5);
  const WaveState initial = random_state(s.ms.count(), 3);
  const WaveState end = integrate(initial, s.table, {0.01, 0.0}, 5.0);
  CHECK(end.t == doctest::Approx(5.0));
  for (std::size_t j = 0; j < initial.a.size(); ++j) CHECK(end.a[j] == initial.a[j]);
}

TEST_CASE("integrate is fourth-order accurate") {
  Setup s(4, 1.5);
  const WaveState initial = random_state(s.ms.count(), 11);
  const double t_end = 2.0;
  const double eps = 0.1;
  auto endpoint = [&](double h) { return integrate(initial, s.table, {h, eps}, t_end); };
  const WaveState ref = endpoint(0.0005);
  const double e1 = rel_err(endpoint(0.016).a, ref.a);
  const double e2 = rel_err(endpoint(0.008).a, ref.a);
  CHECK(e1 / e2 > 10.0);
  CHECK(e1 / e2 < 24.0);
}

TEST_CASE("hamiltonian and momentum of simple states") {
  Setup s(2, 1.0);
  WaveState state;
  state.t = 0.0;
  state.a.assign(4, Complex(0.0, 0.0));
  state.a[2] = 1.0;  // single mode with omega = 1
  CHECK(hamiltonian(state, s.table, 0.0) == doctest::Approx(1.0));

  state.a[1] = std::polar(1.0, 0.9);  // index (-1), same |a| as (+1)
  const auto p = momentum(state, s.ms);
  CHECK(p[0] == doctest::Approx(0.0));
  CHECK(p[1] == doctest::Approx(0.0));
}

TEST_CASE("energy and momentum are conserved along trajectories") {
  Setup s(4, 1.5);  // omega_max = 8
  WaveState initial = random_state(s.ms.count(), 23);
  const double eps = 0.1;
  const double t_end = 100.0 / s.table.omega_max();
  const double h0 = hamiltonian(initial, s.table, eps);
  const auto p0 = momentum(initial, s.ms);

  auto drift = [&](double h) {
    const WaveState end = integrate(initial, s.table, {h, eps}, t_end);
    return std::abs(hamiltonian(end, s.table, eps) - h0) / std::abs(h0);
  };
  const double d1 = drift(1.5e-3);
  CHECK(d1 < 1e-8);
  CHECK(d1 / drift(0.75e-3) > 10.0);

  const WaveState end = integrate(initial, s.table, {1.5e-3, eps}, t_end);
  const auto p1 = momentum(end, s.ms);
  double scale = 0.0;
  for (int j = 0; j < s.ms.count(); ++j) {
    scale += std::abs(s.ms.wavevector(j)[0]) * std::norm(initial.a[static_cast<std::size_t>(j)]);
  }
  CHECK(std::abs(p1[0] - p0[0]) / scale < 1e-8);
}

TEST_CASE("time reversal recovers the initial state at fourth order") {
  Setup s(4, 1.5);
  const WaveState initial = random_state(s.ms.count(), 31);
  const double eps = 0.2;
  auto roundtrip = [&](double h, int steps) {
    WaveState state = initial;
    RhsWorkspace ws;
    for (int i = 0; i < steps; ++i) rk4_step(state, s.table, eps, h, ws);
    for (int i = 0; i < steps; ++i) rk4_step(state, s.table, eps, -h, ws);
    return rel_err(state.a, initial.a);
  };
  const double e1 = roundtrip(0.02, 50);
  const double e2 = roundtrip(0.01, 100);
  CHECK(e1 < 1e-6);
  CHECK(e1 / e2 > 8.0);
  CHECK(e1 / e2 < 40.0);
}

TEST_CASE("blow-up is detected and reported with its time") {
  Setup s(2, 1.0);
  WaveState state = random_state(s.ms.count(), 41);
  try {
    // absurd nonlinearity blows up quickly
    integrate(state, s.table, {0.05, 4000.0}, 50.0);
    FAIL("expected BlowUpError");
  } catch (const BlowUpError& e) {
    CHECK(e.time() > 0.0);
    CHECK(e.time() <= 50.0);
  }
}

TEST_CASE("integrator config validation") {
  Setup s(4, 1.5);  // omega_max = 8
  CHECK_THROWS_AS(validate_integrator({0.0, 0.1}, s.table), ValidationError);
  CHECK_THROWS_AS(validate_integrator({0.2, 0.1}, s.table), ValidationError);
  validate_integrator({0.0625, 0.1}, s.table);  // h * omega_max = 0.5 is allowed

  // dimension mismatch
  WaveState bad;
  bad.a.assign(3, Complex(1.0, 0.0));
  CHECK_THROWS_AS(rhs(bad, s.table, 0.1), ValidationError);
}
