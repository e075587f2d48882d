#include <doctest.h>

#include <cmath>
#include <set>

#include "helpers.hpp"
#include "wavekin/errors.hpp"
#include "wavekin/lattice.hpp"

using namespace wavekin;
using wavekin::testing::quad_real;

TEST_CASE("build_modeset 1d examples") {
  const ModeSet ms = build_modeset(2.0 * M_PI, 1, 2);
  CHECK(ms.count() == 4);
  REQUIRE(ms.modes().size() == 4);
  CHECK(ms.index_vector(0) == Index2{-2, 0});
  CHECK(ms.index_vector(1) == Index2{-1, 0});
  CHECK(ms.index_vector(2) == Index2{1, 0});
  CHECK(ms.index_vector(3) == Index2{2, 0});
  CHECK(ms.wavevector(0)[0] == doctest::Approx(-2.0));
  CHECK(ms.wavevector(3)[0] == doctest::Approx(2.0));

  const ModeSet unit = build_modeset(1.0, 1, 1);
  CHECK(unit.count() == 2);
  CHECK(unit.wavevector(0)[0] == doctest::Approx(-2.0 * M_PI));
  CHECK(unit.wavevector(1)[0] == doctest::Approx(2.0 * M_PI));
}

TEST_CASE("build_modeset 2d counts and kmax bound") {
  const ModeSet ms = build_modeset(2.0 * M_PI, 2, 1);
  CHECK(ms.count() == 8);  // 3x3 box minus the zero mode
  const double kmax = 2.0 * M_PI * 1 / (2.0 * M_PI) * std::sqrt(2.0);
  for (int i = 0; i < ms.count(); ++i) {
    CHECK(ms.kmag(i) > 0.0);
    CHECK(ms.kmag(i) <= kmax + 1e-12);
  }
}

TEST_CASE("build_modeset rejects bad input") {
  CHECK_THROWS_AS(build_modeset(2.0 * M_PI, 3, 2), ValidationError);
  CHECK_THROWS_AS(build_modeset(2.0 * M_PI, 1, 0), ValidationError);
  CHECK_THROWS_AS(build_modeset(-1.0, 1, 2), ValidationError);
}

TEST_CASE("find is the inverse of the ordering") {
  const ModeSet ms = build_modeset(5.0, 2, 3);
  for (int i = 0; i < ms.count(); ++i) CHECK(ms.find(ms.index_vector(i)) == i);
  CHECK(ms.find({0, 0}) == -1);
  CHECK(ms.find({4, 0}) == -1);
  CHECK(ms.find({-4, 2}) == -1);
}

TEST_CASE("triad enumeration: canonical, exhaustive, cached mismatches") {
  const ModeSet ms = build_modeset(2.0 * M_PI, 1, 2);
  const Dispersion disp{1.0, 1.0};
  const InteractionModel im = InteractionModel::constant(1.0);
  const TriadTable table = enumerate_triads(ms, disp, im);

  // (2; 1, 1) present with zero mismatch for omega = |k|
  bool found = false;
  for (const Triad& t : table.entries) {
    CHECK(t.lo <= t.hi);
    const Index2 a = ms.index_vector(t.lo);
    const Index2 b = ms.index_vector(t.hi);
    const Index2 c = ms.index_vector(t.sum);
    CHECK(a[0] + b[0] == c[0]);
    if (c == Index2{2, 0} && a == Index2{1, 0}) {
      found = true;
      CHECK(t.mismatch == doctest::Approx(0.0));
      CHECK(t.mult == 1.0);
    }
  }
  CHECK(found);

  // alpha = 3/2: mismatch of (2;1,1) is 2^{3/2} - 2
  const TriadTable steep = enumerate_triads(ms, Dispersion{1.0, 1.5}, im);
  for (const Triad& t : steep.entries) {
    if (ms.index_vector(t.sum) == Index2{2, 0} && ms.index_vector(t.lo) == Index2{1, 0}) {
      CHECK(t.mismatch == doctest::Approx(std::pow(2.0, 1.5) - 2.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("triad exhaustiveness against brute-force re-enumeration") {
  for (int dim : {1, 2}) {
    const int lmax = dim == 1 ? 8 : 2;
    const ModeSet ms = build_modeset(3.7, dim, lmax);
    const TriadTable table =
        enumerate_triads(ms, Dispersion{1.3, 1.5}, InteractionModel::constant(0.7));

    std::set<std::pair<int, std::pair<int, int>>> expected;
    for (int lo = 0; lo < ms.count(); ++lo) {
      for (int hi = lo; hi < ms.count(); ++hi) {
        const Index2 a = ms.index_vector(lo);
        const Index2 b = ms.index_vector(hi);
        const int sum = ms.find({a[0] + b[0], a[1] + b[1]});
        if (sum >= 0) expected.insert({sum, {lo, hi}});
      }
    }
    std::set<std::pair<int, std::pair<int, int>>> got;
    for (const Triad& t : table.entries) got.insert({t.sum, {t.lo, t.hi}});
    CHECK(got == expected);
  }
}

TEST_CASE("interaction symmetry: swapped lower legs give the cached value") {
  const ModeSet ms = build_modeset(4.0, 2, 2);
  const InteractionModel im = InteractionModel::product_power(0.9, 0.5);
  const TriadTable table = enumerate_triads(ms, Dispersion{1.0, 0.5}, im);
  for (const Triad& t : table.entries) {
    CHECK(im.raw(ms, t.sum, t.hi, t.lo) == t.coupling);
    CHECK(im.value(ms, t.sum, t.hi, t.lo) == t.coupling);
  }
}

TEST_CASE("broadened_delta: peak value, first zero, unit mass") {
  CHECK(broadened_delta(0.0, 10.0) == doctest::Approx(10.0 / (2.0 * M_PI)));
  const double t = 3.3;
  CHECK(broadened_delta(2.0 * M_PI / t, t) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(broadened_delta(1.0, 5.0) >= 0.0);
  CHECK_THROWS_AS(broadened_delta(1.0, 0.0), ValidationError);

  // window mass: ~0.987 over [-50/T, 50/T], within 1% of 1 over [-100/T, 100/T],
  // and growing toward 1
  const double T = 7.0;
  auto f = [T](double x) { return broadened_delta(x, T); };
  const double m50 = quad_real(f, -50.0 / T, 50.0 / T, 1e-10);
  const double m100 = quad_real(f, -100.0 / T, 100.0 / T, 1e-10);
  const double m400 = quad_real(f, -400.0 / T, 400.0 / T, 1e-10);
  CHECK(m50 == doctest::Approx(0.987).epsilon(2e-3));
  CHECK(std::abs(m100 - 1.0) < 0.01);
  CHECK(m100 > m50);
  CHECK(m400 > m100);
  CHECK(std::abs(m400 - 1.0) < 0.002);
}
