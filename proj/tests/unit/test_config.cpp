#include <doctest.h>

#include <string>

#include "wavekin/config.hpp"
#include "wavekin/errors.hpp"

using namespace wavekin;

TEST_CASE("minimal config gets defaults; round-trip is identity") {
  const RunConfig cfg = parse_config("[grid]\nlmax = 3\n");
  CHECK(cfg.grid_lmax == 3);
  CHECK(cfg.grid_dim == 1);
  CHECK(cfg.grid_length == doctest::Approx(2.0 * M_PI));
  CHECK(cfg.epsilon == doctest::Approx(0.01));
  CHECK(cfg.sampler_law == "exponential");

  const std::string canon = serialize_config(cfg);
  const RunConfig round = parse_config(canon);
  CHECK(serialize_config(round) == canon);
  CHECK(config_hash(round) == config_hash(cfg));
}

TEST_CASE("comments, blank lines, inline values") {
  const RunConfig cfg = parse_config(
      "# a comment\n"
      "[grid]\n"
      "lmax = 2   # trailing comment\n"
      "\n"
      "[dynamics]\n"
      "snapshot_times = 0, 1.5, 3\n");
  CHECK(cfg.grid_lmax == 2);
  REQUIRE(cfg.snapshot_times.size() == 3);
  CHECK(cfg.snapshot_times[1] == doctest::Approx(1.5));
}

TEST_CASE("unknown keys and sections are errors with line numbers") {
  try {
    parse_config("[grid]\nlmax = 2\nlmaxx = 3\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 3);
    CHECK(std::string(e.what()).find("lmaxx") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config("[grd]\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("lmax = 2\n"), ConfigError);       // key before section
  CHECK_THROWS_AS(parse_config("[grid]\nlmax 2\n"), ConfigError); // missing '='
}

TEST_CASE("validation names the field") {
  try {
    parse_config("[grid]\nlmax = 0\n");
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("grid.lmax") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config("[grid]\nd = 3\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("[ensemble]\nlaw = gaussian\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("[zspdf]\nmodes = 1\n"), ValidationError);
}

TEST_CASE("index vector lists parse in both dimensions") {
  const RunConfig c1 = parse_config("[zspdf]\nmodes = 1; 2; 3\n");
  REQUIRE(c1.zs_modes.size() == 3);
  CHECK(c1.zs_modes[2] == Index2{3, 0});

  const RunConfig c2 = parse_config("[grid]\nd = 2\n[zspdf]\nmodes = 1,0; 0,1; 1,1\n");
  REQUIRE(c2.zs_modes.size() == 3);
  CHECK(c2.zs_modes[2] == Index2{1, 1});
}

TEST_CASE("build_system wires the table to the config") {
  RunConfig cfg = parse_config("[grid]\nlmax = 2\n[dispersion]\nalpha = 1.5\n");
  const System sys = build_system(cfg);
  CHECK(sys.modes.count() == 4);
  CHECK(sys.table.n_modes == 4);
  CHECK(sys.table.omega_max() == doctest::Approx(std::pow(2.0, 1.5)));
  CHECK(resolved_step(cfg, sys.table) == doctest::Approx(0.5 / std::pow(2.0, 1.5)));
  const auto levels = resolved_levels(cfg, sys.modes.count());
  CHECK(levels.size() == 4);
  CHECK(levels[2] == 1.0);
}
