#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wavekin/dynamics.hpp"
#include "wavekin/ensemble.hpp"
#include "wavekin/kinetics.hpp"
#include "wavekin/lattice.hpp"
#include "wavekin/zspdf.hpp"

namespace wavekin {

/// Fully resolved run configuration. Parsed from sectioned line-oriented
/// key = value text; unknown sections or keys are errors. Defaults are the
/// member initializers below and nowhere else.
struct RunConfig {
  // [grid]
  double grid_length = 2.0 * M_PI;
  int grid_dim = 1;
  int grid_lmax = 4;

  // [dispersion]
  double disp_scale = 1.0;
  double disp_exponent = 1.0;

  // [interaction]
  std::string interaction_family = "constant";  // constant | product_power
  double interaction_v0 = 1.0;
  double interaction_beta = 0.0;

  // [dynamics]
  double epsilon = 0.01;
  double step = 0.0;  // 0 = auto: 0.5 / omega_max
  double t_end = 10.0;
  std::vector<double> snapshot_times;  // empty = {0, t_end}

  // [ensemble]
  std::string sampler_law = "exponential";  // exponential | deterministic
  std::vector<double> sampler_level = {1.0};  // scalar broadcast or per-mode
  std::uint64_t members = 1000;
  std::uint64_t seed = 1;
  int blocks = 100;
  bool keep_samples = true;

  // [kinetics]
  double t_broad = 50.0;
  double pdf_s_max = 0.0;  // 0 = auto: 20 * max level
  int pdf_cells = 512;
  double kinetics_dt = 0.0;  // 0 = auto

  // [zspdf]
  std::vector<Index2> zs_modes;  // participating lattice index vectors
  int zs_cells = 32;
  double zs_s_max = 0.0;  // 0 = auto per axis: 20 * level
  std::string zs_closure = "drop";  // drop | mean_field
  double zs_t_end = 1.0;
  double zs_dt = 0.0;  // 0 = auto from the CFL bound

  // [expansion]
  double expansion_horizon = 20.0;
  std::vector<double> expansion_epsilons = {1e-3, 2e-3, 4e-3, 8e-3};
};

/// Parse sectioned key = value text ('#' comments). Throws ConfigError with
/// the offending line, or ValidationError naming the field and bound.
RunConfig parse_config(const std::string& text);

/// Canonical text form: every field, fixed order, full precision.
/// parse(serialize(x)) == x.
std::string serialize_config(const RunConfig& cfg);

void validate_config(const RunConfig& cfg);

/// FNV-1a hash of the canonical serialization, as fixed-width hex.
std::string config_hash(const RunConfig& cfg);

/// Assembled immutable system shared by the subcommands.
struct System {
  ModeSet modes;
  Dispersion dispersion;
  InteractionModel interaction;
  TriadTable table;
};

System build_system(const RunConfig& cfg);

/// Per-mode sampler levels with scalar broadcast applied.
std::vector<double> resolved_levels(const RunConfig& cfg, int n_modes);

/// Auto step: 0.5 / omega_max when cfg.step is 0.
double resolved_step(const RunConfig& cfg, const TriadTable& table);

}  // namespace wavekin
