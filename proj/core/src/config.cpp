#include "wavekin/config.hpp"

#include <charconv>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>

#include "wavekin/errors.hpp"

namespace wavekin {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(trim(cur));
  return out;
}

double parse_double(const std::string& v, int line) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("expected a number, got '" + v + "'", line);
  }
}

long long parse_int(const std::string& v, int line) {
  try {
    std::size_t pos = 0;
    const long long x = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("expected an integer, got '" + v + "'", line);
  }
}

std::uint64_t parse_u64(const std::string& v, int line) {
  try {
    std::size_t pos = 0;
    const unsigned long long x = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("expected an unsigned integer, got '" + v + "'", line);
  }
}

bool parse_bool(const std::string& v, int line) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("expected true/false, got '" + v + "'", line);
}

std::vector<double> parse_double_list(const std::string& v, int line) {
  std::vector<double> out;
  if (trim(v).empty()) return out;
  for (const std::string& item : split(v, ',')) out.push_back(parse_double(item, line));
  return out;
}

// index vectors: "a" or "a,b" items joined by ';'
std::vector<Index2> parse_index_list(const std::string& v, int line) {
  std::vector<Index2> out;
  if (trim(v).empty()) return out;
  for (const std::string& item : split(v, ';')) {
    const auto parts = split(item, ',');
    if (parts.size() == 1) {
      out.push_back({static_cast<int>(parse_int(parts[0], line)), 0});
    } else if (parts.size() == 2) {
      out.push_back({static_cast<int>(parse_int(parts[0], line)),
                     static_cast<int>(parse_int(parts[1], line))});
    } else {
      throw ConfigError("index vector needs 1 or 2 components, got '" + item + "'", line);
    }
  }
  return out;
}

std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt_double_list(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    out += fmt_double(xs[i]);
  }
  return out;
}

std::string fmt_index_list(const std::vector<Index2>& xs, int dim) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += "; ";
    out += std::to_string(xs[i][0]);
    if (dim == 2) out += "," + std::to_string(xs[i][1]);
  }
  return out;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  using Setter = std::function<void(RunConfig&, const std::string&, int)>;
  // one place that knows every key
  const std::map<std::string, Setter> keys = {
      {"grid.L", [](RunConfig& c, const std::string& v, int l) { c.grid_length = parse_double(v, l); }},
      {"grid.d", [](RunConfig& c, const std::string& v, int l) { c.grid_dim = static_cast<int>(parse_int(v, l)); }},
      {"grid.lmax", [](RunConfig& c, const std::string& v, int l) { c.grid_lmax = static_cast<int>(parse_int(v, l)); }},
      {"dispersion.c", [](RunConfig& c, const std::string& v, int l) { c.disp_scale = parse_double(v, l); }},
      {"dispersion.alpha", [](RunConfig& c, const std::string& v, int l) { c.disp_exponent = parse_double(v, l); }},
      {"interaction.family", [](RunConfig& c, const std::string& v, int) { c.interaction_family = v; }},
      {"interaction.v0", [](RunConfig& c, const std::string& v, int l) { c.interaction_v0 = parse_double(v, l); }},
      {"interaction.beta", [](RunConfig& c, const std::string& v, int l) { c.interaction_beta = parse_double(v, l); }},
      {"dynamics.epsilon", [](RunConfig& c, const std::string& v, int l) { c.epsilon = parse_double(v, l); }},
      {"dynamics.step", [](RunConfig& c, const std::string& v, int l) { c.step = parse_double(v, l); }},
      {"dynamics.t_end", [](RunConfig& c, const std::string& v, int l) { c.t_end = parse_double(v, l); }},
      {"dynamics.snapshot_times", [](RunConfig& c, const std::string& v, int l) { c.snapshot_times = parse_double_list(v, l); }},
      {"ensemble.law", [](RunConfig& c, const std::string& v, int) { c.sampler_law = v; }},
      {"ensemble.level", [](RunConfig& c, const std::string& v, int l) { c.sampler_level = parse_double_list(v, l); }},
      {"ensemble.members", [](RunConfig& c, const std::string& v, int l) { c.members = parse_u64(v, l); }},
      {"ensemble.seed", [](RunConfig& c, const std::string& v, int l) { c.seed = parse_u64(v, l); }},
      {"ensemble.blocks", [](RunConfig& c, const std::string& v, int l) { c.blocks = static_cast<int>(parse_int(v, l)); }},
      {"ensemble.keep_samples", [](RunConfig& c, const std::string& v, int l) { c.keep_samples = parse_bool(v, l); }},
      {"kinetics.t_broad", [](RunConfig& c, const std::string& v, int l) { c.t_broad = parse_double(v, l); }},
      {"kinetics.s_max", [](RunConfig& c, const std::string& v, int l) { c.pdf_s_max = parse_double(v, l); }},
      {"kinetics.cells", [](RunConfig& c, const std::string& v, int l) { c.pdf_cells = static_cast<int>(parse_int(v, l)); }},
      {"kinetics.dt", [](RunConfig& c, const std::string& v, int l) { c.kinetics_dt = parse_double(v, l); }},
      {"zspdf.modes", [](RunConfig& c, const std::string& v, int l) { c.zs_modes = parse_index_list(v, l); }},
      {"zspdf.cells", [](RunConfig& c, const std::string& v, int l) { c.zs_cells = static_cast<int>(parse_int(v, l)); }},
      {"zspdf.s_max", [](RunConfig& c, const std::string& v, int l) { c.zs_s_max = parse_double(v, l); }},
      {"zspdf.closure", [](RunConfig& c, const std::string& v, int) { c.zs_closure = v; }},
      {"zspdf.t_end", [](RunConfig& c, const std::string& v, int l) { c.zs_t_end = parse_double(v, l); }},
      {"zspdf.dt", [](RunConfig& c, const std::string& v, int l) { c.zs_dt = parse_double(v, l); }},
      {"expansion.horizon", [](RunConfig& c, const std::string& v, int l) { c.expansion_horizon = parse_double(v, l); }},
      {"expansion.epsilons", [](RunConfig& c, const std::string& v, int l) { c.expansion_epsilons = parse_double_list(v, l); }},
  };
  static const char* kSections[] = {"grid", "dispersion", "interaction", "dynamics",
                                    "ensemble", "kinetics", "zspdf", "expansion"};

  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("unterminated section header", line_no);
      section = trim(line.substr(1, line.size() - 2));
      bool known = false;
      for (const char* s : kSections) known = known || section == s;
      if (!known) throw ConfigError("unknown section [" + section + "]", line_no);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line_no);
    if (section.empty()) throw ConfigError("key outside of any [section]", line_no);
    const std::string key = section + "." + trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = keys.find(key);
    if (it == keys.end()) throw ConfigError("unknown key '" + key + "'", line_no);
    it->second(cfg, value, line_no);
  }
  validate_config(cfg);
  return cfg;
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream out;
  out << "[grid]\n";
  out << "L = " << fmt_double(c.grid_length) << "\n";
  out << "d = " << c.grid_dim << "\n";
  out << "lmax = " << c.grid_lmax << "\n";
  out << "[dispersion]\n";
  out << "c = " << fmt_double(c.disp_scale) << "\n";
  out << "alpha = " << fmt_double(c.disp_exponent) << "\n";
  out << "[interaction]\n";
  out << "family = " << c.interaction_family << "\n";
  out << "v0 = " << fmt_double(c.interaction_v0) << "\n";
  out << "beta = " << fmt_double(c.interaction_beta) << "\n";
  out << "[dynamics]\n";
  out << "epsilon = " << fmt_double(c.epsilon) << "\n";
  out << "step = " << fmt_double(c.step) << "\n";
  out << "t_end = " << fmt_double(c.t_end) << "\n";
  out << "snapshot_times = " << fmt_double_list(c.snapshot_times) << "\n";
  out << "[ensemble]\n";
  out << "law = " << c.sampler_law << "\n";
  out << "level = " << fmt_double_list(c.sampler_level) << "\n";
  out << "members = " << c.members << "\n";
  out << "seed = " << c.seed << "\n";
  out << "blocks = " << c.blocks << "\n";
  out << "keep_samples = " << (c.keep_samples ? "true" : "false") << "\n";
  out << "[kinetics]\n";
  out << "t_broad = " << fmt_double(c.t_broad) << "\n";
  out << "s_max = " << fmt_double(c.pdf_s_max) << "\n";
  out << "cells = " << c.pdf_cells << "\n";
  out << "dt = " << fmt_double(c.kinetics_dt) << "\n";
  out << "[zspdf]\n";
  out << "modes = " << fmt_index_list(c.zs_modes, c.grid_dim) << "\n";
  out << "cells = " << c.zs_cells << "\n";
  out << "s_max = " << fmt_double(c.zs_s_max) << "\n";
  out << "closure = " << c.zs_closure << "\n";
  out << "t_end = " << fmt_double(c.zs_t_end) << "\n";
  out << "dt = " << fmt_double(c.zs_dt) << "\n";
  out << "[expansion]\n";
  out << "horizon = " << fmt_double(c.expansion_horizon) << "\n";
  out << "epsilons = " << fmt_double_list(c.expansion_epsilons) << "\n";
  return out.str();
}

void validate_config(const RunConfig& c) {
  if (!(c.grid_length > 0.0)) throw ValidationError("grid.L: must be > 0");
  if (c.grid_dim != 1 && c.grid_dim != 2) throw ValidationError("grid.d: must be 1 or 2");
  if (c.grid_lmax < 1) throw ValidationError("grid.lmax: must be >= 1");
  if (!(c.disp_scale > 0.0)) throw ValidationError("dispersion.c: must be > 0");
  if (!(c.disp_exponent > 0.0)) throw ValidationError("dispersion.alpha: must be > 0");
  if (c.interaction_family != "constant" && c.interaction_family != "product_power") {
    throw ValidationError("interaction.family: must be constant or product_power");
  }
  if (c.epsilon < 0.0) throw ValidationError("dynamics.epsilon: must be >= 0");
  if (c.step < 0.0) throw ValidationError("dynamics.step: must be >= 0 (0 = auto)");
  if (!(c.t_end >= 0.0)) throw ValidationError("dynamics.t_end: must be >= 0");
  for (std::size_t i = 1; i < c.snapshot_times.size(); ++i) {
    if (c.snapshot_times[i] < c.snapshot_times[i - 1]) {
      throw ValidationError("dynamics.snapshot_times: must be nondecreasing");
    }
  }
  if (c.sampler_law != "exponential" && c.sampler_law != "deterministic") {
    throw ValidationError("ensemble.law: must be exponential or deterministic");
  }
  if (c.sampler_level.empty()) throw ValidationError("ensemble.level: needs at least one value");
  for (double v : c.sampler_level) {
    if (!(v > 0.0)) throw ValidationError("ensemble.level: values must be > 0");
  }
  if (c.members < 1) throw ValidationError("ensemble.members: must be >= 1");
  if (c.blocks < 2) throw ValidationError("ensemble.blocks: must be >= 2");
  if (!(c.t_broad > 0.0)) throw ValidationError("kinetics.t_broad: must be > 0");
  if (c.pdf_s_max < 0.0) throw ValidationError("kinetics.s_max: must be >= 0 (0 = auto)");
  if (c.pdf_cells < 8) throw ValidationError("kinetics.cells: must be >= 8");
  if (c.kinetics_dt < 0.0) throw ValidationError("kinetics.dt: must be >= 0 (0 = auto)");
  if (!c.zs_modes.empty() && (c.zs_modes.size() < 2 || c.zs_modes.size() > 4)) {
    throw ValidationError("zspdf.modes: participating set must have 2 to 4 modes");
  }
  if (c.zs_cells < 2) throw ValidationError("zspdf.cells: must be >= 2");
  if (c.zs_s_max < 0.0) throw ValidationError("zspdf.s_max: must be >= 0 (0 = auto)");
  if (c.zs_closure != "drop" && c.zs_closure != "mean_field") {
    throw ValidationError("zspdf.closure: must be drop or mean_field");
  }
  if (!(c.zs_t_end >= 0.0)) throw ValidationError("zspdf.t_end: must be >= 0");
  if (c.zs_dt < 0.0) throw ValidationError("zspdf.dt: must be >= 0 (0 = auto)");
  if (!(c.expansion_horizon > 0.0)) throw ValidationError("expansion.horizon: must be > 0");
  if (c.expansion_epsilons.empty()) {
    throw ValidationError("expansion.epsilons: needs at least one value");
  }
  for (double e : c.expansion_epsilons) {
    if (!(e > 0.0)) throw ValidationError("expansion.epsilons: values must be > 0");
  }
}

std::string config_hash(const RunConfig& cfg) {
  const std::string text = serialize_config(cfg);
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

System build_system(const RunConfig& cfg) {
  validate_config(cfg);
  ModeSet ms = build_modeset(cfg.grid_length, cfg.grid_dim, cfg.grid_lmax);
  Dispersion disp{cfg.disp_scale, cfg.disp_exponent};
  InteractionModel im = cfg.interaction_family == "constant"
                            ? InteractionModel::constant(cfg.interaction_v0)
                            : InteractionModel::product_power(cfg.interaction_v0,
                                                              cfg.interaction_beta);
  TriadTable table = enumerate_triads(ms, disp, im);
  return System{std::move(ms), disp, im, std::move(table)};
}

std::vector<double> resolved_levels(const RunConfig& cfg, int n_modes) {
  if (cfg.sampler_level.size() == 1) {
    return std::vector<double>(static_cast<std::size_t>(n_modes), cfg.sampler_level[0]);
  }
  if (cfg.sampler_level.size() != static_cast<std::size_t>(n_modes)) {
    throw ValidationError("ensemble.level: needs 1 value or one per mode (" +
                          std::to_string(n_modes) + ")");
  }
  return cfg.sampler_level;
}

double resolved_step(const RunConfig& cfg, const TriadTable& table) {
  if (cfg.step > 0.0) return cfg.step;
  const double wmax = table.omega_max();
  return wmax > 0.0 ? 0.5 / wmax : 0.1;
}

}  // namespace wavekin
