// wavekin: one executable driving the three-wave laboratory. Subcommands read
// one config, write into a run directory named by config hash + seed, and are
// byte-reproducible for a fixed (config, seed) at any thread count.
#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "wavekin/config.hpp"
#include "wavekin/dynamics.hpp"
#include "wavekin/ensemble.hpp"
#include "wavekin/errors.hpp"
#include "wavekin/io.hpp"
#include "wavekin/kinetics.hpp"
#include "wavekin/perturb.hpp"
#include "wavekin/version.hpp"
#include "wavekin/zspdf.hpp"

namespace {

using nlohmann::ordered_json;
using namespace wavekin;

struct CliArgs {
  std::string config_path;
  std::string out_dir = "runs";
  std::uint64_t seed = 0;
  bool seed_set = false;
  unsigned threads = std::thread::hardware_concurrency();
};

RunConfig load_config(const CliArgs& args) {
  std::ifstream in(args.config_path);
  if (!in) throw ValidationError("cannot read config file " + args.config_path);
  std::stringstream buf;
  buf << in.rdbuf();
  RunConfig cfg = parse_config(buf.str());
  if (args.seed_set) cfg.seed = args.seed;
  return cfg;
}

ordered_json base_summary(const RunConfig& cfg) {
  ordered_json j;
  j["artifact"] = "wavekin";
  j["version"] = std::string(kVersion);
  j["config_hash"] = config_hash(cfg);
  j["config"] = serialize_config(cfg);
  return j;
}

void write_json(const std::filesystem::path& path, const ordered_json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open output file " + path.string());
  out << j.dump(2) << "\n";
}

std::vector<double> snapshot_times(const RunConfig& cfg) {
  if (!cfg.snapshot_times.empty()) return cfg.snapshot_times;
  return {0.0, cfg.t_end};
}

RpaSampler make_sampler(const RunConfig& cfg, const std::vector<double>& levels) {
  RpaSampler sampler;
  sampler.seed = cfg.seed;
  sampler.law.kind = cfg.sampler_law == "exponential" ? SamplerLaw::Kind::kExponential
                                                      : SamplerLaw::Kind::kDeterministic;
  sampler.law.level = levels;
  return sampler;
}

int cmd_triads(const CliArgs& args) {
  const RunConfig cfg = load_config(args);
  const System sys = build_system(cfg);
  const auto dir = run_directory(args.out_dir, cfg);
  CsvWriter csv(dir / "triads.csv");
  csv.embed_config(cfg);
  std::vector<std::string> head;
  const char* roles[3] = {"l", "m", "n"};
  for (const char* r : roles) {
    head.push_back(std::string(r) + "_x");
    if (cfg.grid_dim == 2) head.push_back(std::string(r) + "_y");
  }
  head.insert(head.end(), {"re_v", "im_v", "omega_mismatch"});
  csv.header(head);
  for (const Triad& t : sys.table.entries) {
    std::vector<std::string> row;
    for (int mode : {t.sum, t.lo, t.hi}) {
      const Index2 iv = sys.modes.index_vector(mode);
      row.push_back(std::to_string(iv[0]));
      if (cfg.grid_dim == 2) row.push_back(std::to_string(iv[1]));
    }
    row.push_back(CsvWriter::format(t.coupling.real()));
    row.push_back(CsvWriter::format(t.coupling.imag()));
    row.push_back(CsvWriter::format(t.mismatch));
    csv.row(row);
  }
  std::printf("triads: %zu entries\n", sys.table.entries.size());
  return 0;
}

int cmd_simulate(const CliArgs& args) {
  const RunConfig cfg = load_config(args);
  const System sys = build_system(cfg);
  const auto dir = run_directory(args.out_dir, cfg);
  const auto levels = resolved_levels(cfg, sys.modes.count());
  const RpaSampler sampler = make_sampler(cfg, levels);

  IntegratorConfig integ{resolved_step(cfg, sys.table), cfg.epsilon};
  WaveState state = sample_initial(sampler, 0);
  const double h0 = hamiltonian(state, sys.table, cfg.epsilon);

  const auto times = snapshot_times(cfg);
  CsvWriter csv(dir / "trajectory.csv");
  csv.embed_config(cfg);
  std::vector<std::string> head{"t"};
  for (int j = 0; j < sys.modes.count(); ++j) {
    head.push_back("re_a" + std::to_string(j));
    head.push_back("im_a" + std::to_string(j));
  }
  csv.header(head);

  BinaryRecord rec;
  rec.header_text = provenance_text(cfg);
  rec.extents = {static_cast<std::uint32_t>(times.size()),
                 static_cast<std::uint32_t>(1 + 2 * sys.modes.count())};

  for (double t : times) {
    if (t > state.t) state = integrate(std::move(state), sys.table, integ, t);
    std::vector<double> row{state.t};
    for (const Complex& a : state.a) {
      row.push_back(a.real());
      row.push_back(a.imag());
    }
    csv.row_values(row);
    rec.payload.insert(rec.payload.end(), row.begin(), row.end());
  }
  write_binary_record(dir / "trajectory.bin", rec);

  ordered_json j = base_summary(cfg);
  j["hamiltonian_initial"] = h0;
  j["hamiltonian_final"] = hamiltonian(state, sys.table, cfg.epsilon);
  const auto p = momentum(state, sys.modes);
  j["momentum_final"] = {p[0], p[1]};
  write_json(dir / "summary.json", j);
  std::printf("simulate: %zu snapshots\n", times.size());
  return 0;
}

int cmd_expand_check(const CliArgs& args) {
  const RunConfig cfg = load_config(args);
  const System sys = build_system(cfg);
  const auto dir = run_directory(args.out_dir, cfg);

  RpaSampler sampler = make_sampler(cfg, resolved_levels(cfg, sys.modes.count()));
  sampler.law.kind = SamplerLaw::Kind::kExponential;
  const WaveState initial = sample_initial(sampler, 0);

  const double step = resolved_step(cfg, sys.table);
  const ExpansionScan scan = expansion_residual_scan(initial, sys.table, cfg.expansion_horizon,
                                                     cfg.expansion_epsilons, step);

  CsvWriter csv(dir / "residuals.csv");
  csv.embed_config(cfg);
  csv.header({"epsilon", "residual"});
  for (std::size_t i = 0; i < scan.epsilon.size(); ++i) {
    csv.row_values({scan.epsilon[i], scan.residual[i]});
  }
  ordered_json j = base_summary(cfg);
  j["slope"] = scan.slope;
  write_json(dir / "summary.json", j);
  std::printf("slope=%.6f\n", scan.slope);
  return 0;
}

int cmd_stats(const CliArgs& args) {
  const RunConfig cfg = load_config(args);
  const System sys = build_system(cfg);
  const auto dir = run_directory(args.out_dir, cfg);
  const auto levels = resolved_levels(cfg, sys.modes.count());
  const RpaSampler sampler = make_sampler(cfg, levels);

  EnsembleRunConfig run;
  run.integrator = {resolved_step(cfg, sys.table), cfg.epsilon};
  run.sample_times = snapshot_times(cfg);
  run.members = cfg.members;
  run.blocks = cfg.blocks;
  run.threads = args.threads;
  run.keep_samples = cfg.keep_samples;

  const auto snaps = run_ensemble(sampler, sys.table, run);

  CsvWriter csv(dir / "timeseries.csv");
  csv.embed_config(cfg);
  csv.header({"t", "mode", "n_mean", "n_stderr", "psi1_abs", "psi1_stderr", "psi2_abs",
              "psi2_stderr", "psi3_abs", "psi3_stderr", "ks_p"});
  ordered_json j = base_summary(cfg);
  j["snapshots"] = ordered_json::array();
  for (const SnapshotStats& s : snaps) {
    ordered_json snap;
    snap["t"] = s.time();
    snap["members"] = s.members();
    snap["modes"] = ordered_json::array();
    for (int m = 0; m < s.n_modes(); ++m) {
      const auto n = s.intensity_mean(m);
      const auto p1 = s.phase_harmonic(m, 1);
      const auto p2 = s.phase_harmonic(m, 2);
      const auto p3 = s.phase_harmonic(m, 3);
      const double ks = cfg.keep_samples ? s.ks_phase_uniformity(m) : -1.0;
      csv.row_values({s.time(), static_cast<double>(m), n.mean, n.stderr_, std::abs(p1.mean),
                      p1.stderr_, std::abs(p2.mean), p2.stderr_, std::abs(p3.mean), p3.stderr_,
                      ks});
      ordered_json mj;
      mj["mode"] = m;
      mj["n"] = {{"mean", n.mean}, {"stderr", n.stderr_}};
      mj["psi"] = ordered_json::array();
      for (const auto* ph : {&p1, &p2, &p3}) {
        mj["psi"].push_back(
            {{"re", ph->mean.real()}, {"im", ph->mean.imag()}, {"stderr", ph->stderr_}});
      }
      mj["s2"] = s.intensity_moment(m, 2).mean;
      mj["s3"] = s.intensity_moment(m, 3).mean;
      if (cfg.keep_samples) mj["ks_phase_p"] = ks;
      snap["modes"].push_back(mj);
    }
    double max_cum = 0.0;
    ordered_json pairs = ordered_json::array();
    for (int a = 0; a < s.n_modes(); ++a) {
      for (int b = a + 1; b < s.n_modes(); ++b) {
        const auto c = s.pair_cumulant(a, b);
        max_cum = std::max(max_cum, std::abs(c.mean));
        pairs.push_back({{"j1", a}, {"j2", b}, {"cumulant", c.mean}, {"stderr", c.stderr_}});
      }
    }
    snap["pair_cumulants"] = pairs;
    snap["max_abs_pair_cumulant"] = max_cum;
    if (cfg.keep_samples && s.n_modes() >= 2) {
      std::vector<int> subset{0, 1};
      if (s.n_modes() >= 3) subset.push_back(2);
      const auto fr = s.factorization_error(subset, 32, 200, cfg.seed ^ 0x9e3779b97f4a7c15ull);
      snap["factorization"] = {{"modes", subset},
                               {"l1", fr.l1},
                               {"null_q95", fr.null_q95},
                               {"sparse_cells", fr.sparse_cells},
                               {"well_sampled", fr.well_sampled}};
    }
    j["snapshots"].push_back(snap);
  }
  write_json(dir / "stats.json", j);
  std::printf("stats: %llu members, %zu snapshots\n",
              static_cast<unsigned long long>(cfg.members), snaps.size());
  return 0;
}

int cmd_kinetics(const CliArgs& args) {
  const RunConfig cfg = load_config(args);
  const System sys = build_system(cfg);
  const auto dir = run_directory(args.out_dir, cfg);
  const auto levels = resolved_levels(cfg, sys.modes.count());

  SpectrumState n0;
  n0.t = 0.0;
  n0.waveaction = levels;
  const auto traj =
      evolve_spectrum(n0, sys.table, cfg.epsilon, cfg.t_broad, cfg.t_end, cfg.kinetics_dt);

  CsvWriter spec_csv(dir / "spectrum.csv");
  spec_csv.embed_config(cfg);
  std::vector<std::string> head{"t"};
  for (int m = 0; m < sys.modes.count(); ++m) head.push_back("n" + std::to_string(m));
  spec_csv.header(head);
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    std::vector<double> row{traj.times[i]};
    row.insert(row.end(), traj.states[i].begin(), traj.states[i].end());
    spec_csv.row_values(row);
  }

  // one-mode PDF relaxation under the t = 0 coefficients of mode 0
  const KineticCoeffs coeffs = kinetic_coeffs(levels, sys.table, cfg.epsilon, cfg.t_broad);
  const double eta0 = coeffs.eta[0];
  const double gam0 = coeffs.gamma[0];
  CsvWriter pdf_csv(dir / "pdf.csv");
  pdf_csv.embed_config(cfg);
  pdf_csv.header({"s", "p"});
  if (eta0 > 0.0 && gam0 > 0.0) {
    const double n_star = eta0 / gam0;
    const double s_max = cfg.pdf_s_max > 0.0 ? cfg.pdf_s_max : 20.0 * n_star;
    PdfGrid1D pdf = PdfGrid1D::delta_like(n_star, s_max, cfg.pdf_cells);
    const double dt = pdf_cfl_limit(pdf, eta0, gam0);
    const double t_relax = 12.0 / gam0;
    const long long steps = static_cast<long long>(std::ceil(t_relax / dt));
    for (long long i = 0; i < steps; ++i) pdf = pdf_step(pdf, eta0, gam0, dt);
    for (int i = 0; i < pdf.cells(); ++i) {
      pdf_csv.row_values({pdf.cell_center(i), pdf.density[static_cast<std::size_t>(i)]});
    }
  }

  ordered_json j = base_summary(cfg);
  j["final_time"] = traj.times.back();
  j["eta_mode0"] = eta0;
  j["gamma_mode0"] = gam0;
  write_json(dir / "summary.json", j);
  std::printf("kinetics: %zu spectrum snapshots\n", traj.times.size());
  return 0;
}

int cmd_zs_pdf(const CliArgs& args) {
  const RunConfig cfg = load_config(args);
  const System sys = build_system(cfg);
  const auto dir = run_directory(args.out_dir, cfg);
  if (cfg.zs_modes.empty()) {
    throw ValidationError("zspdf.modes: participating modes are required for zs-pdf");
  }
  const auto levels = resolved_levels(cfg, sys.modes.count());

  std::vector<int> modes;
  std::vector<int> cells;
  std::vector<double> smax;
  std::vector<double> means;
  for (const Index2& iv : cfg.zs_modes) {
    const int id = sys.modes.find(iv);
    if (id < 0) throw ValidationError("zspdf.modes: index vector outside the mode set");
    modes.push_back(id);
    cells.push_back(cfg.zs_cells);
    const double mean = levels[static_cast<std::size_t>(id)];
    smax.push_back(cfg.zs_s_max > 0.0 ? cfg.zs_s_max : 20.0 * mean);
    means.push_back(mean);
  }
  JointPdfGrid grid = JointPdfGrid::product_exponential(modes, cells, smax, means);
  const ClosureMode closure =
      cfg.zs_closure == "drop" ? ClosureMode::kDrop : ClosureMode::kMeanField;
  const ZsCluster cluster =
      build_cluster(grid, sys.table, cfg.epsilon, cfg.t_broad, closure, levels);

  double dt = cfg.zs_dt > 0.0 ? cfg.zs_dt : 0.9 * zs_cfl_limit(grid, cluster);
  const long long steps =
      std::max<long long>(1, static_cast<long long>(std::ceil(cfg.zs_t_end / dt)));
  dt = cfg.zs_t_end / static_cast<double>(steps);
  const long long stride = std::max<long long>(1, steps / 32);

  CsvWriter marg_csv(dir / "marginals.csv");
  marg_csv.embed_config(cfg);
  marg_csv.header({"t", "axis", "s", "p"});
  CsvWriter cum_csv(dir / "cumulants.csv");
  cum_csv.embed_config(cfg);
  cum_csv.header({"t", "axis1", "axis2", "cumulant"});

  auto emit = [&](double t, const JointPdfGrid& g) {
    for (int ax = 0; ax < g.axes(); ++ax) {
      const auto m = g.marginal(ax);
      for (std::size_t i = 0; i < m.size(); ++i) {
        marg_csv.row_values(
            {t, static_cast<double>(ax), g.cell_center(ax, static_cast<int>(i)), m[i]});
      }
    }
    for (int a = 0; a < g.axes(); ++a) {
      for (int b = a + 1; b < g.axes(); ++b) {
        cum_csv.row_values({t, static_cast<double>(a), static_cast<double>(b),
                            g.pair_mean(a, b) - g.marginal_mean(a) * g.marginal_mean(b)});
      }
    }
  };

  emit(0.0, grid);
  for (long long i = 0; i < steps; ++i) {
    grid = zs_step(grid, cluster, dt);
    if ((i + 1) % stride == 0 || i + 1 == steps) {
      emit(dt * static_cast<double>(i + 1), grid);
    }
  }

  BinaryRecord rec;
  rec.header_text = provenance_text(cfg);
  for (int c : grid.cells) rec.extents.push_back(static_cast<std::uint32_t>(c));
  rec.payload = grid.density;
  write_binary_record(dir / "tensor.bin", rec);

  ordered_json j = base_summary(cfg);
  j["mass"] = grid.mass();
  j["clamp_correction"] = grid.clamp_correction;
  j["dropped_triads"] = cluster.dropped;
  j["inner_triads"] = cluster.inner.size();
  j["reduced_triads"] = cluster.reduced.size();
  write_json(dir / "summary.json", j);
  std::printf("zs-pdf: %lld steps\n", steps);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wavekin: three-wave kinetics laboratory"};
  app.require_subcommand(1);
  CliArgs args;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", args.config_path, "config file path")->required();
    sub->add_option("--out", args.out_dir, "output root directory");
    sub->add_option("--seed", args.seed, "seed override")
        ->each([&](const std::string&) { args.seed_set = true; });
    sub->add_option("--threads", args.threads, "worker threads (does not change results)");
  };

  int (*handlers[])(const CliArgs&) = {cmd_simulate, cmd_expand_check, cmd_stats,
                                       cmd_kinetics,  cmd_zs_pdf,      cmd_triads};
  const char* names[] = {"simulate", "expand-check", "stats", "kinetics", "zs-pdf", "triads"};
  const char* descs[] = {"integrate one trajectory and export snapshots",
                         "expansion-order residual sweep",
                         "ensemble statistics of many trajectories",
                         "kinetic equation and one-mode PDF solver",
                         "joint amplitude PDF on a participating mode set",
                         "export the canonical triad table"};
  CLI::App* subs[6];
  for (int i = 0; i < 6; ++i) {
    subs[i] = app.add_subcommand(names[i], descs[i]);
    add_common(subs[i]);
  }

  CLI11_PARSE(app, argc, argv);

  int which = -1;
  for (int i = 0; i < 6; ++i) {
    if (subs[i]->parsed()) which = i;
  }
  try {
    return handlers[which](args);
  } catch (const std::exception& e) {
    nlohmann::ordered_json err;
    err["error"] = {{"type", typeid(e).name()}, {"message", e.what()}};
    std::fprintf(stderr, "%s\n", err.dump().c_str());
    return 1;
  }
}
