// kge — spectral exponential-integrator solver and convergence harness
// for the cubic Klein-Gordon equation on periodic domains.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kge/amplification.hpp"
#include "kge/config.hpp"
#include "kge/presets.hpp"
#include "kge/report.hpp"
#include "kge/study.hpp"

namespace {

using namespace kge;

// Config-file override support: every key mirrors a flag (without the
// leading --); values from the file take precedence over flag values.
struct OverrideRegistry {
  std::map<std::string, std::function<void(const std::string&)>> setters;

  void bind(const std::string& key, double* target) {
    setters[key] = [target](const std::string& v) { *target = std::stod(v); };
  }
  void bind(const std::string& key, int* target) {
    setters[key] = [target](const std::string& v) { *target = std::stoi(v); };
  }
  void bind(const std::string& key, std::string* target) {
    setters[key] = [target](const std::string& v) { *target = v; };
  }
  void bind(const std::string& key, bool* target) {
    setters[key] = [target](const std::string& v) {
      *target = (v == "1" || v == "true" || v == "on" || v == "yes");
    };
  }

  void apply(const std::string& config_path) const {
    if (config_path.empty()) return;
    auto kv = parse_config(config_path);
    std::set<std::string> known;
    for (const auto& [k, fn] : setters) known.insert(k);
    check_config_keys(kv, known);
    for (const auto& [k, v] : kv) setters.at(k)(v);
  }
};

std::vector<double> parse_ladder(const std::string& csv) {
  std::vector<double> out;
  std::string tok;
  std::istringstream is(csv);
  while (std::getline(is, tok, ',')) {
    if (!tok.empty()) out.push_back(std::stod(tok));
  }
  return out;
}

void print_table(const StudyTable& t, std::ostream& os) {
  const bool temporal = t.spec.kind != StudyKind::spatial;
  os << "# problem=" << to_string(t.spec.problem) << " beta=" << t.spec.beta
     << " T0=" << t.spec.t0 << " norm=H" << t.spec.lambda << "\n";
  os << "#        ";
  for (std::size_t c = 0; c < t.columns; ++c) {
    char buf[32];
    std::snprintf(buf, sizeof buf, " %12g", temporal ? t.at(0, c).step : t.at(0, c).h);
    os << buf;
  }
  os << "\n";
  for (std::size_t r = 0; r < t.spec.eps_ladder.size(); ++r) {
    char head[32];
    std::snprintf(head, sizeof head, "eps=%-6g", t.spec.eps_ladder[r]);
    os << head;
    for (std::size_t c = 0; c < t.columns; ++c) {
      char buf[32];
      const auto& rec = t.at(r, c);
      if (std::isnan(rec.error_h1))
        std::snprintf(buf, sizeof buf, " %12s", rec.flag.c_str());
      else
        std::snprintf(buf, sizeof buf, " %12.3e", rec.error(t.spec.lambda));
      os << buf;
    }
    os << "\n   order ";
    for (std::size_t c = 0; c < t.columns; ++c) {
      char buf[32];
      const auto& rec = t.at(r, c);
      if (std::isnan(rec.order))
        std::snprintf(buf, sizeof buf, " %12s", "-");
      else
        std::snprintf(buf, sizeof buf, " %12.2f", rec.order);
      os << buf;
    }
    os << "\n";
  }
  for (std::size_t r = 0; r < t.spec.eps_ladder.size(); ++r)
    for (std::size_t c = 0; c < t.columns; ++c)
      if (t.at(r, c).flag != "STABLE")
        os << "# cell eps=" << t.at(r, c).eps << " col=" << c << ": " << t.at(r, c).flag << "\n";
}

struct CommonOpts {
  std::string cache_dir;
  std::string out;
  std::string format = "csv";
  bool force = false;
  bool no_timings = false;
  int jobs = 1;
  double budget = 600.0;

  std::filesystem::path cache() const {
    return cache_dir.empty() ? default_cache_dir() : std::filesystem::path(cache_dir);
  }
};

void emit_or_print(const StudyTable& table, const CommonOpts& common) {
  if (!common.out.empty()) {
    emit_report(table.records, common.out, common.format, common.force, !common.no_timings);
    std::cout << "wrote " << common.out << " (" << table.records.size() << " rows)\n";
  }
  print_table(table, std::cout);
}

// Runs one beta block of a preset and gates it against the published
// values; returns the number of failed gate checks.
int run_preset_block(const presets::TablePreset& preset, const presets::BetaBlock& block,
                     const CommonOpts& common, std::vector<ConvergenceRecord>& all_records) {
  StudySpec spec = presets::study_spec(preset, block);
  spec.jobs = common.jobs;
  spec.cell_budget_seconds = common.budget;
  StudyTable table = spec.kind == StudyKind::temporal ? temporal_study(spec, common.cache())
                                                      : spatial_study(spec, common.cache());
  print_table(table, std::cout);
  all_records.insert(all_records.end(), table.records.begin(), table.records.end());

  auto errors = presets::check_errors(preset, block, table);
  auto orders = presets::check_orders(preset, block, table);
  std::cout << preset.name << " beta=" << block.beta << ": error cells " << errors.checked
            << " checked, " << errors.failed << " outside " << preset.tol_error * 100 << "%";
  if (orders.checked > 0)
    std::cout << "; order cells " << orders.checked << " checked, " << orders.failed
              << " outside +/-" << preset.tol_order;
  std::cout << "\n";
  if (!errors.detail.empty()) std::cout << errors.detail;
  if (!orders.detail.empty()) std::cout << orders.detail;
  return errors.failed + orders.failed;
}

int run_preset(const std::string& name, const CommonOpts& common) {
  auto preset = presets::by_name(name);
  std::vector<ConvergenceRecord> all;
  int failed = 0;
  for (const auto& block : preset.blocks) failed += run_preset_block(preset, block, common, all);
  if (!common.out.empty()) {
    emit_report(all, common.out, common.format, common.force, !common.no_timings);
    std::cout << "wrote " << common.out << " (" << all.size() << " rows)\n";
  }
  if (failed > 0) {
    std::cout << name << ": " << failed << " gate check(s) failed\n";
    return 1;
  }
  std::cout << name << ": all gates passed\n";
  return 0;
}

int cmd_solve(const CommonOpts& common, Problem problem, double eps, double beta, double step,
              int modes, double target_h, double t0, bool dealias, bool project,
              const std::string& snapshots) {
  GridPtr grid = problem_grid(problem, eps, beta, modes,
                              problem == Problem::whole_space ? target_h : 0.0);
  const InitialData data = problem_data(problem);

  RunOptions opts;
  opts.dealias = dealias;
  opts.init = project ? InitKind::projection : InitKind::interpolation;
  opts.deadline_seconds = common.budget;

  std::vector<std::pair<double, NodalField>> snaps;
  if (!snapshots.empty()) {
    auto wanted = parse_ladder(snapshots);
    opts.observer_stride = 1;
    opts.observer = [&snaps, wanted, step](long, double t, const SpectralField& curr,
                                           const SpectralField&) {
      for (double w : wanted)
        if (std::abs(t - w) <= 0.5 * step && std::abs(t - w) < 1e-9 * std::max(1.0, w) + 1e-12)
          snaps.emplace_back(t, inverse_transform(curr));
    };
  }

  RunResult res;
  long steps = 0;
  if (problem == Problem::weak) {
    SolverParams p(eps, beta, step, t0);
    steps = p.steps();
    res = run(p, grid, initial_phi(data), initial_gamma(data), opts);
  } else {
    OscParams p(eps, beta, step, t0);
    steps = p.steps();
    res = run_oscillatory(p, grid, initial_phi(data), initial_gamma(data), opts);
  }

  std::printf("problem=%s eps=%g beta=%g step=%g M=%d domain=[%g, %g]\n",
              to_string(problem).c_str(), eps, beta, step, grid->modes, grid->a, grid->b);
  std::printf("steps=%ld final_time=%g sigma_max=%.6g wall=%.3fs\n", steps, res.diag.final_time,
              res.diag.sigma_max, res.diag.wall_seconds);
  std::printf("stability: tau bound at a-priori sigma = %.6g -> %s\n",
              res.diag.stability_tau_bound,
              res.diag.stability_violated ? "VIOLATED (ran anyway)" : "satisfied");
  if (problem == Problem::whole_space) {
    const double leak = boundary_mass_fraction(res.final);
    std::printf("boundary-zone mass fraction = %.3e%s\n", leak,
                leak > 1e-8 ? "  WARNING: > 1e-8" : "");
  }

  if (eps == 0.0) {
    auto exact = exact_linear_solution(interpolate_initial(initial_phi(data), grid),
                                       interpolate_initial(initial_gamma(data), grid),
                                       res.diag.final_time);
    std::printf("linear run: H1 error vs closed form = %.3e\n",
                error_norm(exact.u, res.final, 1));
  }

  if (!common.out.empty()) {
    snaps.emplace_back(res.diag.final_time, inverse_transform(res.final));
    if (std::filesystem::exists(common.out) && !common.force)
      throw std::runtime_error(common.out + " exists; pass --force to overwrite");
    std::ofstream os(common.out, std::ios::trunc);
    os << "t,x,u\n";
    char buf[96];
    for (const auto& [t, field] : snaps) {
      for (int j = 0; j < field.grid->modes; ++j) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", t, field.grid->nodes[j],
                      field.values[j]);
        os << buf;
      }
    }
    std::cout << "wrote " << common.out << "\n";
  }
  return 0;
}

int cmd_stability_probe(double h, double eps, double sigma, double beta, int modes) {
  GridPtr grid = make_grid(0.0, modes * h, modes);
  auto probe = stability_probe(*grid, eps, sigma, beta);
  std::printf("grid: M=%d h=%g (frequencies up to zeta=%.6g)\n", modes, h, grid->frequencies[0]);
  std::printf("certified stable bound:      %.6g\n", probe.sufficient_bound);
  std::printf("max |xi| at the sufficient bound: %.12g\n", probe.amplification_at_bound);
  if (std::isfinite(probe.exact_threshold)) {
    std::printf("exact onset of instability:  %.6g (%.2f%% above the bound)\n",
                probe.exact_threshold,
                100.0 * (probe.exact_threshold / probe.sufficient_bound - 1.0));
    std::printf("growth/step at 0.99 * onset: %.12g (bounded)\n", probe.growth_below);
    std::printf("growth/step at 1.01 * onset: %.12g (geometric)\n", probe.growth_above);
  } else {
    std::printf(
        "exact onset of instability:  none (eps^2 sigma = 0: the linearized\n"
        "  scheme is the exact linear flow, stable for every step size)\n");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "kge — Gautschi-type exponential-integrator Fourier pseudospectral solver and\n"
      "convergence harness for the cubic Klein-Gordon equation (weak-nonlinearity and\n"
      "rescaled oscillatory forms). Values in --config files override flags.\n"};
  app.require_subcommand(1);
  // --h is a real option (mesh size), so help is --help only
  app.set_help_flag("--help", "print help");

  CommonOpts common;
  app.add_option("--cache-dir", common.cache_dir,
                 "reference cache directory (default: $KGE_CACHE_DIR or ./kge_cache)");
  app.add_option("--jobs", common.jobs, "worker threads for study cells");
  app.add_flag("--no-timings", common.no_timings, "write 0.000 wall_seconds (bit-stable reports)");

  // ---- solve ----
  auto* solve = app.add_subcommand("solve", "single run of the stepper");
  solve->set_help_flag("--help", "print help");
  solve->fallthrough();
  std::string s_problem = "weak", s_snapshots, s_config;
  double s_eps = 1.0, s_beta = 0.0, s_tau = 0.1, s_h = 1.0 / 16.0, s_t0 = 1.0;
  int s_modes = 64;
  bool s_dealias = false, s_project = false;
  solve->add_option("--problem", s_problem, "weak | oscillatory | whole-space");
  solve->add_option("--eps", s_eps, "nonlinearity strength in (0,1]; 0 = linear limit");
  solve->add_option("--beta", s_beta, "horizon exponent in [0,2]");
  solve->add_option("--tau", s_tau, "time step (tau in weak time, k in s time)");
  solve->add_option("--modes", s_modes, "mode count M for torus problems");
  solve->add_option("--h", s_h, "target mesh size for the whole-space problem");
  solve->add_option("--t0", s_t0, "base horizon T0");
  solve->add_flag("--dealias", s_dealias,
                  "evaluate the cubic alias-free (off: plain interpolation, as defined)");
  solve->add_flag("--project-initial", s_project, "start from P_M data instead of I_M");
  solve->add_option("--snapshots", s_snapshots, "comma-separated output times");
  solve->add_option("--out", common.out, "write nodal snapshots (t,x,u CSV)");
  solve->add_flag("--force", common.force, "overwrite existing output files");
  solve->add_option("--config", s_config, "key=value file; overrides flags");

  // ---- reference ----
  auto* refc = app.add_subcommand("reference", "build or load a cached oracle trajectory");
  refc->set_help_flag("--help", "print help");
  refc->fallthrough();
  std::string r_problem = "weak", r_times, r_config;
  double r_eps = 1.0, r_beta = 0.0, r_taue = 5e-4, r_h = 1.0 / 16.0, r_t0 = 1.0, r_floor = 0.0;
  int r_modes = 64;
  refc->add_option("--problem", r_problem, "weak | oscillatory | whole-space");
  refc->add_option("--eps", r_eps, "eps");
  refc->add_option("--beta", r_beta, "beta");
  refc->add_option("--taue", r_taue, "oracle step (problem time)");
  refc->add_option("--modes", r_modes, "oracle modes for torus problems");
  refc->add_option("--h", r_h, "oracle target mesh for whole-space");
  refc->add_option("--t0", r_t0, "horizon");
  refc->add_option("--times", r_times, "snapshot times (default: the horizon)");
  refc->add_option("--floor", r_floor,
                   "refuse if the self-convergence residual exceeds 1% of this");
  refc->add_option("--config", r_config, "key=value file; overrides flags");

  // ---- converge-time ----
  auto* ct = app.add_subcommand("converge-time", "temporal convergence study");
  ct->set_help_flag("--help", "print help");
  ct->fallthrough();
  std::string ct_preset, ct_problem = "weak", ct_eps = "1", ct_config;
  double ct_beta = 0.0, ct_t0 = 1.0, ct_ref_step = 5e-4, ct_ref_h = 1.0 / 16.0;
  double ct_step0 = 0.2, ct_ratio = 2.0, ct_fixed_h = 1.0 / 16.0;
  int ct_levels = 6, ct_modes = 64, ct_ref_modes = 64;
  ct->add_option("--preset", ct_preset, "published ladder preset (table1..table8)");
  ct->add_option("--problem", ct_problem, "weak | oscillatory | whole-space");
  ct->add_option("--eps-ladder", ct_eps, "comma-separated eps values, decreasing");
  ct->add_option("--beta", ct_beta, "beta");
  ct->add_option("--t0", ct_t0, "base horizon");
  ct->add_option("--step0", ct_step0, "coarsest step of the ladder");
  ct->add_option("--levels", ct_levels, "ladder length");
  ct->add_option("--ratio", ct_ratio, "ladder refinement ratio (2 or 4)");
  ct->add_option("--modes", ct_modes, "study modes (torus problems)");
  ct->add_option("--fixed-h", ct_fixed_h, "study mesh target (whole-space)");
  ct->add_option("--ref-step", ct_ref_step, "reference step (problem time)");
  ct->add_option("--ref-modes", ct_ref_modes, "reference modes (torus)");
  ct->add_option("--ref-h", ct_ref_h, "reference mesh target (whole-space)");
  ct->add_option("--out", common.out, "report file");
  ct->add_option("--format", common.format, "csv | json");
  ct->add_flag("--force", common.force, "overwrite existing report");
  ct->add_option("--budget", common.budget, "per-cell wall-clock budget in seconds");
  ct->add_option("--config", ct_config, "key=value file; overrides flags");

  // ---- converge-space ----
  auto* cs = app.add_subcommand("converge-space", "spatial convergence study");
  cs->set_help_flag("--help", "print help");
  cs->fallthrough();
  std::string cs_preset, cs_problem = "weak", cs_eps = "1", cs_config;
  double cs_beta = 0.0, cs_t0 = 1.0, cs_ref_step = 6.25e-5, cs_ref_h = 1.0 / 16.0;
  double cs_h0 = std::numbers::pi / 2.0, cs_fixed_step = 5e-4;
  int cs_levels = 4, cs_ref_modes = 64;
  cs->add_option("--preset", cs_preset, "published ladder preset (table1 or table5)");
  cs->add_option("--problem", cs_problem, "weak | oscillatory | whole-space");
  cs->add_option("--eps-ladder", cs_eps, "comma-separated eps values, decreasing");
  cs->add_option("--beta", cs_beta, "beta");
  cs->add_option("--t0", cs_t0, "base horizon");
  cs->add_option("--h0", cs_h0, "coarsest mesh of the ladder");
  cs->add_option("--levels", cs_levels, "ladder length");
  cs->add_option("--fixed-step", cs_fixed_step, "fixed fine time step");
  cs->add_option("--ref-step", cs_ref_step, "reference step (problem time)");
  cs->add_option("--ref-modes", cs_ref_modes, "reference modes (torus)");
  cs->add_option("--ref-h", cs_ref_h, "reference mesh target (whole-space)");
  cs->add_option("--out", common.out, "report file");
  cs->add_option("--format", common.format, "csv | json");
  cs->add_flag("--force", common.force, "overwrite existing report");
  cs->add_option("--budget", common.budget, "per-cell wall-clock budget in seconds");
  cs->add_option("--config", cs_config, "key=value file; overrides flags");

  // ---- eps-scaling ----
  auto* es = app.add_subcommand("eps-scaling", "error-vs-eps scaling fit at fixed h and step");
  es->set_help_flag("--help", "print help");
  es->fallthrough();
  std::string es_problem = "weak", es_eps = "1,0.5,0.25,0.125,0.0625,0.03125", es_config;
  double es_beta = 0.0, es_t0 = 1.0, es_ref_step = 5e-4, es_ref_h = 1.0 / 16.0;
  double es_step = 0.00625, es_fixed_h = 1.0 / 16.0;
  int es_modes = 64, es_ref_modes = 64;
  es->add_option("--problem", es_problem, "weak | oscillatory | whole-space");
  es->add_option("--eps-ladder", es_eps, "comma-separated eps values, decreasing");
  es->add_option("--beta", es_beta, "beta");
  es->add_option("--t0", es_t0, "base horizon");
  es->add_option("--step", es_step, "fixed time step");
  es->add_option("--modes", es_modes, "study modes (torus problems)");
  es->add_option("--fixed-h", es_fixed_h, "study mesh target (whole-space)");
  es->add_option("--ref-step", es_ref_step, "reference step (problem time)");
  es->add_option("--ref-modes", es_ref_modes, "reference modes (torus)");
  es->add_option("--ref-h", es_ref_h, "reference mesh target (whole-space)");
  es->add_option("--out", common.out, "report file");
  es->add_option("--format", common.format, "csv | json");
  es->add_flag("--force", common.force, "overwrite existing report");
  es->add_option("--budget", common.budget, "per-cell wall-clock budget in seconds");
  es->add_option("--config", es_config, "key=value file; overrides flags");

  // ---- oscillatory-table ----
  auto* ot = app.add_subcommand("oscillatory-table",
                                "published oscillatory benchmark presets (table5..table8)");
  ot->set_help_flag("--help", "print help");
  ot->fallthrough();
  std::string ot_preset = "table6", ot_config;
  ot->add_option("--preset", ot_preset, "table5 | table6 | table7 | table8");
  ot->add_option("--out", common.out, "report file");
  ot->add_option("--format", common.format, "csv | json");
  ot->add_flag("--force", common.force, "overwrite existing report");
  ot->add_option("--budget", common.budget, "per-cell wall-clock budget in seconds");
  ot->add_option("--config", ot_config, "key=value file; overrides flags");

  // ---- stability-probe ----
  auto* sp = app.add_subcommand(
      "stability-probe", "sufficient bound vs exact instability onset for the linearized scheme");
  sp->set_help_flag("--help", "print help");
  sp->fallthrough();
  double sp_h = std::numbers::pi, sp_eps = 1.0, sp_sigma = 0.0, sp_beta = 0.0;
  int sp_modes = 16;
  std::string sp_config;
  sp->add_option("--h", sp_h, "mesh size");
  sp->add_option("--eps", sp_eps, "eps");
  sp->add_option("--sigma", sp_sigma, "sigma_max of the linearization");
  sp->add_option("--beta", sp_beta, "0 probes the weak form, >0 the oscillatory form");
  sp->add_option("--modes", sp_modes, "mode count of the probe grid");
  sp->add_option("--config", sp_config, "key=value file; overrides flags");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;  // unknown flags / bad usage
  }

  try {
    if (*solve) {
      OverrideRegistry reg;
      reg.bind("problem", &s_problem);
      reg.bind("eps", &s_eps);
      reg.bind("beta", &s_beta);
      reg.bind("tau", &s_tau);
      reg.bind("modes", &s_modes);
      reg.bind("h", &s_h);
      reg.bind("t0", &s_t0);
      reg.bind("dealias", &s_dealias);
      reg.bind("project-initial", &s_project);
      reg.bind("snapshots", &s_snapshots);
      reg.bind("out", &common.out);
      reg.bind("force", &common.force);
      reg.apply(s_config);
      return cmd_solve(common, parse_problem(s_problem), s_eps, s_beta, s_tau, s_modes, s_h, s_t0,
                       s_dealias, s_project, s_snapshots);
    }

    if (*refc) {
      OverrideRegistry reg;
      reg.bind("problem", &r_problem);
      reg.bind("eps", &r_eps);
      reg.bind("beta", &r_beta);
      reg.bind("taue", &r_taue);
      reg.bind("modes", &r_modes);
      reg.bind("h", &r_h);
      reg.bind("t0", &r_t0);
      reg.bind("times", &r_times);
      reg.bind("floor", &r_floor);
      reg.apply(r_config);
      ReferenceSpec spec;
      spec.problem = parse_problem(r_problem);
      spec.eps = r_eps;
      spec.beta = r_beta;
      GridPtr g = problem_grid(spec.problem, r_eps, r_beta, r_modes,
                               spec.problem == Problem::whole_space ? r_h : 0.0);
      spec.a = g->a;
      spec.b = g->b;
      spec.modes = g->modes;
      const double scale = problem_in_s_time(spec.problem) ? std::pow(r_eps, -r_beta) : 1.0;
      spec.tau_e = r_taue * scale;
      std::vector<double> times;
      if (r_times.empty()) {
        times = {problem_in_s_time(spec.problem)
                     ? r_t0 * scale
                     : SolverParams(r_eps, r_beta, 1.0, r_t0).horizon()};
      } else {
        times = parse_ladder(r_times);
        for (double& t : times) t *= scale;
      }
      spec.times = times;
      auto sol = reference_solution(spec, common.cache(), r_floor);
      std::printf(
          "key hash: %s\ncache file: %s\nsnapshots: %zu (weak-time)\n"
          "self-convergence residual (H1): %.3e\n",
          sol.hash.c_str(), cache_path(common.cache(), sol.key).string().c_str(),
          sol.snaps.size(), sol.residual);
      return 0;
    }

    if (*ot) {
      OverrideRegistry reg;
      reg.bind("preset", &ot_preset);
      reg.bind("budget", &common.budget);
      reg.bind("out", &common.out);
      reg.bind("format", &common.format);
      reg.bind("force", &common.force);
      reg.apply(ot_config);
      return run_preset(ot_preset, common);
    }

    if (*ct) {
      OverrideRegistry reg;
      reg.bind("preset", &ct_preset);
      reg.bind("problem", &ct_problem);
      reg.bind("eps-ladder", &ct_eps);
      reg.bind("beta", &ct_beta);
      reg.bind("t0", &ct_t0);
      reg.bind("step0", &ct_step0);
      reg.bind("levels", &ct_levels);
      reg.bind("ratio", &ct_ratio);
      reg.bind("modes", &ct_modes);
      reg.bind("fixed-h", &ct_fixed_h);
      reg.bind("ref-step", &ct_ref_step);
      reg.bind("ref-modes", &ct_ref_modes);
      reg.bind("ref-h", &ct_ref_h);
      reg.bind("budget", &common.budget);
      reg.bind("out", &common.out);
      reg.bind("format", &common.format);
      reg.bind("force", &common.force);
      reg.apply(ct_config);
      if (!ct_preset.empty()) return run_preset(ct_preset, common);

      StudySpec spec;
      spec.problem = parse_problem(ct_problem);
      spec.kind = StudyKind::temporal;
      spec.eps_ladder = parse_ladder(ct_eps);
      spec.beta = ct_beta;
      spec.step_ladder = presets::half_ladder(ct_step0, ct_levels, ct_ratio);
      spec.fixed_modes = ct_modes;
      spec.fixed_h = ct_fixed_h;
      spec.t0 = ct_t0;
      spec.ref_step = ct_ref_step;
      spec.ref_modes = ct_ref_modes;
      spec.ref_h = ct_ref_h;
      spec.jobs = common.jobs;
      spec.cell_budget_seconds = common.budget;
      auto table = temporal_study(spec, common.cache());
      emit_or_print(table, common);
      return 0;
    }

    if (*cs) {
      OverrideRegistry reg;
      reg.bind("preset", &cs_preset);
      reg.bind("problem", &cs_problem);
      reg.bind("eps-ladder", &cs_eps);
      reg.bind("beta", &cs_beta);
      reg.bind("t0", &cs_t0);
      reg.bind("h0", &cs_h0);
      reg.bind("levels", &cs_levels);
      reg.bind("fixed-step", &cs_fixed_step);
      reg.bind("ref-step", &cs_ref_step);
      reg.bind("ref-modes", &cs_ref_modes);
      reg.bind("ref-h", &cs_ref_h);
      reg.bind("budget", &common.budget);
      reg.bind("out", &common.out);
      reg.bind("format", &common.format);
      reg.bind("force", &common.force);
      reg.apply(cs_config);
      if (!cs_preset.empty()) return run_preset(cs_preset, common);

      StudySpec spec;
      spec.problem = parse_problem(cs_problem);
      spec.kind = StudyKind::spatial;
      spec.eps_ladder = parse_ladder(cs_eps);
      spec.beta = cs_beta;
      spec.h_ladder = presets::half_ladder(cs_h0, cs_levels);
      spec.fixed_step = cs_fixed_step;
      spec.t0 = cs_t0;
      spec.ref_step = cs_ref_step;
      spec.ref_modes = cs_ref_modes;
      spec.ref_h = cs_ref_h;
      spec.jobs = common.jobs;
      spec.cell_budget_seconds = common.budget;
      auto table = spatial_study(spec, common.cache());
      emit_or_print(table, common);
      return 0;
    }

    if (*es) {
      OverrideRegistry reg;
      reg.bind("problem", &es_problem);
      reg.bind("eps-ladder", &es_eps);
      reg.bind("beta", &es_beta);
      reg.bind("t0", &es_t0);
      reg.bind("step", &es_step);
      reg.bind("modes", &es_modes);
      reg.bind("fixed-h", &es_fixed_h);
      reg.bind("ref-step", &es_ref_step);
      reg.bind("ref-modes", &es_ref_modes);
      reg.bind("ref-h", &es_ref_h);
      reg.bind("budget", &common.budget);
      reg.bind("out", &common.out);
      reg.bind("format", &common.format);
      reg.bind("force", &common.force);
      reg.apply(es_config);

      StudySpec spec;
      spec.problem = parse_problem(es_problem);
      spec.kind = StudyKind::eps_scaling;
      spec.eps_ladder = parse_ladder(es_eps);
      spec.beta = es_beta;
      spec.fixed_step = es_step;
      spec.fixed_modes = es_modes;
      spec.fixed_h = es_fixed_h;
      spec.t0 = es_t0;
      spec.ref_step = es_ref_step;
      spec.ref_modes = es_ref_modes;
      spec.ref_h = es_ref_h;
      spec.jobs = common.jobs;
      spec.cell_budget_seconds = common.budget;
      auto rep = eps_scaling_study(spec, common.cache());
      std::printf("fitted slope of log e vs log eps: %.3f (expected %.1f, tolerance 0.3)\n",
                  rep.fitted_slope, rep.expected_slope);
      for (const auto& r : rep.table.records)
        std::printf("  eps=%-9g eH0=%.3e eH1=%.3e steps=%ld %s\n", r.eps, r.error_h0, r.error_h1,
                    r.steps, r.flag.c_str());
      if (!common.out.empty()) {
        emit_report(rep.table.records, common.out, common.format, common.force,
                    !common.no_timings);
        std::cout << "wrote " << common.out << "\n";
      }
      if (std::abs(rep.fitted_slope - rep.expected_slope) > 0.3) {
        std::cout << "eps-scaling gate FAILED\n";
        return 1;
      }
      std::cout << "eps-scaling gate passed\n";
      return 0;
    }

    if (*sp) {
      OverrideRegistry reg;
      reg.bind("h", &sp_h);
      reg.bind("eps", &sp_eps);
      reg.bind("sigma", &sp_sigma);
      reg.bind("beta", &sp_beta);
      reg.bind("modes", &sp_modes);
      reg.apply(sp_config);
      return cmd_stability_probe(sp_h, sp_eps, sp_sigma, sp_beta, sp_modes);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
