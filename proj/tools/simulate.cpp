// Command-line front end for the BD-RIS cognitive-radio link simulator.
//
// Subcommands run seeded Monte Carlo sweeps (power-sweep, element-sweep,
// ith-sweep) or a single solve with its trace (single). A JSON config file
// provides the campaign definition; command-line flags override file values.

#include <chrono>
#include <cstdio>
#include <exception>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bdris/experiment.hpp"
#include "bdris/units.hpp"

namespace {

using namespace bdris;

struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::string out_path;
  std::string summary_path;
  std::string arch;
  std::string gain_mode;
  std::string power_rule;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "JSON config file")
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", flags.seed, "master seed override");
  cmd->add_option("--trials", flags.trials, "Monte Carlo trials override");
  cmd->add_option("--out", flags.out_path, "output CSV path");
  cmd->add_option("--summary", flags.summary_path, "also write per-point aggregates here");
  cmd->add_option("--arch", flags.arch, "architectures: bd, d or both")
      ->check(CLI::IsMember({"bd", "d", "both"}));
  cmd->add_option("--gain-mode", flags.gain_mode, "gain interpretation")
      ->check(CLI::IsMember({"feed", "paper-norm"}));
  cmd->add_option("--power-rule", flags.power_rule, "power allocation rule")
      ->check(CLI::IsMember({"kkt", "boundary"}));
}

std::vector<double> default_sweep_values(SweepKind kind) {
  switch (kind) {
    case SweepKind::PowerSweep:
      return {0, 5, 10, 15, 20, 25, 30, 35, 40};  // dBm
    case SweepKind::ElementSweep:
      return {8, 16, 32, 64};
    case SweepKind::IthSweep:
      return {1e-3, 3.16227766017e-3, 1e-2, 3.16227766017e-2, 1e-1, 3.16227766017e-1, 1.0};
  }
  return {};
}

ExperimentConfig build_config(SweepKind kind, const CommonFlags& flags) {
  ExperimentConfig cfg;
  if (!flags.config_path.empty()) {
    cfg = load_config(flags.config_path);
  } else {
    cfg.sweep_values = default_sweep_values(kind);
  }
  cfg.sweep = kind;
  if (flags.seed) cfg.master_seed = *flags.seed;
  if (flags.trials) cfg.trials = *flags.trials;
  if (flags.arch == "bd") cfg.fixed.architectures = {Architecture::BD};
  if (flags.arch == "d") cfg.fixed.architectures = {Architecture::D};
  if (flags.arch == "both") cfg.fixed.architectures = {Architecture::BD, Architecture::D};
  if (flags.gain_mode == "feed") cfg.fixed.gmode = GainMode::FeedVector;
  if (flags.gain_mode == "paper-norm") cfg.fixed.gmode = GainMode::PaperLiteralNorm;
  if (flags.power_rule == "kkt") cfg.fixed.prule = PowerRule::PaperKkt;
  if (flags.power_rule == "boundary") cfg.fixed.prule = PowerRule::BoundaryOptimal;
  return cfg;
}

std::string with_suffix(const std::string& path, const std::string& suffix) {
  const std::size_t dot = path.rfind('.');
  if (dot == std::string::npos) return path + suffix;
  return path.substr(0, dot) + suffix + path.substr(dot);
}

int run_sweep_command(SweepKind kind, const CommonFlags& flags) {
  ExperimentConfig cfg = build_config(kind, flags);
  std::string out = flags.out_path.empty() ? to_string(kind) + "_sweep.csv" : flags.out_path;

  // one campaign per interference threshold; multiple thresholds fan out to
  // suffixed files
  std::vector<double> thresholds = cfg.fixed.i_th_w;
  if (cfg.sweep == SweepKind::IthSweep) thresholds = {cfg.fixed.i_th_w.front()};
  const bool multi = cfg.sweep != SweepKind::IthSweep && thresholds.size() > 1;

  for (double i_th : thresholds) {
    ExperimentConfig run_cfg = cfg;
    run_cfg.fixed.i_th_w = {i_th};

    char suffix[48] = "";
    if (multi) std::snprintf(suffix, sizeof(suffix), "_ith%g", i_th);
    const std::string path = multi ? with_suffix(out, suffix) : out;

    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<TrialResult> results = run_sweep(run_cfg);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_csv(results, path);
    std::printf("%s: %zu rows -> %s  (%.1f s)\n", to_string(kind).c_str(), results.size(),
                path.c_str(), secs);
    if (!flags.summary_path.empty()) {
      const std::string spath =
          multi ? with_suffix(flags.summary_path, suffix) : flags.summary_path;
      write_summary_csv(aggregate(results), spath);
      std::printf("%s: summary -> %s\n", to_string(kind).c_str(), spath.c_str());
    }
  }
  return 0;
}

int run_single_command(const CommonFlags& flags, int trial, const std::string& arch) {
  ExperimentConfig cfg;
  if (!flags.config_path.empty()) cfg = load_config(flags.config_path);
  if (flags.seed) cfg.master_seed = *flags.seed;
  if (!flags.gain_mode.empty()) {
    cfg.fixed.gmode =
        flags.gain_mode == "feed" ? GainMode::FeedVector : GainMode::PaperLiteralNorm;
  }
  if (!flags.power_rule.empty()) {
    cfg.fixed.prule =
        flags.power_rule == "kkt" ? PowerRule::PaperKkt : PowerRule::BoundaryOptimal;
  }

  SceneParams scene = cfg.scene;
  scene.mx = cfg.fixed.mx;
  scene.my = cfg.fixed.my;
  LinkBudget budget;
  budget.p_max = dbm_to_watt(cfg.fixed.p_s_dbm);
  budget.q_p = dbm_to_watt(cfg.fixed.q_p_dbm);
  budget.sigma2 = cfg.fixed.sigma2_w;
  budget.i_th = cfg.fixed.i_th_w.front();
  SolverOptions opts = cfg.solver;
  opts.gmode = cfg.fixed.gmode;
  opts.prule = cfg.fixed.prule;

  const ChannelRealization chan =
      draw_channel(scene, cfg.master_seed, static_cast<std::uint64_t>(trial));
  const bool bd = arch != "d";
  const SolverReport rep = bd ? solve(chan, budget, opts) : solve_dris(chan, budget, opts);

  std::printf("architecture       : %s\n", bd ? "BD" : "D");
  std::printf("elements           : %d (%d x %d)\n", scene.elements(), scene.mx, scene.my);
  std::printf("seed / trial       : %llu / %d\n",
              static_cast<unsigned long long>(cfg.master_seed), trial);
  std::printf("P_max / Q_p        : %g W / %g W\n", budget.p_max, budget.q_p);
  std::printf("I_th / sigma^2     : %g W / %g W\n", budget.i_th, budget.sigma2);
  for (std::size_t t = 0; t < rep.se_trace.size(); ++t) {
    std::printf("  outer %2zu: se = %.9f bits/s/Hz\n", t + 1, rep.se_trace[t]);
  }
  std::printf("P_s*               : %.9g W\n", rep.p_s_star);
  std::printf("interference at PU : %.9g W (I_th %g W)\n", rep.interference_final, budget.i_th);
  std::printf("spectral efficiency: %.9f bits/s/Hz\n", rep.se_trace.back());
  std::printf("outer iterations   : %d (%s)\n", rep.outer_iters,
              rep.converged ? "converged" : "not converged");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Link-level simulator for a BD-RIS assisted underlay cognitive radio link"};
  app.require_subcommand(1);

  CommonFlags power_flags, element_flags, ith_flags, single_flags;
  int single_trial = 0;

  CLI::App* power = app.add_subcommand("power-sweep", "sweep the ST power budget [dBm]");
  add_common(power, power_flags);
  CLI::App* element = app.add_subcommand("element-sweep", "sweep the RIS element count");
  add_common(element, element_flags);
  CLI::App* ith = app.add_subcommand("ith-sweep", "sweep the interference threshold [W]");
  add_common(ith, ith_flags);
  CLI::App* single = app.add_subcommand("single", "one solve with its full trace");
  add_common(single, single_flags);
  single->add_option("--trial", single_trial, "trial index for the channel draw");

  CLI11_PARSE(app, argc, argv);

  try {
    if (power->parsed()) return run_sweep_command(SweepKind::PowerSweep, power_flags);
    if (element->parsed()) return run_sweep_command(SweepKind::ElementSweep, element_flags);
    if (ith->parsed()) return run_sweep_command(SweepKind::IthSweep, ith_flags);
    if (single->parsed()) {
      return run_single_command(single_flags, single_trial,
                                single_flags.arch == "d" ? "d" : "bd");
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
