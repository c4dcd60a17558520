#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "bdris/channel.hpp"
#include "bdris/solver.hpp"

namespace bdris {

enum class SweepKind { PowerSweep, ElementSweep, IthSweep };
enum class Architecture { BD, D };

std::string to_string(Architecture arch);
std::string to_string(SweepKind kind);

// Near-square aperture for a swept element count: mx is the largest divisor
// of m not exceeding sqrt(m), my = m/mx. 8 -> (2,4), 16 -> (4,4),
// 32 -> (4,8), 64 -> (8,8).
std::pair<int, int> aperture_shape(int m);

// Parameters held fixed across the sweep (the swept quantity overrides the
// matching entry per sweep value).
struct FixedParams {
  double p_s_dbm = 30.0;  // ST power budget
  double q_p_dbm = 40.0;  // PT transmit power
  int m = 32;
  int mx = 4;
  int my = 8;
  double k_factor = 10.0;
  std::vector<double> i_th_w = {0.1};  // thresholds; sweeps other than IthSweep use one entry
  double sigma2_w = 1e-9;
  GainMode gmode = GainMode::FeedVector;
  PowerRule prule = PowerRule::PaperKkt;
  std::vector<Architecture> architectures = {Architecture::BD, Architecture::D};
};

struct ExperimentConfig {
  SweepKind sweep = SweepKind::PowerSweep;
  std::vector<double> sweep_values;  // dBm / element counts / watts by sweep kind
  int trials = 1000;
  std::uint64_t master_seed = 1;
  FixedParams fixed;
  SceneParams scene;  // carrier, spacing and per-link Rician settings
  SolverOptions solver;

  void validate() const;  // throws std::invalid_argument
};

struct TrialResult {
  double sweep_value = 0.0;
  Architecture architecture = Architecture::BD;
  int trial_index = 0;
  double se_bits = 0.0;
  double p_s_w = 0.0;
  double interference_w = 0.0;
  int outer_iters = 0;
  bool converged = false;
};

struct SweepAggregate {
  double sweep_value = 0.0;
  Architecture architecture = Architecture::BD;
  int trials = 0;
  double mean_se = 0.0;
  double stderr_se = 0.0;  // sample stddev / sqrt(trials); 0 for a single row
};

// Runs every (sweep value x architecture x trial) combination; trials execute
// on a worker pool but results come back in canonical order
// (sweep value, architecture, trial index). workers <= 0 resolves the count
// from the SIMULATE_WORKERS environment variable, falling back to the
// hardware concurrency.
std::vector<TrialResult> run_sweep(const ExperimentConfig& cfg, int workers = 0);

// Mean and standard error of se_bits per (sweep value, architecture),
// invariant to input permutation. Throws std::invalid_argument on empty input.
std::vector<SweepAggregate> aggregate(const std::vector<TrialResult>& results);

// UTF-8 CSV with a fixed column order and reals rendered with 12 significant
// digits; identical inputs produce byte-identical files.
void write_csv(const std::vector<TrialResult>& results, const std::string& path);
void write_summary_csv(const std::vector<SweepAggregate>& aggregates, const std::string& path);

// JSON config loading; field names mirror ExperimentConfig. Unknown keys are
// rejected. parse_config takes the document text, load_config a file path.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

}  // namespace bdris
