#include "bdris/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "bdris/units.hpp"

namespace bdris {

std::string to_string(Architecture arch) { return arch == Architecture::BD ? "BD" : "D"; }

std::string to_string(SweepKind kind) {
  switch (kind) {
    case SweepKind::PowerSweep: return "power";
    case SweepKind::ElementSweep: return "element";
    case SweepKind::IthSweep: return "ith";
  }
  return "?";
}

std::pair<int, int> aperture_shape(int m) {
  if (m < 1) throw std::invalid_argument("aperture_shape: element count must be >= 1");
  int mx = 1;
  for (int d = 1; d * d <= m; ++d) {
    if (m % d == 0) mx = d;
  }
  return {mx, m / mx};
}

void ExperimentConfig::validate() const {
  if (sweep_values.empty()) throw std::invalid_argument("config: sweep_values is empty");
  for (std::size_t i = 0; i < sweep_values.size(); ++i) {
    if (!std::isfinite(sweep_values[i])) {
      throw std::invalid_argument("config: sweep_values must be finite");
    }
    if (i > 0 && !(sweep_values[i] > sweep_values[i - 1])) {
      throw std::invalid_argument("config: sweep_values must be strictly increasing");
    }
  }
  if (sweep == SweepKind::ElementSweep) {
    for (double v : sweep_values) {
      if (v < 1.0 || v != std::floor(v)) {
        throw std::invalid_argument("config: element counts must be positive integers");
      }
    }
  }
  if (sweep == SweepKind::IthSweep) {
    for (double v : sweep_values) {
      if (v < 0.0) throw std::invalid_argument("config: i_th sweep values must be >= 0");
    }
  } else if (fixed.i_th_w.size() != 1) {
    // one threshold per campaign keeps the CSV schema flat; the CLI expands
    // multi-threshold configs into one run per entry
    throw std::invalid_argument("config: exactly one i_th is used per run of this sweep kind");
  }
  if (trials < 1) throw std::invalid_argument("config: trials must be >= 1");
  if (fixed.i_th_w.empty()) throw std::invalid_argument("config: i_th_list is empty");
  for (double v : fixed.i_th_w) {
    if (!(v >= 0.0)) throw std::invalid_argument("config: i_th values must be >= 0");
  }
  if (!(fixed.sigma2_w > 0.0)) throw std::invalid_argument("config: sigma2_w must be positive");
  if (fixed.m < 1 || fixed.mx < 1 || fixed.my < 1 || fixed.mx * fixed.my != fixed.m) {
    throw std::invalid_argument("config: mx * my must equal m");
  }
  if (!(fixed.k_factor >= 0.0)) throw std::invalid_argument("config: k must be >= 0");
  if (fixed.architectures.empty()) {
    throw std::invalid_argument("config: architectures is empty");
  }
  for (std::size_t i = 0; i < fixed.architectures.size(); ++i) {
    for (std::size_t j = i + 1; j < fixed.architectures.size(); ++j) {
      if (fixed.architectures[i] == fixed.architectures[j]) {
        throw std::invalid_argument("config: duplicate architecture");
      }
    }
  }
  for (const RicianParams* ric : {&scene.ric_h, &scene.ric_g, &scene.ric_f}) {
    if (!(ric->k_factor >= 0.0) || !(ric->h_hat >= 0.0) || !(ric->d > 0.0)) {
      throw std::invalid_argument("config: invalid Rician parameters");
    }
  }
  if (!(scene.f_c > 0.0)) throw std::invalid_argument("config: f_c_hz must be positive");
  solver.check();
}

namespace {

struct Scenario {
  LinkBudget budget;
  SceneParams scene;
  SolverOptions solver;
};

Scenario make_scenario(const ExperimentConfig& cfg, double sweep_value) {
  Scenario sc;
  sc.scene = cfg.scene;
  sc.scene.mx = cfg.fixed.mx;
  sc.scene.my = cfg.fixed.my;
  sc.budget.p_max = dbm_to_watt(cfg.fixed.p_s_dbm);
  sc.budget.q_p = dbm_to_watt(cfg.fixed.q_p_dbm);
  sc.budget.sigma2 = cfg.fixed.sigma2_w;
  sc.budget.i_th = cfg.fixed.i_th_w.front();
  sc.solver = cfg.solver;
  sc.solver.gmode = cfg.fixed.gmode;
  sc.solver.prule = cfg.fixed.prule;
  switch (cfg.sweep) {
    case SweepKind::PowerSweep:
      sc.budget.p_max = dbm_to_watt(sweep_value);
      break;
    case SweepKind::ElementSweep: {
      const auto [mx, my] = aperture_shape(static_cast<int>(sweep_value));
      sc.scene.mx = mx;
      sc.scene.my = my;
      break;
    }
    case SweepKind::IthSweep:
      sc.budget.i_th = sweep_value;
      break;
  }
  return sc;
}

int resolve_workers(int workers) {
  if (workers > 0) return workers;
  if (const char* env = std::getenv("SIMULATE_WORKERS")) {
    const int parsed = std::atoi(env);
    if (parsed > 0) return parsed;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

template <typename Body>
void parallel_for(std::size_t n, int workers, const Body& body) {
  const int count = std::min<std::size_t>(static_cast<std::size_t>(resolve_workers(workers)), n);
  if (count <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::atomic<bool> stop{false};
  auto work = [&] {
    while (!stop.load(std::memory_order_relaxed)) {
      const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= n) break;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        stop.store(true, std::memory_order_relaxed);
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(count);
  for (int t = 0; t < count; ++t) pool.emplace_back(work);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

std::vector<TrialResult> run_sweep(const ExperimentConfig& cfg, int workers) {
  cfg.validate();

  // canonical task order: sweep value, architecture (BD before D), trial
  std::vector<Architecture> archs = cfg.fixed.architectures;
  std::sort(archs.begin(), archs.end(),
            [](Architecture a, Architecture b) { return static_cast<int>(a) < static_cast<int>(b); });

  struct Task {
    double value;
    Architecture arch;
    int trial;
  };
  std::vector<Task> tasks;
  tasks.reserve(cfg.sweep_values.size() * archs.size() * static_cast<std::size_t>(cfg.trials));
  for (double value : cfg.sweep_values) {
    for (Architecture arch : archs) {
      for (int trial = 0; trial < cfg.trials; ++trial) {
        tasks.push_back({value, arch, trial});
      }
    }
  }

  std::vector<TrialResult> results(tasks.size());
  parallel_for(tasks.size(), workers, [&](std::size_t i) {
    const Task& task = tasks[i];
    const Scenario sc = make_scenario(cfg, task.value);
    const ChannelRealization chan =
        draw_channel(sc.scene, cfg.master_seed, static_cast<std::uint64_t>(task.trial));
    const SolverReport rep = task.arch == Architecture::BD
                                 ? solve(chan, sc.budget, sc.solver)
                                 : solve_dris(chan, sc.budget, sc.solver);
    results[i] = {task.value,    task.arch,
                  task.trial,    rep.se_trace.back(),
                  rep.p_s_star,  rep.interference_final,
                  rep.outer_iters, rep.converged};
  });
  return results;
}

std::vector<SweepAggregate> aggregate(const std::vector<TrialResult>& results) {
  if (results.empty()) throw std::invalid_argument("aggregate: empty result set");

  // canonical order makes the floating-point sums permutation-invariant
  std::vector<std::size_t> order(results.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const TrialResult& ra = results[a];
    const TrialResult& rb = results[b];
    if (ra.sweep_value != rb.sweep_value) return ra.sweep_value < rb.sweep_value;
    if (ra.architecture != rb.architecture) {
      return static_cast<int>(ra.architecture) < static_cast<int>(rb.architecture);
    }
    return ra.trial_index < rb.trial_index;
  });

  std::vector<SweepAggregate> out;
  std::size_t i = 0;
  while (i < order.size()) {
    const TrialResult& head = results[order[i]];
    std::size_t j = i;
    double sum = 0.0;
    while (j < order.size() && results[order[j]].sweep_value == head.sweep_value &&
           results[order[j]].architecture == head.architecture) {
      sum += results[order[j]].se_bits;
      ++j;
    }
    const int n = static_cast<int>(j - i);
    const double mean = sum / n;
    double sq = 0.0;
    for (std::size_t k = i; k < j; ++k) {
      const double dev = results[order[k]].se_bits - mean;
      sq += dev * dev;
    }
    const double stderr_se = n > 1 ? std::sqrt(sq / (n - 1)) / std::sqrt(double(n)) : 0.0;
    out.push_back({head.sweep_value, head.architecture, n, mean, stderr_se});
    i = j;
  }
  return out;
}

void write_csv(const std::vector<TrialResult>& results, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_csv: cannot open " + path);
  out << "sweep_value,architecture,trial,se_bits,ps_w,interference_w,iters,converged\n";
  for (const TrialResult& r : results) {
    out << format_real(r.sweep_value) << ',' << to_string(r.architecture) << ','
        << r.trial_index << ',' << format_real(r.se_bits) << ',' << format_real(r.p_s_w)
        << ',' << format_real(r.interference_w) << ',' << r.outer_iters << ','
        << (r.converged ? 1 : 0) << '\n';
  }
  if (!out.flush()) throw std::runtime_error("write_csv: write failed for " + path);
}

void write_summary_csv(const std::vector<SweepAggregate>& aggregates, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_summary_csv: cannot open " + path);
  out << "sweep_value,architecture,trials,mean_se_bits,stderr_se_bits\n";
  for (const SweepAggregate& a : aggregates) {
    out << format_real(a.sweep_value) << ',' << to_string(a.architecture) << ',' << a.trials
        << ',' << format_real(a.mean_se) << ',' << format_real(a.stderr_se) << '\n';
  }
  if (!out.flush()) throw std::runtime_error("write_summary_csv: write failed for " + path);
}

namespace {

using nlohmann::json;

void require_keys(const json& obj, const char* where,
                  std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* k) {
          return item.key() == k;
        }) == allowed.end()) {
      throw std::invalid_argument(std::string("config: unknown key '") + item.key() + "' in " +
                                  where);
    }
  }
}

GainMode parse_gain_mode(const std::string& s) {
  if (s == "feed") return GainMode::FeedVector;
  if (s == "paper-norm") return GainMode::PaperLiteralNorm;
  throw std::invalid_argument("config: gain_mode must be 'feed' or 'paper-norm'");
}

PowerRule parse_power_rule(const std::string& s) {
  if (s == "kkt") return PowerRule::PaperKkt;
  if (s == "boundary") return PowerRule::BoundaryOptimal;
  throw std::invalid_argument("config: power_rule must be 'kkt' or 'boundary'");
}

SweepKind parse_sweep_kind(const std::string& s) {
  if (s == "power") return SweepKind::PowerSweep;
  if (s == "element") return SweepKind::ElementSweep;
  if (s == "ith") return SweepKind::IthSweep;
  throw std::invalid_argument("config: sweep must be 'power', 'element' or 'ith'");
}

std::vector<Architecture> parse_architectures(const json& arr) {
  std::vector<Architecture> out;
  for (const auto& v : arr) {
    const std::string s = v.get<std::string>();
    if (s == "bd") {
      out.push_back(Architecture::BD);
    } else if (s == "d") {
      out.push_back(Architecture::D);
    } else {
      throw std::invalid_argument("config: architectures entries must be 'bd' or 'd'");
    }
  }
  return out;
}

RicianParams parse_rician(const json& obj, const char* where, const RicianParams& base) {
  require_keys(obj, where, {"k", "h_hat", "d"});
  RicianParams ric = base;
  if (obj.contains("k")) ric.k_factor = obj.at("k").get<double>();
  if (obj.contains("h_hat")) ric.h_hat = obj.at("h_hat").get<double>();
  if (obj.contains("d")) ric.d = obj.at("d").get<double>();
  return ric;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: JSON parse error: ") + e.what());
  }
  require_keys(doc, "document",
               {"sweep", "sweep_values", "trials", "master_seed", "fixed", "channel", "step",
                "solver"});

  ExperimentConfig cfg;
  if (doc.contains("sweep")) cfg.sweep = parse_sweep_kind(doc.at("sweep").get<std::string>());
  if (doc.contains("sweep_values")) {
    cfg.sweep_values = doc.at("sweep_values").get<std::vector<double>>();
  }
  if (doc.contains("trials")) cfg.trials = doc.at("trials").get<int>();
  if (doc.contains("master_seed")) cfg.master_seed = doc.at("master_seed").get<std::uint64_t>();

  if (doc.contains("fixed")) {
    const json& fx = doc.at("fixed");
    require_keys(fx, "fixed",
                 {"p_s_dbm", "q_p_dbm", "m", "mx", "my", "k", "i_th_list", "sigma2_w",
                  "gain_mode", "power_rule", "architectures"});
    if (fx.contains("p_s_dbm")) cfg.fixed.p_s_dbm = fx.at("p_s_dbm").get<double>();
    if (fx.contains("q_p_dbm")) cfg.fixed.q_p_dbm = fx.at("q_p_dbm").get<double>();
    if (fx.contains("m")) {
      cfg.fixed.m = fx.at("m").get<int>();
      // default the aperture to the near-square shape unless given explicitly
      const auto [mx, my] = aperture_shape(cfg.fixed.m);
      cfg.fixed.mx = mx;
      cfg.fixed.my = my;
    }
    if (fx.contains("mx")) cfg.fixed.mx = fx.at("mx").get<int>();
    if (fx.contains("my")) cfg.fixed.my = fx.at("my").get<int>();
    if (fx.contains("k")) cfg.fixed.k_factor = fx.at("k").get<double>();
    if (fx.contains("i_th_list")) {
      cfg.fixed.i_th_w = fx.at("i_th_list").get<std::vector<double>>();
    }
    if (fx.contains("sigma2_w")) cfg.fixed.sigma2_w = fx.at("sigma2_w").get<double>();
    if (fx.contains("gain_mode")) {
      cfg.fixed.gmode = parse_gain_mode(fx.at("gain_mode").get<std::string>());
    }
    if (fx.contains("power_rule")) {
      cfg.fixed.prule = parse_power_rule(fx.at("power_rule").get<std::string>());
    }
    if (fx.contains("architectures")) {
      cfg.fixed.architectures = parse_architectures(fx.at("architectures"));
    }
  }

  // the fixed Rician factor applies to every link unless a per-link block
  // overrides it
  cfg.scene.ric_h.k_factor = cfg.fixed.k_factor;
  cfg.scene.ric_g.k_factor = cfg.fixed.k_factor;
  cfg.scene.ric_f.k_factor = cfg.fixed.k_factor;

  if (doc.contains("channel")) {
    const json& ch = doc.at("channel");
    require_keys(ch, "channel", {"f_c_hz", "spacing_m", "h", "g", "f"});
    if (ch.contains("f_c_hz")) cfg.scene.f_c = ch.at("f_c_hz").get<double>();
    if (ch.contains("spacing_m")) cfg.scene.q = ch.at("spacing_m").get<double>();
    if (ch.contains("h")) cfg.scene.ric_h = parse_rician(ch.at("h"), "channel.h", cfg.scene.ric_h);
    if (ch.contains("g")) cfg.scene.ric_g = parse_rician(ch.at("g"), "channel.g", cfg.scene.ric_g);
    if (ch.contains("f")) cfg.scene.ric_f = parse_rician(ch.at("f"), "channel.f", cfg.scene.ric_f);
  }

  if (doc.contains("step")) {
    const json& st = doc.at("step");
    require_keys(st, "step",
                 {"eta0", "armijo_shrink", "armijo_slope", "max_inner", "epsilon", "mu0", "rho"});
    ManifoldStepConfig& step = cfg.solver.step;
    if (st.contains("eta0")) step.eta0 = st.at("eta0").get<double>();
    if (st.contains("armijo_shrink")) step.armijo_shrink = st.at("armijo_shrink").get<double>();
    if (st.contains("armijo_slope")) step.armijo_slope = st.at("armijo_slope").get<double>();
    if (st.contains("max_inner")) step.max_inner = st.at("max_inner").get<int>();
    if (st.contains("epsilon")) step.epsilon = st.at("epsilon").get<double>();
    if (st.contains("mu0")) step.mu0 = st.at("mu0").get<double>();
    if (st.contains("rho")) step.rho = st.at("rho").get<double>();
  }

  if (doc.contains("solver")) {
    const json& so = doc.at("solver");
    require_keys(so, "solver", {"outer_tol", "max_outer"});
    if (so.contains("outer_tol")) cfg.solver.outer_tol = so.at("outer_tol").get<double>();
    if (so.contains("max_outer")) cfg.solver.max_outer = so.at("max_outer").get<int>();
  }

  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_config: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace bdris
