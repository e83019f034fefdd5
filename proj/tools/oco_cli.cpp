// Command-line front end: run one engine, sweep epsilon values, or run the
// numeric verification suites. Outputs are deterministic given the config.

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "oco/algo.hpp"
#include "oco/io.hpp"
#include "oco/metrics.hpp"
#include "oco/oracle.hpp"
#include "oco/scenarios.hpp"
#include "oco/verify.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct RunConfig {
  std::string scenario{"datacenter"};
  int n{10};
  std::uint64_t seed{42};
  std::string algo{"adaptive"};  // adaptive | ogd | fixed_rate | static_averaged
  double epsilon{0.5};
  double alpha{1.0};
  int T{25000};
  int checkpoint_every{100};
  std::string out{"out"};
};

void apply_json(RunConfig& cfg, const json& j) {
  if (j.contains("scenario")) cfg.scenario = j["scenario"].get<std::string>();
  if (j.contains("n")) cfg.n = j["n"].get<int>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("algo")) cfg.algo = j["algo"].get<std::string>();
  if (j.contains("epsilon")) cfg.epsilon = j["epsilon"].get<double>();
  if (j.contains("alpha")) cfg.alpha = j["alpha"].get<double>();
  if (j.contains("T")) cfg.T = j["T"].get<int>();
  if (j.contains("checkpoint_every")) cfg.checkpoint_every = j["checkpoint_every"].get<int>();
  if (j.contains("out")) cfg.out = j["out"].get<std::string>();
}

void validate(const RunConfig& cfg) {
  if (cfg.T < 1) throw std::invalid_argument("T must be >= 1");
  if (cfg.n < 1) throw std::invalid_argument("n must be >= 1");
  if (cfg.checkpoint_every < 1) throw std::invalid_argument("checkpoint-every must be >= 1");
  if (!(cfg.epsilon >= 0.0) || cfg.epsilon >= 1.0) throw std::invalid_argument("epsilon must be in [0,1)");
  if (!(cfg.alpha > 0.0)) throw std::invalid_argument("alpha must be > 0");
  if (cfg.scenario != "datacenter" && cfg.scenario != "static_lp" && cfg.scenario != "all_feasible") {
    throw std::invalid_argument("unknown scenario: " + cfg.scenario);
  }
  if (cfg.algo != "adaptive" && cfg.algo != "ogd" && cfg.algo != "fixed_rate" &&
      cfg.algo != "static_averaged") {
    throw std::invalid_argument("unknown algorithm: " + cfg.algo);
  }
}

struct RunArtifacts {
  oco::RunTrace trace;
  json summary;
  std::vector<oco::CheckpointRegret> checkpoints;
  bool monitors_pass{true};
};

std::unique_ptr<oco::ScenarioStream> make_stream(const RunConfig& cfg, double* f_star) {
  if (cfg.scenario == "datacenter") return oco::datacenter_scenario(cfg.n, cfg.seed);
  if (cfg.scenario == "all_feasible") return oco::all_feasible_scenario(cfg.n, cfg.seed);
  auto sc = oco::static_lp_scenario(cfg.n, cfg.seed);
  if (f_star) *f_star = sc.f_star;
  return std::move(sc.stream);
}

RunArtifacts execute(const RunConfig& cfg) {
  double f_star = 0.0;
  auto stream = make_stream(cfg, &f_star);
  const oco::ProblemSpec& spec = stream->problem();
  const auto tc = oco::TheoremConstants::from(spec);

  RunArtifacts art;
  oco::Vec x_bar;
  if (cfg.algo == "adaptive") {
    art.trace = oco::run(spec, *stream, cfg.epsilon, cfg.T);
  } else if (cfg.algo == "ogd") {
    art.trace = oco::run_ogd(spec, *stream, cfg.T);
  } else if (cfg.algo == "fixed_rate") {
    art.trace = oco::run_fixed_rate(spec, *stream, cfg.T);
  } else {
    auto res = oco::run_static_averaged(spec, *stream, cfg.alpha, cfg.epsilon, cfg.T);
    art.trace = std::move(res.trace);
    x_bar = std::move(res.x_bar);
  }

  art.checkpoints = oco::checkpoint_regrets(art.trace, spec, cfg.checkpoint_every);

  const double V = oco::violation(art.trace);
  const auto prop1 = oco::proposition1_monitor(art.trace, tc);
  const auto dual = oco::dual_bound_monitor(art.trace, tc);
  art.monitors_pass = prop1.pass && dual.pass;

  const auto stats = oco::perturbation_stats(art.trace);
  const oco::Vec w_sel = oco::select_b_T(art.trace);

  json j;
  j["config"] = {{"scenario", cfg.scenario}, {"n", cfg.n},       {"seed", cfg.seed},
                 {"algo", cfg.algo},         {"epsilon", cfg.epsilon}, {"alpha", cfg.alpha},
                 {"T", cfg.T},               {"checkpoint_every", cfg.checkpoint_every}};
  j["constants"] = {{"chi", tc.chi},
                    {"E", tc.E},
                    {"D", tc.consts.D},
                    {"F_star", tc.consts.F_star},
                    {"G_star", tc.consts.G_star},
                    {"G", tc.consts.G},
                    {"eta", tc.consts.eta}};
  j["violation"] = V;
  j["cum_cost"] = art.trace.cum_cost.back();
  j["max_dual_norm"] = dual.max_observed;
  j["selected_b_T"] = w_sel;
  j["underline_b"] = stats.underline_b;
  j["bar_b"] = stats.bar_b;
  j["monitors"] = {{"proposition1", prop1.pass ? "pass" : "fail"},
                   {"dual_bound", dual.pass ? "pass" : "fail"}};
  const bool adaptive_rate = cfg.algo == "adaptive" || cfg.algo == "ogd";
  if (adaptive_rate) {
    j["regret_bound"] = oco::regret_bound(cfg.T, cfg.epsilon, tc);
    j["violation_bound"] = oco::violation_bound(cfg.T, cfg.epsilon, tc);
  } else {
    j["bounds_note"] = "baseline-extrapolated: constants assume rho_T = T^-epsilon";
  }
  if (cfg.algo == "adaptive") {
    const auto obj = oco::cumulative_objective(art.trace);
    auto cost_over = [&](const oco::Vec& w) {
      oco::FeasibleSetSpec fsspec{spec.action_set, spec.constraints, w};
      return oco::hindsight_cost(obj, fsspec).value;
    };
    const double c_min = cost_over(stats.bar_b);
    const double c_sel = cost_over(w_sel);
    const double c_max = cost_over(stats.underline_b);
    j["hindsight_costs"] = {{"X_min", c_min},
                           {"X_T", c_sel},
                           {"X_max", c_max},
                           {"fixed_rate_comparator", c_min}};
    j["regret"] = art.trace.cum_cost.back() - c_sel;
  }
  if (cfg.algo == "static_averaged") {
    j["x_bar"] = x_bar;
    j["f_star"] = f_star;
    if (cfg.scenario == "static_lp") {
      double fxbar = 0.0;
      // static costs: every round has the same coefficients
      fxbar = oco::dot(art.trace.rounds.front().cost_coeffs, x_bar);
      j["f_x_bar"] = fxbar;
      j["optimality_gap"] = fxbar - f_star;
      oco::Vec slack = oco::add(spec.constraints.value(x_bar), art.trace.rounds.front().b);
      j["avg_violation_norm"] = oco::norm2(oco::positive_part(slack));
    }
  }
  art.summary = std::move(j);
  return art;
}

int write_artifacts(const RunConfig& cfg, const RunArtifacts& art) {
  fs::create_directories(cfg.out);
  oco::write_trace_csv(fs::path(cfg.out) / "trace.csv", art.trace, art.checkpoints);
  oco::write_plot_data(fs::path(cfg.out) / "plot.dat", art.trace, art.checkpoints);
  std::ofstream out(fs::path(cfg.out) / "summary.json", std::ios::binary);
  out << art.summary.dump(2) << '\n';
  return art.monitors_pass ? 0 : 2;
}

int cmd_run(const RunConfig& cfg) {
  validate(cfg);
  RunArtifacts art = execute(cfg);
  int rc = write_artifacts(cfg, art);
  std::cout << "run: scenario=" << cfg.scenario << " algo=" << cfg.algo << " T=" << cfg.T
            << " V=" << art.summary["violation"].dump()
            << " monitors=" << (art.monitors_pass ? "pass" : "FAIL") << "\n";
  return rc;
}

int sweep_threads() {
  if (const char* env = std::getenv("OCO_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1) return v;
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

int cmd_sweep(const RunConfig& base, const std::vector<double>& epsilons) {
  if (epsilons.empty()) {
    std::cerr << "sweep: empty epsilon list\n";
    return 1;
  }
  for (double e : epsilons) {
    if (!(e >= 0.0) || e >= 1.0) {
      std::cerr << "sweep: epsilon " << e << " outside [0,1)\n";
      return 1;
    }
  }
  validate(base);

  const int workers = sweep_threads();
  std::vector<RunArtifacts> arts(epsilons.size());
  std::vector<std::future<void>> futs;
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= epsilons.size()) return;
      RunConfig cfg = base;
      cfg.epsilon = epsilons[i];
      cfg.out = (fs::path(base.out) / ("eps_" + std::to_string(epsilons[i]))).string();
      arts[i] = execute(cfg);
    }
  };
  for (int w = 0; w < std::min<int>(workers, static_cast<int>(epsilons.size())); ++w) {
    futs.push_back(std::async(std::launch::async, worker));
  }
  for (auto& f : futs) f.get();

  // single collector writes all artifacts and the sweep matrix
  int rc = 0;
  fs::create_directories(base.out);
  std::ofstream matrix(fs::path(base.out) / "sweep.csv", std::ios::binary);
  matrix << "epsilon,final_regret,final_violation,max_dual_norm,regret_bound,violation_bound\n";
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    RunConfig cfg = base;
    cfg.epsilon = epsilons[i];
    cfg.out = (fs::path(base.out) / ("eps_" + std::to_string(epsilons[i]))).string();
    int r = write_artifacts(cfg, arts[i]);
    rc = std::max(rc, r);
    const json& s = arts[i].summary;
    matrix << epsilons[i] << ',' << (s.contains("regret") ? s["regret"].dump() : "") << ','
           << s["violation"].dump() << ',' << s["max_dual_norm"].dump() << ','
           << (s.contains("regret_bound") ? s["regret_bound"].dump() : "") << ','
           << (s.contains("violation_bound") ? s["violation_bound"].dump() : "") << '\n';
  }
  std::cout << "sweep: " << epsilons.size() << " runs, exit " << rc << "\n";
  return rc;
}

int cmd_verify() {
  const auto t0 = std::chrono::steady_clock::now();
  auto items = oco::verify::run_all();
  bool all = true;
  std::cout << "verification suites\n-------------------\n";
  for (const auto& it : items) {
    all = all && it.pass;
    std::cout << (it.pass ? "[pass] " : "[FAIL] ") << it.name << "  (worst " << it.worst << ")\n";
  }
  const auto dt =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0);
  std::cout << (all ? "all suites passed" : "FAILURES present") << " in " << dt.count() << " ms\n";
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"online convex optimization with long-term perturbed constraints"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string config_path;
  std::vector<double> epsilons;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file; flags override its fields");
    sub->add_option("--scenario", cfg.scenario, "datacenter | static_lp | all_feasible");
    sub->add_option("--n", cfg.n, "problem dimension");
    sub->add_option("--seed", cfg.seed, "scenario seed");
    sub->add_option("--algo", cfg.algo, "adaptive | ogd | fixed_rate | static_averaged");
    sub->add_option("--epsilon", cfg.epsilon, "rate exponent in [0,1)");
    sub->add_option("--alpha", cfg.alpha, "rate scale (static mode)");
    sub->add_option("--T", cfg.T, "horizon");
    sub->add_option("--checkpoint-every", cfg.checkpoint_every, "regret checkpoint stride");
    sub->add_option("--out", cfg.out, "output directory");
  };

  CLI::App* run_cmd = app.add_subcommand("run", "single run; writes trace.csv, summary.json, plot.dat");
  add_common(run_cmd);
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "one run per epsilon over the same seed");
  add_common(sweep_cmd);
  sweep_cmd->add_option("--epsilons", epsilons, "epsilon values in [0,1)")->expected(-1);
  CLI::App* verify_cmd = app.add_subcommand("verify", "run the numeric verification suites");

  CLI11_PARSE(app, argc, argv);

  try {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw std::runtime_error("cannot open config " + config_path);
      json j = json::parse(in);
      RunConfig from_file;
      apply_json(from_file, j);
      // flags already parsed into cfg win over file fields the user did not set;
      // simplest merge: start from file values, then re-apply parsed flags
      RunConfig merged = from_file;
      for (CLI::App* sub : {run_cmd, sweep_cmd}) {
        if (!sub->parsed()) continue;
        if (sub->count("--scenario")) merged.scenario = cfg.scenario;
        if (sub->count("--n")) merged.n = cfg.n;
        if (sub->count("--seed")) merged.seed = cfg.seed;
        if (sub->count("--algo")) merged.algo = cfg.algo;
        if (sub->count("--epsilon")) merged.epsilon = cfg.epsilon;
        if (sub->count("--alpha")) merged.alpha = cfg.alpha;
        if (sub->count("--T")) merged.T = cfg.T;
        if (sub->count("--checkpoint-every")) merged.checkpoint_every = cfg.checkpoint_every;
        if (sub->count("--out")) merged.out = cfg.out;
      }
      cfg = merged;
      if (j.contains("epsilons") && epsilons.empty()) {
        epsilons = j["epsilons"].get<std::vector<double>>();
      }
    }
    if (run_cmd->parsed()) return cmd_run(cfg);
    if (sweep_cmd->parsed()) return cmd_sweep(cfg, epsilons);
    if (verify_cmd->parsed()) return cmd_verify();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
