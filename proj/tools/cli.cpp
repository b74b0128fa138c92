#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "dcop/algorithm_config.hpp"
#include "dcop/experiment.hpp"
#include "dcop/generators.hpp"
#include "dcop/instance_io.hpp"
#include "json.hpp"

namespace dcop::cli {

namespace {

using nlohmann::json;

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Optional flags that map 1:1 onto JSON keys; only flags actually given are emitted.
struct JsonFlags {
  std::vector<std::pair<std::string, std::optional<double>>> numbers;
  std::vector<std::pair<std::string, std::optional<std::int64_t>>> integers;
  std::vector<std::pair<std::string, std::optional<std::string>>> strings;
  std::vector<std::pair<std::string, bool>> switches;

  void number(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
    numbers.emplace_back(key, std::nullopt);
    app->add_option(flag, numbers.back().second, help);
  }
  void integer(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
    integers.emplace_back(key, std::nullopt);
    app->add_option(flag, integers.back().second, help);
  }
  void string(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
    strings.emplace_back(key, std::nullopt);
    app->add_option(flag, strings.back().second, help);
  }
  void toggle(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
    switches.emplace_back(key, false);
    app->add_flag(flag, switches.back().second, help);
  }

  json to_json() const {
    json obj = json::object();
    for (const auto& [k, v] : numbers)
      if (v) obj[k] = *v;
    for (const auto& [k, v] : integers)
      if (v) obj[k] = *v;
    for (const auto& [k, v] : strings)
      if (v) obj[k] = *v;
    for (const auto& [k, v] : switches)
      if (v) obj[k] = true;
    return obj;
  }

  // Pointers into these vectors are held by CLI11, so no reallocation after setup.
  void reserve() {
    numbers.reserve(32);
    integers.reserve(32);
    strings.reserve(32);
    switches.reserve(8);
  }
};

void add_generator_flags(CLI::App* app, JsonFlags& f) {
  f.integer(app, "--n", "n", "number of agents");
  f.number(app, "--density", "density", "per-pair edge probability");
  f.integer(app, "--domain", "domain", "domain size");
  f.integer(app, "--cost-lo", "cost_lo", "minimum cost");
  f.integer(app, "--cost-hi", "cost_hi", "maximum cost");
  f.string(app, "--mode", "mode", "density mode: per_pair or exact");
  f.integer(app, "--m0", "m0", "scale-free seed clique size");
  f.integer(app, "--m1", "m1", "scale-free edges per arriving node");
  f.integer(app, "--rows", "rows", "lattice rows");
  f.integer(app, "--cols", "cols", "lattice columns");
  f.integer(app, "--slots", "slots", "meeting-scheduling time slots");
  f.integer(app, "--meetings", "meetings", "number of meetings");
  f.integer(app, "--persons", "persons", "number of persons");
  f.integer(app, "--travel-lo", "travel_lo", "minimum travel time");
  f.integer(app, "--travel-hi", "travel_hi", "maximum travel time");
  f.integer(app, "--meetings-per-person", "meetings_per_person", "meetings attended per person");
  f.integer(app, "--colors", "colors", "graph-coloring colors");
  f.integer(app, "--weight-lo", "weight_lo", "minimum conflict weight");
  f.integer(app, "--weight-hi", "weight_hi", "maximum conflict weight");
}

void add_algorithm_flags(CLI::App* app, JsonFlags& f) {
  f.number(app, "--p", "p", "DSA move probability");
  f.toggle(app, "--allow-sideways", "allow_sideways", "DSA zero-gain moves");
  f.number(app, "--offer-p", "offer_p", "MGM2 offer probability");
  f.string(app, "--manner", "manner", "A or M");
  f.number(app, "--gamma", "gamma", "DGLS evaporation rate");
  f.string(app, "--scope", "scope", "cel, tab, row or col");
  f.toggle(app, "--evaporate-on-qlm-only", "evaporate_on_qlm_only", "DGLS ablation");
  f.string(app, "--violation", "violation", "GDBA violation rule: NZ, NM or MX");
  f.number(app, "--lambda", "lambda", "max-sum damping factor");
  f.string(app, "--damp-direction", "damp_direction", "both, var_only or func_only");
}

std::string algorithm_json(const std::string& algo, const JsonFlags& f) {
  json cfg = f.to_json();
  cfg["algo"] = algo;
  return cfg.dump();
}

std::size_t resolve_threads(std::optional<std::size_t> flag) {
  if (flag) return std::max<std::size_t>(*flag, 1);
  if (const char* env = std::getenv("DCOP_THREADS")) {
    try {
      return std::max<std::size_t>(std::stoul(env), 1);
    } catch (const std::exception&) {
      throw UsageError(std::string("DCOP_THREADS is not a number: ") + env);
    }
  }
  return 1;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
  if (!f) throw std::runtime_error("failed writing " + path);
}

std::string degree_summary(const Problem& p) {
  std::vector<std::size_t> deg;
  for (AgentId a = 0; a < p.n_agents(); ++a) deg.push_back(p.degree(a));
  std::sort(deg.begin(), deg.end());
  double mean = 0.0;
  for (auto d : deg) mean += static_cast<double>(d);
  mean /= static_cast<double>(deg.size());
  std::ostringstream s;
  s << "agents=" << p.n_agents() << " edges=" << p.edges().size() << " degree(min/mean/median/max)=" << deg.front()
    << "/" << mean << "/" << deg[deg.size() / 2] << "/" << deg.back();
  return s.str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Distributed constraint optimization simulator"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "generate a benchmark instance");
  std::string gen_family, gen_out;
  std::uint64_t gen_seed = 0;
  JsonFlags gen_flags;
  gen_flags.reserve();
  gen->add_option("--family", gen_family, "random, scale_free, lattice, meeting_scheduling, weighted_graph_coloring")
      ->required();
  gen->add_option("--seed", gen_seed, "generator seed")->required();
  gen->add_option("--out", gen_out, "output file (default stdout)");
  add_generator_flags(gen, gen_flags);

  // solve
  auto* solve = app.add_subcommand("solve", "run one algorithm on one instance");
  std::string solve_instance, solve_algo, solve_out;
  std::size_t solve_rounds = 1000;
  std::uint64_t solve_seed = 0;
  std::optional<std::size_t> solve_threads;
  bool solve_penalties = false;
  JsonFlags solve_flags;
  solve_flags.reserve();
  solve->add_option("instance", solve_instance, "instance JSON file")->required();
  solve->add_option("--algo", solve_algo, "dsa, mgm, mgm2, dgls, gdba or dms")->required();
  solve->add_option("--rounds", solve_rounds, "number of rounds")->check(CLI::PositiveNumber);
  solve->add_option("--seed", solve_seed, "master seed");
  solve->add_option("--out", solve_out, "trace CSV path (default stdout)");
  solve->add_option("--threads", solve_threads, "worker threads within a phase");
  solve->add_flag("--penalty-stats", solve_penalties, "record penalty statistics");
  add_algorithm_flags(solve, solve_flags);

  // experiment
  auto* exp = app.add_subcommand("experiment", "run a sweep from a config file and aggregate");
  std::string exp_config, exp_out, exp_per_run;
  std::optional<std::uint64_t> exp_seed;
  std::optional<std::size_t> exp_rounds, exp_threads;
  exp->add_option("config", exp_config, "experiment JSON config")->required();
  exp->add_option("--seed", exp_seed, "override master_seed");
  exp->add_option("--rounds", exp_rounds, "override rounds")->check(CLI::PositiveNumber);
  exp->add_option("--out", exp_out, "aggregated CSV path (overrides config output)");
  exp->add_option("--threads", exp_threads, "parallel runs");
  exp->add_option("--per-run-output", exp_per_run, "also write unaggregated per-run rows");

  // diagnose
  auto* diag = app.add_subcommand("diagnose", "penalty dynamics of GDBA or DGLS");
  std::string diag_config, diag_family, diag_algo, diag_out;
  std::optional<std::uint64_t> diag_seed;
  std::optional<std::size_t> diag_rounds, diag_threads;
  std::size_t diag_instances = 1, diag_repeats = 1;
  JsonFlags diag_gen_flags, diag_algo_flags;
  diag_gen_flags.reserve();
  diag_algo_flags.reserve();
  diag->add_option("config", diag_config, "experiment JSON config (alternative to flags)");
  diag->add_option("--family", diag_family, "benchmark family");
  diag->add_option("--algo", diag_algo, "gdba or dgls");
  diag->add_option("--instances", diag_instances, "instances")->check(CLI::PositiveNumber);
  diag->add_option("--repeats", diag_repeats, "repeats per instance")->check(CLI::PositiveNumber);
  diag->add_option("--seed", diag_seed, "master seed");
  diag->add_option("--rounds", diag_rounds, "rounds")->check(CLI::PositiveNumber);
  diag->add_option("--out", diag_out, "CSV path (default stdout)");
  diag->add_option("--threads", diag_threads, "parallel runs");
  add_generator_flags(diag, diag_gen_flags);
  add_algorithm_flags(diag, diag_algo_flags);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    if (app.get_subcommands().empty()) {
      err << app.help();
    } else {
      err << "run with --help for usage\n";
    }
    return kExitUsage;
  }

  try {
    if (gen->parsed()) {
      const Problem p = dcop::generate(gen_family, gen_flags.to_json().dump(), gen_seed);
      const std::string text = to_json(p);
      write_output(gen_out, text, out);
      (gen_out.empty() ? err : out) << degree_summary(p) << "\n";
      return kExitOk;
    }

    if (solve->parsed()) {
      auto algorithm = make_algorithm(algorithm_json(solve_algo, solve_flags));
      const Problem problem = load_instance(solve_instance);
      RunOptions ro;
      ro.rounds = solve_rounds;
      ro.seed = solve_seed;
      ro.threads = resolve_threads(solve_threads);
      ro.collect_penalties = solve_penalties;
      const AnytimeTrace trace = run(problem, *algorithm, ro);
      write_output(solve_out, trace_csv(trace), out);
      (solve_out.empty() ? err : out) << algorithm->label() << " best_so_far " << trace.final_round().best_so_far
                                      << " after " << solve_rounds << " rounds\n";
      return kExitOk;
    }

    if (exp->parsed()) {
      ExperimentConfig cfg = parse_experiment_config(read_file(exp_config));
      if (exp_seed) cfg.master_seed = *exp_seed;
      if (exp_rounds) cfg.rounds = *exp_rounds;
      if (!exp_out.empty()) cfg.output = exp_out;
      const ExperimentResult result = run_experiment(cfg, {resolve_threads(exp_threads), false});
      write_output(cfg.output, aggregated_csv(result, cfg.penalty_stats), out);
      if (!exp_per_run.empty()) write_output(exp_per_run, per_run_csv(result, cfg), out);
      return kExitOk;
    }

    if (diag->parsed()) {
      ExperimentConfig cfg;
      if (!diag_config.empty()) {
        cfg = parse_experiment_config(read_file(diag_config));
      } else {
        if (diag_family.empty() || diag_algo.empty()) {
          throw UsageError("diagnose needs a config file or both --family and --algo");
        }
        json params = diag_gen_flags.to_json(), algo = diag_algo_flags.to_json();
        algo["algo"] = diag_algo;
        cfg.family = diag_family;
        cfg.params_json = params.dump();
        cfg.instances = diag_instances;
        cfg.repeats = diag_repeats;
        cfg.algorithms = {algo.dump()};
        dcop::generate(cfg.family, cfg.params_json, 0);
      }
      if (diag_seed) cfg.master_seed = *diag_seed;
      if (diag_rounds) cfg.rounds = *diag_rounds;
      if (!diag_out.empty()) cfg.output = diag_out;
      for (const auto& a : cfg.algorithms) {
        if (!make_algorithm(a)->has_penalties()) {
          throw UsageError("diagnose: '" + make_algorithm(a)->name() + "' has no penalties (use gdba or dgls)");
        }
      }
      cfg.penalty_stats = true;
      const ExperimentResult result = run_experiment(cfg, {resolve_threads(diag_threads), true});
      write_output(cfg.output, aggregated_csv(result, true), out);
      return kExitOk;
    }
  } catch (const GenerationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace dcop::cli
