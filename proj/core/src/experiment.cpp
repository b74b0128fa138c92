#include "dcop/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <tbb/parallel_for.h>
#include <tbb/task_arena.h>

#include "dcop/algorithm_config.hpp"
#include "dcop/generators.hpp"
#include "dcop/rng.hpp"
#include "json.hpp"

namespace dcop {

using nlohmann::json;

namespace {

constexpr std::uint64_t kInstanceStream = 0x696e7374616e6365ULL;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::size_t positive_count(const json& doc, const char* key, std::size_t fallback) {
  if (!doc.contains(key)) return fallback;
  if (!doc[key].is_number_integer() || doc[key].get<std::int64_t>() < 1) {
    throw std::invalid_argument(std::string("experiment: '") + key + "' must be an integer >= 1");
  }
  return doc[key].get<std::size_t>();
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& ex) {
    throw std::invalid_argument(std::string("malformed experiment config: ") + ex.what());
  }
  if (!doc.is_object()) throw std::invalid_argument("experiment config must be a JSON object");
  ExperimentConfig cfg;
  if (!doc.contains("benchmark") || !doc["benchmark"].is_object() || !doc["benchmark"].contains("family")) {
    throw std::invalid_argument("experiment: missing benchmark.family");
  }
  cfg.family = doc["benchmark"]["family"].get<std::string>();
  cfg.params_json = doc["benchmark"].value("params", json::object()).dump();
  cfg.instances = positive_count(doc, "instances", 1);
  cfg.repeats = positive_count(doc, "repeats", 1);
  cfg.rounds = positive_count(doc, "rounds", 1000);
  cfg.master_seed = doc.value("master_seed", std::uint64_t{0});
  cfg.output = doc.value("output", std::string{});
  cfg.penalty_stats = doc.value("penalty_stats", false);
  if (!doc.contains("algorithms") || !doc["algorithms"].is_array() || doc["algorithms"].empty()) {
    throw std::invalid_argument("experiment: 'algorithms' must be a nonempty array");
  }
  for (const json& a : doc["algorithms"]) {
    cfg.algorithms.push_back(a.dump());
    make_algorithm(cfg.algorithms.back());  // validates
  }
  // Fail early on a bad benchmark template rather than inside a worker.
  generate(cfg.family, cfg.params_json, instance_seed(cfg.master_seed, 0));
  return cfg;
}

std::uint64_t instance_seed(std::uint64_t master_seed, std::size_t instance) {
  return split_seed(split_seed(master_seed, kInstanceStream), instance);
}

std::uint64_t run_seed(std::uint64_t master_seed, std::size_t instance, std::size_t repeat) {
  return split_seed(split_seed(master_seed, instance), repeat);
}

ExperimentResult run_experiment(const ExperimentConfig& config, const ExperimentOptions& options) {
  if (config.instances < 1 || config.repeats < 1 || config.rounds < 1) {
    throw std::invalid_argument("experiment: counts must be >= 1");
  }
  std::vector<std::unique_ptr<Algorithm>> algorithms;
  for (const auto& a : config.algorithms) algorithms.push_back(make_algorithm(a));
  if (algorithms.empty()) throw std::invalid_argument("experiment: no algorithms");

  std::vector<Problem> problems(config.instances);
  std::optional<tbb::task_arena> arena;
  if (options.threads > 1) arena.emplace(static_cast<int>(options.threads));
  auto parallel = [&](std::size_t n, auto&& fn) {
    if (!arena) {
      for (std::size_t i = 0; i < n; ++i) fn(i);
    } else {
      arena->execute([&] { tbb::parallel_for(std::size_t{0}, n, [&](std::size_t i) { fn(i); }); });
    }
  };

  parallel(config.instances, [&](std::size_t i) {
    problems[i] = generate(config.family, config.params_json, instance_seed(config.master_seed, i));
  });

  const std::size_t per_algo = config.instances * config.repeats;
  ExperimentResult result;
  result.runs.resize(algorithms.size() * per_algo);
  parallel(result.runs.size(), [&](std::size_t job) {
    RunSeries& series = result.runs[job];
    series.algorithm = job / per_algo;
    series.instance = (job % per_algo) / config.repeats;
    series.repeat = job % config.repeats;
    RunOptions ro;
    ro.rounds = config.rounds;
    ro.seed = run_seed(config.master_seed, series.instance, series.repeat);
    ro.collect_penalties = config.penalty_stats;
    const AnytimeTrace trace = run(problems[series.instance], *algorithms[series.algorithm], ro);
    for (const auto& rec : trace.rounds) {
      series.best_so_far.push_back(rec.best_so_far);
      if (rec.penalty) series.penalty.push_back(*rec.penalty);
    }
  });

  const std::size_t first_round = options.include_initial_round ? 0 : 1;
  for (std::size_t a = 0; a < algorithms.size(); ++a) {
    const bool penalties = config.penalty_stats && algorithms[a]->has_penalties();
    for (std::size_t r = first_round; r <= config.rounds; ++r) {
      AggregateRow row;
      row.algorithm = algorithms[a]->name();
      row.config_id = algorithms[a]->label();
      row.round = r;
      row.runs = per_algo;
      double sum = 0.0;
      PenaltyStats pen;
      for (std::size_t k = 0; k < per_algo; ++k) {
        const RunSeries& s = result.runs[a * per_algo + k];
        sum += s.best_so_far[r];
        if (penalties) {
          pen.mean += s.penalty[r].mean;
          pen.normalized_iqr += s.penalty[r].normalized_iqr;
          pen.cv += s.penalty[r].cv;
        }
      }
      const double n = static_cast<double>(per_algo);
      row.mean_best_so_far = sum / n;
      if (per_algo > 1) {
        double ss = 0.0;
        for (std::size_t k = 0; k < per_algo; ++k) {
          const double d = result.runs[a * per_algo + k].best_so_far[r] - row.mean_best_so_far;
          ss += d * d;
        }
        row.std_best_so_far = std::sqrt(ss / (n - 1.0));
      }
      if (penalties) {
        pen.mean /= n;
        pen.normalized_iqr /= n;
        pen.cv /= n;
        row.penalty = pen;
      }
      result.rows.push_back(std::move(row));
    }
  }
  return result;
}

std::string aggregated_csv(const ExperimentResult& result, bool with_penalty) {
  std::string out = "algorithm,config_id,round,mean_best_so_far,std_best_so_far,runs";
  if (with_penalty) out += ",penalty_mean,penalty_niqr,penalty_cv";
  out += "\n";
  for (const auto& row : result.rows) {
    out += row.algorithm + "," + row.config_id + "," + std::to_string(row.round) + "," + num(row.mean_best_so_far) +
           "," + num(row.std_best_so_far) + "," + std::to_string(row.runs);
    if (with_penalty) {
      if (row.penalty) {
        out += "," + num(row.penalty->mean) + "," + num(row.penalty->normalized_iqr) + "," + num(row.penalty->cv);
      } else {
        out += ",,,";
      }
    }
    out += "\n";
  }
  return out;
}

std::string per_run_csv(const ExperimentResult& result, const ExperimentConfig& config) {
  std::vector<std::string> labels;
  std::vector<std::string> names;
  for (const auto& a : config.algorithms) {
    auto algo = make_algorithm(a);
    names.push_back(algo->name());
    labels.push_back(algo->label());
  }
  std::string out = "algorithm,config_id,instance,repeat,round,best_so_far\n";
  for (const auto& s : result.runs) {
    for (std::size_t r = 1; r < s.best_so_far.size(); ++r) {
      out += names[s.algorithm] + "," + labels[s.algorithm] + "," + std::to_string(s.instance) + "," +
             std::to_string(s.repeat) + "," + std::to_string(r) + "," + num(s.best_so_far[r]) + "\n";
    }
  }
  return out;
}

std::string trace_csv(const AnytimeTrace& trace) {
  std::string out = "round,current_cost,best_so_far,penalty_mean,penalty_niqr,penalty_cv,msgs_total\n";
  for (std::size_t r = 1; r < trace.rounds.size(); ++r) {
    const auto& rec = trace.rounds[r];
    out += std::to_string(rec.round) + "," + num(rec.current_cost) + "," + num(rec.best_so_far) + ",";
    if (rec.penalty) {
      out += num(rec.penalty->mean) + "," + num(rec.penalty->normalized_iqr) + "," + num(rec.penalty->cv);
    } else {
      out += ",,";
    }
    out += "," + std::to_string(rec.msgs_total) + "\n";
  }
  return out;
}

}  // namespace dcop
