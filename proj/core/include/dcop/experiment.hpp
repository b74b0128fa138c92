#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dcop/engine.hpp"

namespace dcop {

/// One sweep: every algorithm on `instances` generated problems, each solved
/// `repeats` times for `rounds` rounds.
struct ExperimentConfig {
  std::string family;
  std::string params_json = "{}";
  std::size_t instances = 1;
  std::size_t repeats = 1;
  std::size_t rounds = 1000;
  std::vector<std::string> algorithms;  // JSON algorithm configs
  std::uint64_t master_seed = 0;
  std::string output;
  bool penalty_stats = false;
};

/// Parses {"benchmark": {"family": ..., "params": {...}}, "instances": N,
/// "repeats": R, "rounds": T, "algorithms": [{...}], "master_seed": S,
/// "output": "...", "penalty_stats": bool}. Validates counts and algorithm configs.
ExperimentConfig parse_experiment_config(const std::string& text);

std::uint64_t instance_seed(std::uint64_t master_seed, std::size_t instance);
std::uint64_t run_seed(std::uint64_t master_seed, std::size_t instance, std::size_t repeat);

struct AggregateRow {
  std::string algorithm;
  std::string config_id;
  std::size_t round = 0;
  double mean_best_so_far = 0.0;
  double std_best_so_far = 0.0;
  std::size_t runs = 0;
  std::optional<PenaltyStats> penalty;  // per-round means over runs
};

struct RunSeries {
  std::size_t algorithm = 0;
  std::size_t instance = 0;
  std::size_t repeat = 0;
  std::vector<double> best_so_far;  // index = round, 0 = initial
  std::vector<PenaltyStats> penalty;
};

struct ExperimentResult {
  std::vector<AggregateRow> rows;  // canonical (algorithm, round) order
  std::vector<RunSeries> runs;     // canonical (algorithm, instance, repeat) order
};

struct ExperimentOptions {
  std::size_t threads = 1;
  bool include_initial_round = false;
};

/// Runs every (algorithm, instance, repeat) job, possibly in parallel, and
/// aggregates per round. Any failing run aborts the whole experiment.
ExperimentResult run_experiment(const ExperimentConfig& config, const ExperimentOptions& options = {});

/// algorithm,config_id,round,mean_best_so_far,std_best_so_far,runs[,penalty_mean,penalty_niqr,penalty_cv]
std::string aggregated_csv(const ExperimentResult& result, bool with_penalty);

/// algorithm,config_id,instance,repeat,round,best_so_far
std::string per_run_csv(const ExperimentResult& result, const ExperimentConfig& config);

/// round,current_cost,best_so_far,penalty_mean,penalty_niqr,penalty_cv,msgs_total
/// for rounds 1..R; penalty fields are empty when not collected.
std::string trace_csv(const AnytimeTrace& trace);

}  // namespace dcop
