#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "dcop/experiment.hpp"
#include "dcop/generators.hpp"
#include "dcop/local_search.hpp"
#include "support/test_support.hpp"

using namespace dcop;

namespace {

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

const char* kSmall = R"({
  "benchmark": {"family": "random", "params": {"n": 12, "density": 0.3, "domain": 4}},
  "instances": 2, "repeats": 3, "rounds": 10,
  "algorithms": [{"algo": "dsa", "p": 0.8}, {"algo": "dgls", "manner": "M", "gamma": 0.5, "scope": "col"}],
  "master_seed": 5
})";

}  // namespace

TEST(Config, ParsesAndValidates) {
  const auto cfg = parse_experiment_config(kSmall);
  EXPECT_EQ(cfg.family, "random");
  EXPECT_EQ(cfg.instances, 2u);
  EXPECT_EQ(cfg.repeats, 3u);
  EXPECT_EQ(cfg.rounds, 10u);
  EXPECT_EQ(cfg.algorithms.size(), 2u);
  EXPECT_EQ(cfg.master_seed, 5u);
  EXPECT_FALSE(cfg.penalty_stats);

  EXPECT_THROW(parse_experiment_config("{"), std::invalid_argument);
  EXPECT_THROW(parse_experiment_config(R"({"instances":1,"algorithms":[{"algo":"mgm"}]})"), std::invalid_argument);
  EXPECT_THROW(parse_experiment_config(
                   R"({"benchmark":{"family":"lattice"},"instances":0,"algorithms":[{"algo":"mgm"}]})"),
               std::invalid_argument);
  EXPECT_THROW(parse_experiment_config(R"({"benchmark":{"family":"lattice"},"algorithms":[]})"),
               std::invalid_argument);
  EXPECT_THROW(parse_experiment_config(R"({"benchmark":{"family":"lattice"},"algorithms":[{"algo":"sa"}]})"),
               std::invalid_argument);
  EXPECT_THROW(parse_experiment_config(
                   R"({"benchmark":{"family":"lattice","params":{"rows":0}},"algorithms":[{"algo":"mgm"}]})"),
               std::invalid_argument);
}

TEST(Seeds, DerivedPerInstanceAndRepeat) {
  std::set<std::uint64_t> seen;
  for (std::size_t i = 0; i < 10; ++i) {
    seen.insert(instance_seed(1, i));
    for (std::size_t r = 0; r < 10; ++r) seen.insert(run_seed(1, i, r));
  }
  EXPECT_EQ(seen.size(), 110u);
  EXPECT_EQ(run_seed(1, 2, 3), run_seed(1, 2, 3));
  EXPECT_NE(run_seed(1, 2, 3), run_seed(2, 2, 3));
}

TEST(Experiment, Bookkeeping) {
  const auto cfg = parse_experiment_config(kSmall);
  const auto res = run_experiment(cfg);
  ASSERT_EQ(res.rows.size(), 20u);
  EXPECT_EQ(res.runs.size(), 12u);
  for (std::size_t k = 0; k < res.rows.size(); ++k) {
    EXPECT_EQ(res.rows[k].runs, 6u);
    EXPECT_EQ(res.rows[k].round, k % 10 + 1);
    EXPECT_EQ(res.rows[k].algorithm, k < 10 ? "dsa" : "dgls");
  }
  EXPECT_EQ(res.rows[0].config_id, "dsa:p=0.8");
  EXPECT_EQ(res.rows[10].config_id, "dgls:M:0.5:col");
  for (std::size_t k = 1; k < res.rows.size(); ++k)
    if (res.rows[k].algorithm == res.rows[k - 1].algorithm)
      EXPECT_LE(res.rows[k].mean_best_so_far, res.rows[k - 1].mean_best_so_far);
}

// The aggregate equals an independent recomputation from solo runs.
TEST(Experiment, MeanAndSampleStdMatchDirectRuns) {
  const auto cfg = parse_experiment_config(kSmall);
  const auto res = run_experiment(cfg);
  std::vector<double> finals;
  for (std::size_t i = 0; i < 2; ++i) {
    const auto p = dcop::generate("random", cfg.params_json, instance_seed(5, i));
    for (std::size_t r = 0; r < 3; ++r) {
      RunOptions ro;
      ro.rounds = 10;
      ro.seed = run_seed(5, i, r);
      finals.push_back(run(p, Dsa(), ro).final_round().best_so_far);
    }
  }
  double mean = 0;
  for (double f : finals) mean += f;
  mean /= 6.0;
  double ss = 0;
  for (double f : finals) ss += (f - mean) * (f - mean);
  EXPECT_NEAR(res.rows[9].mean_best_so_far, mean, 1e-9);
  EXPECT_NEAR(res.rows[9].std_best_so_far, std::sqrt(ss / 5.0), 1e-9);
}

TEST(Experiment, ConstantZeroInstancesGiveZeroMeans) {
  auto cfg = parse_experiment_config(R"({
    "benchmark": {"family": "random", "params": {"n": 8, "density": 0.5, "cost_lo": 0, "cost_hi": 0}},
    "instances": 2, "repeats": 2, "rounds": 5,
    "algorithms": [{"algo": "mgm"}, {"algo": "dms", "lambda": 0.7}]})");
  for (const auto& row : run_experiment(cfg).rows) {
    EXPECT_EQ(row.mean_best_so_far, 0.0);
    EXPECT_EQ(row.std_best_so_far, 0.0);
  }
}

TEST(Experiment, CsvIdenticalAcrossThreadCounts) {
  auto cfg = parse_experiment_config(kSmall);
  cfg.penalty_stats = true;
  const auto one = aggregated_csv(run_experiment(cfg, {1, false}), true);
  const auto many = aggregated_csv(run_experiment(cfg, {8, false}), true);
  EXPECT_EQ(one, many);
  EXPECT_EQ(one, aggregated_csv(run_experiment(cfg, {3, false}), true));
}

TEST(Experiment, CsvSchemas) {
  auto cfg = parse_experiment_config(kSmall);
  cfg.penalty_stats = true;
  const auto res = run_experiment(cfg);
  const auto agg = parse_csv(aggregated_csv(res, true));
  ASSERT_EQ(agg.size(), 21u);
  EXPECT_EQ(agg[0], (std::vector<std::string>{"algorithm", "config_id", "round", "mean_best_so_far", "std_best_so_far",
                                              "runs", "penalty_mean", "penalty_niqr", "penalty_cv"}));
  // DSA has no penalties: columns present but empty.
  EXPECT_EQ(agg[1].size(), 9u);
  EXPECT_EQ(agg[1][6], "");
  EXPECT_NE(agg[11][6], "");
  const auto plain = parse_csv(aggregated_csv(res, false));
  EXPECT_EQ(plain[0].size(), 6u);

  const auto per_run = parse_csv(per_run_csv(res, cfg));
  EXPECT_EQ(per_run.size(), 1u + 2 * 6 * 10);
  EXPECT_EQ(per_run[0],
            (std::vector<std::string>{"algorithm", "config_id", "instance", "repeat", "round", "best_so_far"}));
}

TEST(Experiment, InitialRoundOnRequest) {
  auto cfg = parse_experiment_config(kSmall);
  cfg.penalty_stats = true;
  const auto res = run_experiment(cfg, {1, true});
  ASSERT_EQ(res.rows.size(), 22u);
  EXPECT_EQ(res.rows[0].round, 0u);
  ASSERT_TRUE(res.rows[11].penalty.has_value());
  EXPECT_EQ(res.rows[11].penalty->mean, 0.0);
  EXPECT_EQ(res.rows[11].penalty->cv, 0.0);
}

TEST(TraceCsv, OneRowPerRound) {
  const auto p = gen_lattice({3, 3, 3, 0, 9}, 1);
  RunOptions ro;
  ro.rounds = 7;
  const auto rows = parse_csv(trace_csv(run(p, Mgm(), ro)));
  ASSERT_EQ(rows.size(), 8u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"round", "current_cost", "best_so_far", "penalty_mean", "penalty_niqr",
                                               "penalty_cv", "msgs_total"}));
  EXPECT_EQ(rows[1][0], "1");
  EXPECT_EQ(rows[7][0], "7");
  EXPECT_EQ(rows[1][3], "");
}
