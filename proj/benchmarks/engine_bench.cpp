// Round throughput per algorithm on the default sparse random benchmark
// (120 agents, density 0.1, domain 10).
#include <benchmark/benchmark.h>

#include <memory>

#include "dcop/algorithm_config.hpp"
#include "dcop/generators.hpp"
#include "dcop/gls.hpp"

namespace {

const dcop::Problem& sparse_random() {
  static const dcop::Problem p = dcop::gen_random({}, 1);
  return p;
}

void run_rounds(benchmark::State& state, const char* config) {
  const auto algo = dcop::make_algorithm(config);
  dcop::RunOptions ro;
  ro.rounds = static_cast<std::size_t>(state.range(0));
  ro.threads = static_cast<std::size_t>(state.range(1));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    ro.seed = seed++;
    benchmark::DoNotOptimize(dcop::run(sparse_random(), *algo, ro).final_round().best_so_far);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
  state.counters["rounds/s"] =
      benchmark::Counter(static_cast<double>(state.iterations() * state.range(0)), benchmark::Counter::kIsRate);
}

void args(benchmark::internal::Benchmark* b) {
  b->Args({100, 1})->Args({100, 4})->Unit(benchmark::kMillisecond);
}

}  // namespace

BENCHMARK_CAPTURE(run_rounds, dsa, R"({"algo":"dsa","p":0.8})")->Apply(args);
BENCHMARK_CAPTURE(run_rounds, mgm, R"({"algo":"mgm"})")->Apply(args);
BENCHMARK_CAPTURE(run_rounds, mgm2, R"({"algo":"mgm2"})")->Apply(args);
BENCHMARK_CAPTURE(run_rounds, dgls, R"({"algo":"dgls","manner":"M","gamma":0.5,"scope":"col"})")->Apply(args);
BENCHMARK_CAPTURE(run_rounds, gdba, R"({"algo":"gdba","manner":"M","violation":"NM","scope":"tab"})")->Apply(args);
BENCHMARK_CAPTURE(run_rounds, dms, R"({"algo":"dms","lambda":0.9})")->Apply(args);

namespace {

void increase_mod_column(benchmark::State& state) {
  dcop::Matrix m(10, 10);
  for (auto _ : state) {
    dcop::evaporate(m, 0.5);
    dcop::increase_mod(3, 7, true, true, dcop::Scope::column, m);
    benchmark::DoNotOptimize(m.data().data());
  }
}

}  // namespace

BENCHMARK(increase_mod_column);
BENCHMARK_MAIN();
