// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "dcop/experiment.hpp"
#include "dcop/generators.hpp"
#include "dcop/gls.hpp"
#include "dcop/local_search.hpp"
#include "dcop/maxsum.hpp"
#include "support/test_support.hpp"

using namespace dcop;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::size_t worker_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

RandomParams random_params(std::size_t n, double density, std::size_t domain, std::int64_t lo = 0,
                           std::int64_t hi = 100) {
  RandomParams rp;
  rp.n = n;
  rp.density = density;
  rp.domain = domain;
  rp.cost_lo = lo;
  rp.cost_hi = hi;
  return rp;
}

// ---------------------------------------------------------------------------
// The bound and symmetry checks share the same 100 runs (50 per gamma); scopes
// and manners rotate across runs so every scope is exercised at both gammas.

struct BoundAndSymmetry {
  double worst_ratio = 0.0;  // max entry / bound, over all runs
  double max_excess = -1.0;  // max entry - (bound + 1e-9)
  std::size_t asymmetric = 0;
  std::size_t checks = 0;
  std::size_t runs = 0;
  std::vector<std::size_t> scope_runs = std::vector<std::size_t>(4, 0);
};

const BoundAndSymmetry& bound_and_symmetry() {
  static const BoundAndSymmetry result = [] {
    BoundAndSymmetry r;
    const Scope scopes[] = {Scope::cell, Scope::table, Scope::row, Scope::column};
    for (double gamma : {0.5, 0.9}) {
      const double bound = 1.0 / (1.0 - gamma);
      for (std::size_t k = 0; k < 50; ++k) {
        const auto problem = gen_random(random_params(30, 0.1, 5), 1000 + k / 5);
        const Scope scope = scopes[k % 4];
        const Manner manner = (k / 4) % 2 ? Manner::additive : Manner::multiplicative;
        RunOptions ro;
        ro.rounds = 500;
        ro.seed = split_seed(static_cast<std::uint64_t>(gamma * 10), k);
        ro.observer = [&](std::size_t, const AgentList& agents) {
          const auto mods = collect_modifiers(agents);
          for (const auto& agent : mods)
            for (const auto& m : agent)
              for (double v : m.data()) {
                r.max_excess = std::max(r.max_excess, v - (bound + 1e-9));
                r.worst_ratio = std::max(r.worst_ratio, v / bound);
              }
          r.asymmetric += asymmetric_edges(problem, mods);
          r.checks += problem.edges().size();
        };
        run(problem, Dgls({manner, gamma, scope, false}), ro);
        ++r.runs;
        ++r.scope_runs[k % 4];
      }
    }
    return r;
  }();
  return result;
}

Outcome penalty_bound() {
  const auto& r = bound_and_symmetry();
  Outcome o;
  o.pass = r.max_excess <= 0.0 && r.runs == 100;
  o.detail = std::to_string(r.runs) + " runs x 500 rounds; max entry / (1/(1-gamma)) = " + fmt("%.6f", r.worst_ratio);
  return o;
}

Outcome modifier_symmetry() {
  const auto& r = bound_and_symmetry();
  Outcome o;
  bool all_scopes = true;
  for (auto n : r.scope_runs) all_scopes &= n > 0;
  o.pass = r.asymmetric == 0 && all_scopes && r.checks > 0;
  o.detail = std::to_string(r.checks) + " edge checks at round starts over cel/tab/row/col; " +
             std::to_string(r.asymmetric) + " not bit-exact transposes";
  return o;
}

// ---------------------------------------------------------------------------

Outcome potential_game() {
  double worst = 0.0;
  std::size_t probes = 0;
  const Scope scopes[] = {Scope::cell, Scope::table, Scope::row, Scope::column};
  for (auto manner : {Manner::additive, Manner::multiplicative}) {
    for (std::size_t run_idx = 0; run_idx < 10; ++run_idx) {
      const auto problem = gen_random(random_params(30, 0.1, 5), 2000 + run_idx);
      std::mt19937_64 g(run_idx * 31 + (manner == Manner::additive ? 7 : 0));
      RunOptions ro;
      ro.rounds = 500;
      ro.seed = run_idx;
      Assignment current;
      ro.observer = [&](std::size_t round, const AgentList& agents) {
        if (round == 0 || round % 5 != 0) return;
        const auto mods = collect_modifiers(agents);
        current.resize(agents.size());
        for (std::size_t i = 0; i < agents.size(); ++i) current[i] = agents[i]->value();
        const AgentId i = g() % problem.n_agents();
        Assignment dev = current;
        dev[i] = static_cast<Value>(g() % problem.domain_size(i));
        const double delta_i = local_eff_cost(problem, mods, i, current[i], current, manner) -
                               local_eff_cost(problem, mods, i, dev[i], dev, manner);
        const double delta_phi = potential(problem, current, mods, manner) - potential(problem, dev, mods, manner);
        worst = std::max(worst, std::abs(delta_i - delta_phi));
        ++probes;
      };
      run(problem, Dgls({manner, 0.9, scopes[run_idx % 4], false}), ro);
    }
  }
  Outcome o;
  o.pass = worst <= 1e-9 && probes == 2000;
  o.detail = std::to_string(probes) + " probes (1000 per manner, 10 runs each); max |delta_i - delta_phi| = " +
             fmt("%.3g", worst);
  return o;
}

Outcome binary_cost_equivalence() {
  std::size_t mismatches = 0, compared = 0;
  for (std::size_t inst = 0; inst < 20; ++inst) {
    const auto problem = gen_random(random_params(15, 0.2, 4, 0, 1), 3000 + inst);
    for (double gamma : {0.3, 0.9}) {
      RunOptions ro;
      ro.rounds = 300;
      ro.seed = 77 + inst;
      ro.record_assignments = true;
      const auto a = run(problem, Dgls({Manner::additive, gamma, Scope::cell, false}), ro);
      const auto m = run(problem, Dgls({Manner::multiplicative, gamma, Scope::cell, false}), ro);
      ++compared;
      mismatches += a.assignments != m.assignments;
    }
  }
  Outcome o;
  o.pass = mismatches == 0;
  o.detail = std::to_string(compared) + " (A,cel) vs (M,cel) trace pairs on {0,1} costs; " +
             std::to_string(mismatches) + " differ";
  return o;
}

Outcome table_scope_equivalence() {
  std::size_t mismatches = 0, compared = 0;
  for (std::size_t inst = 0; inst < 20; ++inst) {
    const auto problem = gen_random(random_params(15, 0.2, 4), 4000 + inst);
    RunOptions ro;
    ro.rounds = 300;
    ro.seed = 99 + inst;
    ro.record_assignments = true;
    const auto mgm = run(problem, Mgm(), ro);
    for (double gamma : {0.3, 0.9}) {
      const auto d = run(problem, Dgls({Manner::additive, gamma, Scope::table, false}), ro);
      ++compared;
      mismatches += d.assignments != mgm.assignments;
    }
  }
  Outcome o;
  o.pass = mismatches == 0;
  o.detail = std::to_string(compared) + " DGLS(A,gamma,tab) vs MGM trace pairs; " + std::to_string(mismatches) +
             " differ";
  return o;
}

Outcome message_bounds() {
  std::size_t violations = 0, agent_rounds = 0, sync_rounds = 0;
  for (std::size_t inst = 0; inst < 10; ++inst) {
    const auto problem = gen_random(random_params(30, 0.1, 5), 5000 + inst);
    RunOptions ro;
    ro.rounds = 300;
    ro.seed = inst;
    ro.collect_messages = true;
    struct Case {
      std::unique_ptr<Algorithm> algo;
      std::size_t per_neighbor;
    };
    std::vector<Case> cases;
    cases.push_back({std::make_unique<Dgls>(), 3});
    cases.push_back({std::make_unique<Gdba>(), 2});
    cases.push_back({std::make_unique<Dsa>(), 1});
    for (const auto& c : cases) {
      const auto t = run(problem, *c.algo, ro);
      for (const auto& round : message_audit(t))
        for (AgentId i = 0; i < problem.n_agents(); ++i) {
          ++agent_rounds;
          violations += round[i] > c.per_neighbor * problem.degree(i);
          sync_rounds += c.per_neighbor == 3 && round[i] > 2 * problem.degree(i);
        }
    }
  }
  Outcome o;
  o.pass = violations == 0 && sync_rounds > 0;
  o.detail = std::to_string(agent_rounds) + " agent-rounds audited (DGLS<=3|N|, GDBA<=2|N|, DSA<=|N|); " +
             std::to_string(violations) + " over bound; DGLS sent SYNC in " + std::to_string(sync_rounds);
  return o;
}

// ---------------------------------------------------------------------------

std::vector<double> mean_penalty_series(const std::string& family, const std::string& params, std::size_t instances,
                                        std::size_t repeats, std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.family = family;
  cfg.params_json = params;
  cfg.instances = instances;
  cfg.repeats = repeats;
  cfg.rounds = 1000;
  cfg.algorithms = {R"({"algo":"gdba","manner":"M","violation":"NM","scope":"tab"})"};
  cfg.master_seed = seed;
  cfg.penalty_stats = true;
  const auto res = run_experiment(cfg, {worker_threads(), true});
  std::vector<double> out;
  for (const auto& row : res.rows) out.push_back(row.penalty->mean);
  return out;
}

Outcome penalty_dynamics() {
  const auto random = mean_penalty_series("random", R"({"n":50,"density":0.1,"domain":10})", 5, 2, 11);
  const auto meeting = mean_penalty_series(
      "meeting_scheduling", R"({"slots":10,"meetings":10,"persons":30})", 5, 2, 12);
  bool nondecreasing = true;
  for (std::size_t r = 1; r < random.size(); ++r) nondecreasing &= random[r] >= random[r - 1];
  std::vector<double> rounds(random.size());
  for (std::size_t r = 0; r < rounds.size(); ++r) rounds[r] = static_cast<double>(r);
  const double corr = pearson(rounds, random);
  const double ratio = random.back() > 0 ? meeting.back() / random.back() : 1.0;
  Outcome o;
  o.pass = nondecreasing && corr >= 0.99 && ratio <= 0.25;
  o.detail = "GDBA(M,NM,T), 10 runs x 1000 rounds: random mean " + fmt("%.4g", random.back()) +
             (nondecreasing ? " nondecreasing" : " DECREASES") + ", pearson " + fmt("%.5f", corr) +
             "; meeting mean " + fmt("%.4g", meeting.back()) + " = " + fmt("%.1f", 100 * ratio) + "% of random";
  return o;
}

std::vector<double> final_means(const std::string& family, const std::string& params,
                                const std::vector<std::string>& algorithms, std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.family = family;
  cfg.params_json = params;
  cfg.instances = 10;
  cfg.repeats = 5;
  cfg.rounds = 1000;
  cfg.algorithms = algorithms;
  cfg.master_seed = seed;
  const auto res = run_experiment(cfg, {worker_threads(), false});
  std::vector<double> out;
  for (const auto& row : res.rows)
    if (row.round == cfg.rounds) out.push_back(row.mean_best_so_far);
  return out;
}

double margin(double ours, double theirs) { return theirs > 0 ? (theirs - ours) / theirs : 0.0; }

Outcome dominance() {
  const auto sparse = final_means("random", R"({"n":70,"density":0.1,"domain":10})",
                                  {R"({"algo":"dgls","manner":"M","gamma":0.5,"scope":"col"})",
                                   R"({"algo":"dsa","p":0.8})",
                                   R"({"algo":"gdba","manner":"M","violation":"NM","scope":"tab"})"},
                                  21);
  const auto wgc = final_means("weighted_graph_coloring", R"({"n":60,"colors":3,"density":0.05})",
                               {R"({"algo":"dgls","manner":"M","gamma":0.9,"scope":"col"})",
                                R"({"algo":"gdba","manner":"M","violation":"NM","scope":"tab"})",
                                R"({"algo":"dms","lambda":0.9})"},
                               22);
  const double m_dsa = margin(sparse[0], sparse[1]);
  const double m_gdba = margin(sparse[0], sparse[2]);
  const double w_gdba = margin(wgc[0], wgc[1]);
  const double w_dms = margin(wgc[0], wgc[2]);
  Outcome o;
  o.pass = m_dsa >= 0.01 && m_gdba >= 0.01 && w_gdba >= 0.20 && w_dms >= 0.20;
  o.detail = "sparse random DGLS " + fmt("%.1f", sparse[0]) + " vs DSA " + fmt("%.1f", sparse[1]) + " (" +
             fmt("%.2f", 100 * m_dsa) + "%), GDBA " + fmt("%.1f", sparse[2]) + " (" + fmt("%.2f", 100 * m_gdba) +
             "%); WGC DGLS " + fmt("%.1f", wgc[0]) + " vs GDBA " + fmt("%.1f", wgc[1]) + " (" +
             fmt("%.1f", 100 * w_gdba) + "%), DMS " + fmt("%.1f", wgc[2]) + " (" + fmt("%.1f", 100 * w_dms) + "%)";
  return o;
}

// ---------------------------------------------------------------------------

Outcome maxsum_oracle() {
  std::size_t exact = 0;
  for (std::uint64_t k = 0; k < 25; ++k) {
    const std::size_t n = 2 + k % 9;
    const auto problem = testkit::random_tree(7000 + k, n, 4, testkit::real_costs(0, 100));
    const auto opt = testkit::brute_force(problem);
    RunOptions ro;
    ro.rounds = testkit::diameter(problem) + 1;
    ro.record_assignments = true;
    const auto t = run(problem, DampedMaxsum({0.0, DampDirection::both}), ro);
    exact += opt.argmins.size() == 1 && t.assignments.back() == opt.argmins[0] &&
             t.final_round().current_cost == opt.cost;
  }
  Outcome o;
  o.pass = exact == 25;
  o.detail = std::to_string(exact) + "/25 trees (2..10 vars, domain 2..4) solved exactly after diameter+1 rounds";
  return o;
}

Outcome local_search_monotonicity() {
  std::size_t mgm_bad = 0, mgm2_bad = 0;
  for (std::size_t inst = 0; inst < 20; ++inst) {
    const auto problem = gen_random(random_params(30, 0.1, 5), 8000 + inst);
    RunOptions ro;
    ro.rounds = 300;
    ro.seed = inst;
    mgm_bad += !testkit::nonincreasing(testkit::current_series(run(problem, Mgm(), ro)));
    mgm2_bad += !testkit::nonincreasing(testkit::current_series(run(problem, Mgm2(), ro)));
  }
  const auto joint = testkit::single_edge(2, 2, {0, 9, 9, 1});
  RunOptions ro;
  ro.rounds = 50;
  ro.initial = Assignment{1, 1};
  const double mgm_best = run(joint, Mgm(), ro).final_round().best_so_far;
  const double mgm2_best = run(joint, Mgm2(), ro).final_round().best_so_far;
  Outcome o;
  o.pass = mgm_bad == 0 && mgm2_bad == 0 && mgm_best == 1.0 && mgm2_best == 0.0;
  o.detail = "20 instances: MGM increases in " + std::to_string(mgm_bad) + ", MGM2 in " + std::to_string(mgm2_bad) +
             "; joint-move game best after 50 rounds: MGM " + fmt("%g", mgm_best) + ", MGM2 " + fmt("%g", mgm2_best);
  return o;
}

Outcome determinism() {
  const auto cfg = parse_experiment_config(R"({
    "benchmark": {"family": "scale_free", "params": {"n": 40, "m0": 3, "m1": 2, "domain": 5}},
    "instances": 3, "repeats": 3, "rounds": 200, "master_seed": 424242, "penalty_stats": true,
    "algorithms": [{"algo": "dsa", "p": 0.8}, {"algo": "mgm"}, {"algo": "mgm2"},
                   {"algo": "dgls", "manner": "M", "gamma": 0.5, "scope": "col"},
                   {"algo": "gdba", "manner": "M", "violation": "NM", "scope": "tab"},
                   {"algo": "dms", "lambda": 0.9}]})");
  const auto a = aggregated_csv(run_experiment(cfg, {1, false}), true);
  const auto b = aggregated_csv(run_experiment(cfg, {1, false}), true);
  const auto c = aggregated_csv(run_experiment(cfg, {8, false}), true);
  const auto d = aggregated_csv(run_experiment(cfg, {8, false}), true);
  Outcome o;
  o.pass = a == b && a == c && a == d && !a.empty();
  o.detail = std::to_string(a.size()) + "-byte aggregated CSV; 1-thread rerun " + (a == b ? "identical" : "DIFFERS") +
             ", 8-thread runs " + (a == c && a == d ? "identical" : "DIFFER");
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"penalty_bound", penalty_bound},
      {"modifier_symmetry", modifier_symmetry},
      {"potential_game", potential_game},
      {"binary_cost_manner_equivalence", binary_cost_equivalence},
      {"table_scope_equals_mgm", table_scope_equivalence},
      {"message_bounds", message_bounds},
      {"gdba_penalty_dynamics", penalty_dynamics},
      {"anytime_dominance", dominance},
      {"maxsum_acyclic_oracle", maxsum_oracle},
      {"mgm_monotonicity_and_joint_escape", local_search_monotonicity},
      {"experiment_determinism", determinism},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failures += !o.pass;
    std::printf("%s %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
