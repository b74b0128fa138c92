#include "dcop/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <utility>

#include "dcop/rng.hpp"
#include "json.hpp"

namespace dcop {

using nlohmann::json;

namespace {

using EdgeList = std::vector<std::pair<AgentId, AgentId>>;

std::string mode_name(DensityMode m) { return m == DensityMode::exact ? "exact" : "per_pair"; }

DensityMode parse_mode(const std::string& s) {
  if (s == "per_pair") return DensityMode::per_pair;
  if (s == "exact") return DensityMode::exact;
  throw std::invalid_argument("unknown density mode '" + s + "' (expected per_pair or exact)");
}

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

void check_costs(std::int64_t lo, std::int64_t hi, const char* lo_name, const char* hi_name) {
  require(lo >= 0, std::string(lo_name) + " must be >= 0");
  require(lo <= hi, std::string(lo_name) + " must be <= " + hi_name);
}

bool has_isolated(std::size_t n, const EdgeList& edges) {
  std::vector<bool> touched(n, false);
  for (auto [a, b] : edges) touched[a] = touched[b] = true;
  return std::find(touched.begin(), touched.end(), false) != touched.end();
}

// Erdos-Renyi style graph without isolated vertices, edges in (i, j) lexicographic order.
EdgeList random_graph(std::size_t n, double density, DensityMode mode, Rng& rng) {
  const std::size_t pairs = n * (n - 1) / 2;
  for (int attempt = 0; attempt < kMaxGraphAttempts; ++attempt) {
    EdgeList edges;
    if (mode == DensityMode::per_pair) {
      for (AgentId i = 0; i < n; ++i)
        for (AgentId j = i + 1; j < n; ++j)
          if (rng.bernoulli(density)) edges.emplace_back(i, j);
    } else {
      const auto want = static_cast<std::size_t>(std::llround(density * static_cast<double>(pairs)));
      std::vector<std::size_t> ids(pairs);
      std::iota(ids.begin(), ids.end(), std::size_t{0});
      for (std::size_t k = 0; k < want; ++k) std::swap(ids[k], ids[k + rng.below(pairs - k)]);
      std::vector<std::size_t> chosen(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(want));
      std::sort(chosen.begin(), chosen.end());
      // Decode lexicographic pair index.
      std::size_t idx = 0, next = 0;
      for (AgentId i = 0; i < n && next < chosen.size(); ++i) {
        for (AgentId j = i + 1; j < n && next < chosen.size(); ++j, ++idx) {
          if (chosen[next] == idx) {
            edges.emplace_back(i, j);
            ++next;
          }
        }
      }
    }
    if (!has_isolated(n, edges)) return edges;
  }
  throw GenerationError("could not draw a graph without isolated vertices in " + std::to_string(kMaxGraphAttempts) +
                        " attempts (density too low?)");
}

ConstraintTable uniform_table(std::size_t rows, std::size_t cols, std::int64_t lo, std::int64_t hi, Rng& rng) {
  std::vector<double> costs(rows * cols);
  for (double& c : costs) c = static_cast<double>(rng.between(lo, hi));
  return ConstraintTable(rows, cols, std::move(costs));
}

Problem with_uniform_tables(std::size_t n, std::size_t domain, EdgeList graph, std::int64_t lo, std::int64_t hi,
                            Rng& rng, InstanceMeta meta) {
  std::sort(graph.begin(), graph.end());
  std::vector<Edge> edges;
  edges.reserve(graph.size());
  for (auto [a, b] : graph) edges.push_back({a, b, uniform_table(domain, domain, lo, hi, rng)});
  return Problem(std::vector<std::size_t>(n, domain), std::move(edges), std::move(meta));
}

InstanceMeta make_meta(const std::string& family, std::uint64_t seed, const json& params) {
  return InstanceMeta{family, seed, params.dump()};
}

json to_json(const RandomParams& p) {
  return {{"n", p.n}, {"density", p.density}, {"domain", p.domain},
          {"cost_lo", p.cost_lo}, {"cost_hi", p.cost_hi}, {"mode", mode_name(p.mode)}};
}
json to_json(const ScaleFreeParams& p) {
  return {{"n", p.n}, {"m0", p.m0}, {"m1", p.m1}, {"domain", p.domain}, {"cost_lo", p.cost_lo}, {"cost_hi", p.cost_hi}};
}
json to_json(const LatticeParams& p) {
  return {{"rows", p.rows}, {"cols", p.cols}, {"domain", p.domain}, {"cost_lo", p.cost_lo}, {"cost_hi", p.cost_hi}};
}
json to_json(const MeetingParams& p) {
  return {{"slots", p.slots},         {"meetings", p.meetings},   {"persons", p.persons},
          {"travel_lo", p.travel_lo}, {"travel_hi", p.travel_hi}, {"meetings_per_person", p.meetings_per_person}};
}
json to_json(const ColoringParams& p) {
  return {{"n", p.n},
          {"colors", p.colors},
          {"density", p.density},
          {"weight_lo", p.weight_lo},
          {"weight_hi", p.weight_hi},
          {"mode", mode_name(p.mode)}};
}

}  // namespace

Problem gen_random(const RandomParams& p, std::uint64_t seed) {
  require(p.n >= 2, "random: n must be >= 2");
  require(p.density > 0.0 && p.density <= 1.0, "random: density must be in (0, 1]");
  require(p.domain >= 1, "random: domain must be >= 1");
  check_costs(p.cost_lo, p.cost_hi, "cost_lo", "cost_hi");
  Rng rng(seed);
  auto graph = random_graph(p.n, p.density, p.mode, rng);
  return with_uniform_tables(p.n, p.domain, std::move(graph), p.cost_lo, p.cost_hi, rng,
                             make_meta("random", seed, to_json(p)));
}

Problem gen_scale_free(const ScaleFreeParams& p, std::uint64_t seed) {
  require(p.m1 >= 1 && p.m0 >= p.m1 && p.n > p.m0, "scale_free: need n > m0 >= m1 >= 1");
  require(p.domain >= 1, "scale_free: domain must be >= 1");
  check_costs(p.cost_lo, p.cost_hi, "cost_lo", "cost_hi");
  Rng rng(seed);
  EdgeList graph;
  std::vector<std::uint64_t> degree(p.n, 0);
  for (AgentId i = 0; i < p.m0; ++i) {
    for (AgentId j = i + 1; j < p.m0; ++j) {
      graph.emplace_back(i, j);
      ++degree[i];
      ++degree[j];
    }
  }
  for (AgentId v = p.m0; v < p.n; ++v) {
    std::vector<bool> taken(v, false);
    std::vector<AgentId> targets;
    for (std::size_t k = 0; k < p.m1; ++k) {
      std::uint64_t total = 0;
      for (AgentId u = 0; u < v; ++u)
        if (!taken[u]) total += degree[u];
      AgentId pick = 0;
      if (total == 0) {
        // No degree mass left (e.g. a single seed node): uniform over free nodes.
        std::vector<AgentId> free;
        for (AgentId u = 0; u < v; ++u)
          if (!taken[u]) free.push_back(u);
        pick = free[rng.below(free.size())];
      } else {
        std::uint64_t r = rng.below(total);
        for (AgentId u = 0; u < v; ++u) {
          if (taken[u]) continue;
          if (r < degree[u]) {
            pick = u;
            break;
          }
          r -= degree[u];
        }
      }
      taken[pick] = true;
      targets.push_back(pick);
    }
    for (AgentId u : targets) {
      graph.emplace_back(u, v);
      ++degree[u];
      ++degree[v];
    }
  }
  return with_uniform_tables(p.n, p.domain, std::move(graph), p.cost_lo, p.cost_hi, rng,
                             make_meta("scale_free", seed, to_json(p)));
}

Problem gen_lattice(const LatticeParams& p, std::uint64_t seed) {
  require(p.rows >= 2 && p.cols >= 2, "lattice: rows and cols must be >= 2");
  require(p.domain >= 1, "lattice: domain must be >= 1");
  check_costs(p.cost_lo, p.cost_hi, "cost_lo", "cost_hi");
  Rng rng(seed);
  EdgeList graph;
  auto at = [&](std::size_t r, std::size_t c) { return r * p.cols + c; };
  for (std::size_t r = 0; r < p.rows; ++r) {
    for (std::size_t c = 0; c < p.cols; ++c) {
      if (c + 1 < p.cols) graph.emplace_back(at(r, c), at(r, c + 1));
      if (r + 1 < p.rows) graph.emplace_back(at(r, c), at(r + 1, c));
    }
  }
  return with_uniform_tables(p.rows * p.cols, p.domain, std::move(graph), p.cost_lo, p.cost_hi, rng,
                             make_meta("lattice", seed, to_json(p)));
}

Problem gen_meeting_scheduling(const MeetingParams& p, std::uint64_t seed) {
  require(p.slots >= 1, "meeting_scheduling: slots must be >= 1");
  require(p.meetings >= 1, "meeting_scheduling: meetings must be >= 1");
  require(p.meetings_per_person >= 1 && p.meetings_per_person <= p.meetings,
          "meeting_scheduling: need 1 <= meetings_per_person <= meetings");
  require(p.travel_lo >= 0 && p.travel_lo <= p.travel_hi, "meeting_scheduling: need 0 <= travel_lo <= travel_hi");
  Rng rng(seed);
  std::vector<std::vector<std::size_t>> shared(p.meetings, std::vector<std::size_t>(p.meetings, 0));
  std::vector<std::size_t> pool(p.meetings);
  for (std::size_t person = 0; person < p.persons; ++person) {
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    for (std::size_t k = 0; k < p.meetings_per_person; ++k) std::swap(pool[k], pool[k + rng.below(p.meetings - k)]);
    std::vector<std::size_t> mine(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(p.meetings_per_person));
    std::sort(mine.begin(), mine.end());
    for (std::size_t x = 0; x < mine.size(); ++x)
      for (std::size_t y = x + 1; y < mine.size(); ++y) ++shared[mine[x]][mine[y]];
  }
  std::vector<Edge> edges;
  for (std::size_t a = 0; a < p.meetings; ++a) {
    for (std::size_t b = a + 1; b < p.meetings; ++b) {
      if (shared[a][b] == 0) continue;
      const std::int64_t travel = rng.between(p.travel_lo, p.travel_hi);
      std::vector<double> costs(p.slots * p.slots);
      for (std::size_t ta = 0; ta < p.slots; ++ta)
        for (std::size_t tb = 0; tb < p.slots; ++tb)
          costs[ta * p.slots + tb] = meeting_conflict_cost(ta, tb, travel, static_cast<double>(shared[a][b]));
      edges.push_back({a, b, ConstraintTable(p.slots, p.slots, std::move(costs))});
    }
  }
  return Problem(std::vector<std::size_t>(p.meetings, p.slots), std::move(edges),
                 make_meta("meeting_scheduling", seed, to_json(p)));
}

Problem gen_wgc(const ColoringParams& p, std::uint64_t seed) {
  require(p.n >= 2, "weighted_graph_coloring: n must be >= 2");
  require(p.colors >= 2, "weighted_graph_coloring: colors must be >= 2");
  require(p.density > 0.0 && p.density <= 1.0, "weighted_graph_coloring: density must be in (0, 1]");
  check_costs(p.weight_lo, p.weight_hi, "weight_lo", "weight_hi");
  Rng rng(seed);
  auto graph = random_graph(p.n, p.density, p.mode, rng);
  std::vector<Edge> edges;
  edges.reserve(graph.size());
  for (auto [a, b] : graph) {
    const auto w = static_cast<double>(rng.between(p.weight_lo, p.weight_hi));
    Matrix costs(p.colors, p.colors, 0.0);
    for (std::size_t c = 0; c < p.colors; ++c) costs(c, c) = w;
    edges.push_back({a, b, ConstraintTable(std::move(costs))});
  }
  return Problem(std::vector<std::size_t>(p.n, p.colors), std::move(edges),
                 make_meta("weighted_graph_coloring", seed, to_json(p)));
}

namespace {

class ParamReader {
 public:
  ParamReader(const std::string& family, const std::string& text) : family_(family) {
    try {
      obj_ = text.empty() ? json::object() : json::parse(text);
    } catch (const json::parse_error& ex) {
      throw std::invalid_argument(family + ": malformed parameter JSON: " + ex.what());
    }
    if (!obj_.is_object()) throw std::invalid_argument(family + ": parameters must be a JSON object");
  }

  template <typename T>
  void get(const char* key, T& out) {
    used_.insert(key);
    if (!obj_.contains(key)) return;
    try {
      if constexpr (std::is_unsigned_v<T>) {
        if (obj_[key].is_number_integer() && obj_[key].template get<std::int64_t>() < 0) {
          throw std::invalid_argument(family_ + ": '" + key + "' must be nonnegative");
        }
      }
      out = obj_[key].template get<T>();
    } catch (const json::exception& ex) {
      throw std::invalid_argument(family_ + ": bad value for '" + key + "': " + ex.what());
    }
  }

  void mode(DensityMode& out) {
    std::string s = mode_name(out);
    get("mode", s);
    out = parse_mode(s);
  }

  void finish() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it) {
      if (!used_.count(it.key())) throw std::invalid_argument(family_ + ": unknown parameter '" + it.key() + "'");
    }
  }

 private:
  std::string family_;
  json obj_;
  std::set<std::string> used_;
};

}  // namespace

Problem generate(const std::string& family, const std::string& params_json, std::uint64_t seed) {
  ParamReader r(family, params_json);
  if (family == "random") {
    RandomParams p;
    r.get("n", p.n); r.get("density", p.density); r.get("domain", p.domain);
    r.get("cost_lo", p.cost_lo); r.get("cost_hi", p.cost_hi); r.mode(p.mode);
    r.finish();
    return gen_random(p, seed);
  }
  if (family == "scale_free") {
    ScaleFreeParams p;
    r.get("n", p.n); r.get("m0", p.m0); r.get("m1", p.m1); r.get("domain", p.domain);
    r.get("cost_lo", p.cost_lo); r.get("cost_hi", p.cost_hi);
    r.finish();
    return gen_scale_free(p, seed);
  }
  if (family == "lattice") {
    LatticeParams p;
    r.get("rows", p.rows); r.get("cols", p.cols); r.get("domain", p.domain);
    r.get("cost_lo", p.cost_lo); r.get("cost_hi", p.cost_hi);
    r.finish();
    return gen_lattice(p, seed);
  }
  if (family == "meeting_scheduling") {
    MeetingParams p;
    r.get("slots", p.slots); r.get("meetings", p.meetings); r.get("persons", p.persons);
    r.get("travel_lo", p.travel_lo); r.get("travel_hi", p.travel_hi);
    r.get("meetings_per_person", p.meetings_per_person);
    r.finish();
    return gen_meeting_scheduling(p, seed);
  }
  if (family == "weighted_graph_coloring") {
    ColoringParams p;
    r.get("n", p.n); r.get("colors", p.colors); r.get("density", p.density);
    r.get("weight_lo", p.weight_lo); r.get("weight_hi", p.weight_hi); r.mode(p.mode);
    r.finish();
    return gen_wgc(p, seed);
  }
  throw std::invalid_argument("unknown benchmark family '" + family + "'");
}

}  // namespace dcop
