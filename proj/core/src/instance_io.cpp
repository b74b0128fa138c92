#include "dcop/instance_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace dcop {

using nlohmann::json;

std::string to_json(const Problem& problem, int indent) {
  json doc;
  doc["n_agents"] = problem.n_agents();
  doc["domains"] = std::vector<std::size_t>(problem.domains().begin(), problem.domains().end());
  json edges = json::array();
  for (const Edge& e : problem.edges()) {
    auto data = e.table.costs().data();
    edges.push_back({{"i", e.i}, {"j", e.j}, {"costs", std::vector<double>(data.begin(), data.end())}});
  }
  doc["edges"] = std::move(edges);
  const auto& meta = problem.meta();
  json params = json::parse(meta.params_json.empty() ? "{}" : meta.params_json);
  doc["meta"] = {{"family", meta.family}, {"seed", meta.seed}, {"params", params}};
  return doc.dump(indent) + "\n";
}

namespace {

template <typename T>
T required(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw InstanceFormatError(std::string("missing field '") + key + "'");
  }
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& ex) {
    throw InstanceFormatError(std::string("field '") + key + "': " + ex.what());
  }
}

}  // namespace

Problem from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& ex) {
    throw InstanceFormatError(std::string("malformed instance JSON: ") + ex.what());
  }
  const auto n = required<std::size_t>(doc, "n_agents");
  auto domains = required<std::vector<std::size_t>>(doc, "domains");
  if (domains.size() != n) {
    throw InstanceFormatError("domains has " + std::to_string(domains.size()) + " entries, expected " +
                              std::to_string(n));
  }
  if (!doc.contains("edges") || !doc["edges"].is_array()) throw InstanceFormatError("missing 'edges' array");

  std::vector<Edge> edges;
  for (const json& e : doc["edges"]) {
    const auto i = required<std::size_t>(e, "i");
    const auto j = required<std::size_t>(e, "j");
    if (i >= j) {
      throw InstanceFormatError("edge (" + std::to_string(i) + "," + std::to_string(j) +
                                ") violates canonical orientation i < j");
    }
    if (j >= n) throw InstanceFormatError("edge endpoint " + std::to_string(j) + " out of range");
    // JSON has no NaN literal; a null entry is how NaN leaks in from other writers.
    if (!e.contains("costs") || !e["costs"].is_array()) throw InstanceFormatError("edge without 'costs'");
    std::vector<double> costs;
    costs.reserve(e["costs"].size());
    for (const json& c : e["costs"]) {
      if (!c.is_number()) throw InstanceFormatError("non-numeric (NaN?) cost in edge (" + std::to_string(i) + "," + std::to_string(j) + ")");
      costs.push_back(c.get<double>());
    }
    if (costs.size() != domains[i] * domains[j]) {
      throw InstanceFormatError("edge (" + std::to_string(i) + "," + std::to_string(j) + ") has " +
                                std::to_string(costs.size()) + " costs, expected " +
                                std::to_string(domains[i] * domains[j]));
    }
    for (double c : costs) {
      if (std::isnan(c) || c < 0.0) {
        throw InstanceFormatError("negative or NaN cost in edge (" + std::to_string(i) + "," +
                                  std::to_string(j) + ")");
      }
    }
    edges.push_back({i, j, ConstraintTable(domains[i], domains[j], std::move(costs))});
  }

  InstanceMeta meta;
  if (doc.contains("meta") && doc["meta"].is_object()) {
    const json& m = doc["meta"];
    meta.family = m.value("family", "");
    meta.seed = m.value("seed", std::uint64_t{0});
    if (m.contains("params")) meta.params_json = m["params"].dump();
  }
  try {
    return Problem(std::move(domains), std::move(edges), std::move(meta));
  } catch (const InvalidProblem& ex) {
    throw InstanceFormatError(ex.what());
  }
}

void save_instance(const Problem& problem, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << to_json(problem);
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

Problem load_instance(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read instance " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

}  // namespace dcop
