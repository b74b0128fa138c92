#include "dcop/problem.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

namespace dcop {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw std::invalid_argument("matrix data size " + std::to_string(data_.size()) +
                                " does not match shape " + std::to_string(rows_) + "x" +
                                std::to_string(cols_));
  }
}

double Matrix::at(std::size_t r, std::size_t c) const {
  if (r >= rows_ || c >= cols_) throw std::out_of_range("matrix index out of range");
  return (*this)(r, c);
}

Matrix Matrix::transposed() const {
  Matrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
  return out;
}

ConstraintTable::ConstraintTable(Matrix costs) : costs_(std::move(costs)) {
  if (costs_.size() > 0) {
    auto [lo, hi] = std::minmax_element(costs_.data().begin(), costs_.data().end());
    min_ = *lo;
    max_ = *hi;
  }
}

double oriented_lookup(const ConstraintTable& table, bool from_first, std::size_t d_self,
                       std::size_t d_other) {
  return from_first ? table.costs().at(d_self, d_other) : table.costs().at(d_other, d_self);
}

std::vector<Violation> validate(std::span<const std::size_t> domains, std::span<const Edge> edges) {
  std::vector<Violation> out;
  const std::size_t n = domains.size();
  if (n == 0) out.push_back({"empty problem", "n_agents must be positive"});
  for (std::size_t a = 0; a < n; ++a) {
    if (domains[a] == 0) out.push_back({"empty domain", "agent " + std::to_string(a)});
  }
  std::set<std::pair<AgentId, AgentId>> seen;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const Edge& edge = edges[e];
    const std::string where = "edge " + std::to_string(e) + " (" + std::to_string(edge.i) + "," +
                              std::to_string(edge.j) + ")";
    if (edge.i >= n || edge.j >= n) {
      out.push_back({"unknown agent", where});
      continue;
    }
    if (edge.i == edge.j) {
      out.push_back({"self loop", where});
      continue;
    }
    if (edge.i > edge.j) out.push_back({"non-canonical orientation", where});
    auto key = std::minmax(edge.i, edge.j);
    if (!seen.insert(key).second) out.push_back({"duplicate edge", where});
    const auto& t = edge.table;
    if (t.rows() != domains[edge.i] || t.cols() != domains[edge.j]) {
      out.push_back({"shape mismatch", where});
    }
    for (double c : t.costs().data()) {
      if (std::isnan(c)) {
        out.push_back({"nan cost", where});
        break;
      }
      if (!std::isfinite(c)) {
        out.push_back({"infinite cost", where});
        break;
      }
      if (c < 0.0) {
        out.push_back({"negative cost", where});
        break;
      }
    }
  }
  return out;
}

Problem::Problem(std::vector<std::size_t> domains, std::vector<Edge> edges, InstanceMeta meta)
    : domains_(std::move(domains)), edges_(std::move(edges)), meta_(std::move(meta)) {
  auto violations = validate(domains_, edges_);
  if (!violations.empty()) {
    std::string msg = "invalid problem:";
    for (const auto& v : violations) msg += " [" + v.kind + ": " + v.detail + "]";
    throw InvalidProblem(msg);
  }
  const std::size_t n = domains_.size();
  std::vector<std::vector<Incidence>> lists(n);
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    lists[edges_[e].i].push_back({edges_[e].j, e, true});
    lists[edges_[e].j].push_back({edges_[e].i, e, false});
  }
  offsets_.assign(n + 1, 0);
  for (std::size_t a = 0; a < n; ++a) {
    std::sort(lists[a].begin(), lists[a].end(),
              [](const Incidence& x, const Incidence& y) { return x.neighbor < y.neighbor; });
    offsets_[a + 1] = offsets_[a] + lists[a].size();
    incidence_.insert(incidence_.end(), lists[a].begin(), lists[a].end());
  }
}

std::span<const Incidence> Problem::incident(AgentId a) const {
  if (a >= n_agents()) throw std::out_of_range("agent index " + std::to_string(a) + " out of range");
  return std::span<const Incidence>(incidence_).subspan(offsets_[a], offsets_[a + 1] - offsets_[a]);
}

bool Problem::adjacent(AgentId a, AgentId b) const {
  auto inc = incident(a);
  return std::binary_search(inc.begin(), inc.end(), Incidence{b, 0, false},
                            [](const Incidence& x, const Incidence& y) { return x.neighbor < y.neighbor; });
}

void check_assignment(const Problem& problem, const Assignment& assignment) {
  if (assignment.size() != problem.n_agents()) {
    throw InvalidAssignment("assignment has " + std::to_string(assignment.size()) +
                            " values, problem has " + std::to_string(problem.n_agents()) + " agents");
  }
  for (std::size_t a = 0; a < assignment.size(); ++a) {
    if (assignment[a] < 0 || static_cast<std::size_t>(assignment[a]) >= problem.domain_size(a)) {
      throw InvalidAssignment("value " + std::to_string(assignment[a]) + " outside domain of agent " +
                              std::to_string(a));
    }
  }
}

double total_cost(const Problem& problem, const Assignment& assignment) {
  check_assignment(problem, assignment);
  double sum = 0.0;
  for (const Edge& e : problem.edges()) sum += e.table(assignment[e.i], assignment[e.j]);
  return sum;
}

double local_cost(const Problem& problem, AgentId agent, const Assignment& assignment) {
  if (agent >= problem.n_agents()) throw std::out_of_range("agent index out of range");
  check_assignment(problem, assignment);
  double sum = 0.0;
  for (const Incidence& inc : problem.incident(agent)) {
    sum += oriented_lookup(problem.edge(inc.edge).table, inc.first, assignment[agent],
                           assignment[inc.neighbor]);
  }
  return sum;
}

}  // namespace dcop
