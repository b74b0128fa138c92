#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dcop {

using AgentId = std::size_t;
using Value = int;
using Assignment = std::vector<Value>;

class InvalidAssignment : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InvalidProblem : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Dense row-major matrix of reals. Used for constraint tables and cost
/// modifiers alike.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }

  double at(std::size_t r, std::size_t c) const;

  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  Matrix transposed() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Binary constraint cost table f_ij with cached minimum and maximum entry.
/// Rows index the lower-numbered endpoint's values.
class ConstraintTable {
 public:
  ConstraintTable() = default;
  explicit ConstraintTable(Matrix costs);
  ConstraintTable(std::size_t rows, std::size_t cols, std::vector<double> costs)
      : ConstraintTable(Matrix(rows, cols, std::move(costs))) {}

  std::size_t rows() const { return costs_.rows(); }
  std::size_t cols() const { return costs_.cols(); }
  const Matrix& costs() const { return costs_; }
  double operator()(std::size_t r, std::size_t c) const { return costs_(r, c); }

  double min_cost() const { return min_; }
  double max_cost() const { return max_; }

 private:
  Matrix costs_;
  double min_ = 0.0;
  double max_ = 0.0;
};

/// Cost lookup from one endpoint's point of view: the first index is always the
/// looking agent's value.
double oriented_lookup(const ConstraintTable& table, bool from_first, std::size_t d_self,
                       std::size_t d_other);

struct Edge {
  AgentId i;
  AgentId j;
  ConstraintTable table;
};

/// One edge seen from an agent. `first` is true when the agent is the
/// canonical row endpoint of the table.
struct Incidence {
  AgentId neighbor;
  std::size_t edge;
  bool first;
};

struct InstanceMeta {
  std::string family;
  std::uint64_t seed = 0;
  // Raw JSON text of the generator parameter object.
  std::string params_json = "{}";
};

struct Violation {
  std::string kind;
  std::string detail;
};

class Problem {
 public:
  Problem() = default;
  /// Builds the neighbor index. Throws InvalidProblem if validate() reports anything.
  Problem(std::vector<std::size_t> domains, std::vector<Edge> edges, InstanceMeta meta = {});

  std::size_t n_agents() const { return domains_.size(); }
  std::size_t domain_size(AgentId a) const { return domains_[a]; }
  std::span<const std::size_t> domains() const { return domains_; }
  std::span<const Edge> edges() const { return edges_; }
  const Edge& edge(std::size_t e) const { return edges_[e]; }

  /// Incident edges sorted by neighbor index.
  std::span<const Incidence> incident(AgentId a) const;
  std::size_t degree(AgentId a) const { return incident(a).size(); }
  bool adjacent(AgentId a, AgentId b) const;

  const InstanceMeta& meta() const { return meta_; }

 private:
  std::vector<std::size_t> domains_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_;
  std::vector<Incidence> incidence_;
  InstanceMeta meta_;
};

/// Checks every structural invariant without throwing.
std::vector<Violation> validate(std::span<const std::size_t> domains, std::span<const Edge> edges);
inline std::vector<Violation> validate(const Problem& p) { return validate(p.domains(), p.edges()); }

void check_assignment(const Problem& problem, const Assignment& assignment);

double total_cost(const Problem& problem, const Assignment& assignment);
double local_cost(const Problem& problem, AgentId agent, const Assignment& assignment);

}  // namespace dcop
