#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "dcop/decision.hpp"
#include "dcop/engine.hpp"
#include "dcop/rng.hpp"

namespace dcop {

enum class Manner { additive, multiplicative };
enum class Scope { cell, table, row, column };
enum class ViolationRule { adaptive, non_zero, non_minimum, maximum };

std::string to_string(Manner m);   // "A" / "M"
std::string to_string(Scope s);    // "cel" / "tab" / "row" / "col"
std::string to_string(ViolationRule v);  // "AD" / "NZ" / "NM" / "MX"
Manner parse_manner(const std::string& s);
Scope parse_scope(const std::string& s);
ViolationRule parse_violation(const std::string& s);

// ---------------------------------------------------------------------------
// Penalty primitives. Modifier matrices are always oriented with the owning
// agent's values as rows.

/// Base cost combined with a penalty entry in the given manner.
inline double eff_cost(double base, double penalty, Manner manner) {
  return manner == Manner::additive ? base + penalty : base * (penalty + 1.0);
}

/// eff_cost at (d_self, d_other) for one incident edge.
double eff_cost(const ConstraintTable& table, bool first, const Matrix& modifier, std::size_t d_self,
                std::size_t d_other, Manner manner);

/// Flags the constraint with probability (f - min) / (max - min). A constant
/// table is never flagged. Always consumes exactly one draw.
bool is_violated_adaptive(const ConstraintTable& table, bool first, std::size_t d_self, std::size_t d_other,
                          Rng& rng);

/// NZ: f > 0, NM: f > min, MX: f == max. `rule` must not be adaptive.
bool is_violated_fixed(ViolationRule rule, const ConstraintTable& table, bool first, std::size_t d_self,
                       std::size_t d_other);

/// M <- gamma * M, elementwise.
void evaporate(Matrix& modifier, double gamma);

/// Coordinated update for one edge. `self_penalized`: this agent flagged the
/// edge; `neighbor_penalized`: the neighbor sent SYNC for it.
void increase_mod(std::size_t d_self, std::size_t d_other, bool self_penalized, bool neighbor_penalized,
                  Scope scope, Matrix& modifier);

/// Unilateral update from the agent's own side only.
void increase_mod_unilateral(std::size_t d_self, std::size_t d_other, Scope scope, Matrix& modifier);

/// Per-agent modifier copies: modifiers[i][k] is agent i's matrix for its k-th incident edge.
using ModifierSet = std::vector<std::vector<Matrix>>;

ModifierSet zero_modifiers(const Problem& problem);

/// Local effective cost of `agent` taking `value` against the other agents' values in `assignment`.
double local_eff_cost(const Problem& problem, const ModifierSet& modifiers, AgentId agent, Value value,
                      const Assignment& assignment, Manner manner);

/// Effective-cost best response of `agent` against the neighbor values in `assignment`.
BestResponse best_response(const Problem& problem, const ModifierSet& modifiers, AgentId agent,
                           const Assignment& assignment, Manner manner);

/// Half the sum over agents and their incident edges of the effective cost.
double potential(const Problem& problem, const Assignment& assignment, const ModifierSet& modifiers,
                 Manner manner);

/// Number of edges whose two endpoint copies are not exact transposes (bitwise).
std::size_t asymmetric_edges(const Problem& problem, const ModifierSet& modifiers);

// ---------------------------------------------------------------------------

struct DglsConfig {
  Manner manner = Manner::multiplicative;
  double gamma = 0.5;
  Scope scope = Scope::column;
  /// Ablation: evaporate only in rounds where the agent detected a QLM.
  /// Breaks endpoint symmetry; off by default.
  bool evaporate_on_qlm_only = false;
};

struct GdbaConfig {
  Manner manner = Manner::multiplicative;
  ViolationRule violation = ViolationRule::non_minimum;
  Scope scope = Scope::table;
};

/// Shared state of the penalty-based agents, exposed for inspection by observers.
class PenaltyAgent : public Agent {
 public:
  PenaltyAgent(const Problem& problem, AgentId id, std::uint64_t seed, Manner manner);

  void start(std::optional<Value> forced, Outbox& out) override;
  Value value() const override { return value_; }
  void append_penalties(std::vector<double>& out) const override;

  AgentId id() const { return id_; }
  std::span<const Matrix> modifiers() const { return modifiers_; }
  Manner manner() const { return manner_; }

 protected:
  /// Reads assignments, computes the effective best response and broadcasts the gain.
  void compute_and_send_gain(std::span<const Envelope> inbox, Outbox& out);
  /// True when this agent and every neighbor reported zero gain.
  bool in_qlm() const;

  const Problem& problem_;
  AgentId id_;
  std::span<const Incidence> incident_;
  Rng rng_;
  Manner manner_;
  Value value_ = 0;
  BestResponse br_{0, 0.0};
  std::vector<Matrix> modifiers_;
  std::vector<Value> neighbor_values_;
  std::vector<double> costs_;
  std::vector<double> gains_;
};

/// Collects every PenaltyAgent's modifiers; throws std::logic_error if an agent has none.
ModifierSet collect_modifiers(const AgentList& agents);

/// Distributed guided local search. Phases per round:
///   0 assignments: receive values, broadcast effective gain
///   1 gains:       move if best improvement; on QLM flag edges and send SYNC
///   2 sync:        receive SYNC, evaporate and coordinated update, broadcast value
class Dgls final : public Algorithm {
 public:
  explicit Dgls(DglsConfig config = {});
  std::string name() const override { return "dgls"; }
  std::string label() const override;
  PhasePlan plan() const override { return {{"assignments", "gains", "sync"}}; }
  std::unique_ptr<Agent> make_agent(const Problem& problem, AgentId id, std::uint64_t seed) const override;
  bool has_penalties() const override { return true; }
  const DglsConfig& config() const { return config_; }

 private:
  DglsConfig config_;
};

/// GDBA: fixed violation rule, no evaporation, each QLM agent penalizes from
/// its own side. Phases: assignments, gains.
class Gdba final : public Algorithm {
 public:
  explicit Gdba(GdbaConfig config = {});
  std::string name() const override { return "gdba"; }
  std::string label() const override;
  PhasePlan plan() const override { return {{"assignments", "gains"}}; }
  std::unique_ptr<Agent> make_agent(const Problem& problem, AgentId id, std::uint64_t seed) const override;
  bool has_penalties() const override { return true; }
  const GdbaConfig& config() const { return config_; }

 private:
  GdbaConfig config_;
};

}  // namespace dcop
