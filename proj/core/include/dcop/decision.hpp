#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dcop/engine.hpp"
#include "dcop/problem.hpp"

namespace dcop {

/// Cost differences at or below this are treated as ties. Base costs are
/// integral in every generator, so this only absorbs rounding in penalty sums.
inline constexpr double kGainTolerance = 1e-9;

struct BestResponse {
  Value value;
  double gain;  // never negative; exactly 0 when no strict improvement exists
};

/// Best response over a per-value local cost vector. The current value is kept
/// when it is already optimal; otherwise the smallest optimal index wins.
BestResponse best_response(std::span<const double> local_costs, Value current);

/// Strict priority used by every "best improvement in the neighborhood" rule:
/// higher gain wins, equal gains (within tolerance) go to the lower index.
inline bool beats(double gain_a, AgentId a, double gain_b, AgentId b) {
  if (gain_a > gain_b + kGainTolerance) return true;
  if (gain_b > gain_a + kGainTolerance) return false;
  return a < b;
}

/// Fills `values` (aligned with problem.incident(self)) from assignment
/// messages in a sender-sorted inbox. Non-assignment messages are ignored.
void read_assignments(std::span<const Envelope> inbox, std::span<const Incidence> incident,
                      std::vector<Value>& values);

/// Collects one gain per neighbor, aligned with `incident`. Throws
/// ProtocolError if any neighbor's gain is missing.
void read_gains(AgentId self, std::span<const Envelope> inbox, std::span<const Incidence> incident,
                std::vector<double>& gains);

/// Slot of `neighbor` in the sorted incidence list, or incident.size().
std::size_t incidence_slot(std::span<const Incidence> incident, AgentId neighbor);

/// Local base cost of each own value against fixed neighbor values.
void base_local_costs(const Problem& problem, AgentId self, std::span<const Value> neighbor_values,
                      std::vector<double>& out);

/// True if `self` with `gain` beats every neighbor gain except the one at slot `skip`.
bool wins_neighborhood(AgentId self, double gain, std::span<const Incidence> incident,
                       std::span<const double> gains, std::size_t skip = static_cast<std::size_t>(-1));

}  // namespace dcop
