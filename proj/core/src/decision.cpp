#include "dcop/decision.hpp"

#include <algorithm>

namespace dcop {

BestResponse best_response(std::span<const double> local_costs, Value current) {
  double lowest = local_costs[0];
  for (double c : local_costs) lowest = std::min(lowest, c);
  const double here = local_costs[static_cast<std::size_t>(current)];
  if (here <= lowest + kGainTolerance) return {current, 0.0};
  Value best = 0;
  while (local_costs[static_cast<std::size_t>(best)] > lowest + kGainTolerance) ++best;
  const double gain = here - local_costs[static_cast<std::size_t>(best)];
  return {best, gain > kGainTolerance ? gain : 0.0};
}

std::size_t incidence_slot(std::span<const Incidence> incident, AgentId neighbor) {
  auto it = std::lower_bound(incident.begin(), incident.end(), neighbor,
                             [](const Incidence& inc, AgentId id) { return inc.neighbor < id; });
  if (it == incident.end() || it->neighbor != neighbor) return incident.size();
  return static_cast<std::size_t>(it - incident.begin());
}

void read_assignments(std::span<const Envelope> inbox, std::span<const Incidence> incident,
                      std::vector<Value>& values) {
  values.resize(incident.size());
  for (const Envelope& env : inbox) {
    const auto* msg = std::get_if<AssignmentMsg>(&env.body);
    if (msg == nullptr) continue;
    const std::size_t slot = incidence_slot(incident, env.sender);
    if (slot < incident.size()) values[slot] = msg->value;
  }
}

void read_gains(AgentId self, std::span<const Envelope> inbox, std::span<const Incidence> incident,
                std::vector<double>& gains) {
  gains.assign(incident.size(), -1.0);
  std::size_t seen = 0;
  for (const Envelope& env : inbox) {
    const auto* msg = std::get_if<GainMsg>(&env.body);
    if (msg == nullptr) continue;
    const std::size_t slot = incidence_slot(incident, env.sender);
    if (slot == incident.size()) continue;
    gains[slot] = msg->delta;
    ++seen;
  }
  if (seen != incident.size()) {
    throw ProtocolError("agent " + std::to_string(self) + " is missing gains from " +
                        std::to_string(incident.size() - seen) + " neighbor(s)");
  }
}

void base_local_costs(const Problem& problem, AgentId self, std::span<const Value> neighbor_values,
                      std::vector<double>& out) {
  const auto incident = problem.incident(self);
  out.assign(problem.domain_size(self), 0.0);
  for (std::size_t d = 0; d < out.size(); ++d) {
    double sum = 0.0;
    for (std::size_t k = 0; k < incident.size(); ++k) {
      sum += oriented_lookup(problem.edge(incident[k].edge).table, incident[k].first, d,
                             static_cast<std::size_t>(neighbor_values[k]));
    }
    out[d] = sum;
  }
}

bool wins_neighborhood(AgentId self, double gain, std::span<const Incidence> incident,
                       std::span<const double> gains, std::size_t skip) {
  for (std::size_t k = 0; k < incident.size(); ++k) {
    if (k == skip) continue;
    if (!beats(gain, self, gains[k], incident[k].neighbor)) return false;
  }
  return true;
}

}  // namespace dcop
