#include "dcop/gls.hpp"

#include <bit>
#include <cstring>
#include <stdexcept>

#include "util.hpp"

namespace dcop {

std::string to_string(Manner m) { return m == Manner::additive ? "A" : "M"; }

std::string to_string(Scope s) {
  switch (s) {
    case Scope::cell: return "cel";
    case Scope::table: return "tab";
    case Scope::row: return "row";
    case Scope::column: return "col";
  }
  return "?";
}

std::string to_string(ViolationRule v) {
  switch (v) {
    case ViolationRule::adaptive: return "AD";
    case ViolationRule::non_zero: return "NZ";
    case ViolationRule::non_minimum: return "NM";
    case ViolationRule::maximum: return "MX";
  }
  return "?";
}

Manner parse_manner(const std::string& s) {
  if (s == "A" || s == "additive") return Manner::additive;
  if (s == "M" || s == "multiplicative") return Manner::multiplicative;
  throw std::invalid_argument("unknown manner '" + s + "' (expected A or M)");
}

Scope parse_scope(const std::string& s) {
  if (s == "cel" || s == "cell" || s == "C") return Scope::cell;
  if (s == "tab" || s == "table" || s == "T") return Scope::table;
  if (s == "row" || s == "R") return Scope::row;
  if (s == "col" || s == "column") return Scope::column;
  throw std::invalid_argument("unknown scope '" + s + "' (expected cel, tab, row or col)");
}

ViolationRule parse_violation(const std::string& s) {
  if (s == "NZ") return ViolationRule::non_zero;
  if (s == "NM") return ViolationRule::non_minimum;
  if (s == "MX") return ViolationRule::maximum;
  if (s == "AD" || s == "adaptive") return ViolationRule::adaptive;
  throw std::invalid_argument("unknown violation rule '" + s + "' (expected NZ, NM or MX)");
}

double eff_cost(const ConstraintTable& table, bool first, const Matrix& modifier, std::size_t d_self,
                std::size_t d_other, Manner manner) {
  return eff_cost(oriented_lookup(table, first, d_self, d_other), modifier.at(d_self, d_other), manner);
}

bool is_violated_adaptive(const ConstraintTable& table, bool first, std::size_t d_self, std::size_t d_other,
                          Rng& rng) {
  const double draw = rng.uniform01();
  const double span = table.max_cost() - table.min_cost();
  if (span <= 0.0) return false;
  const double eta = (oriented_lookup(table, first, d_self, d_other) - table.min_cost()) / span;
  return draw < eta;
}

bool is_violated_fixed(ViolationRule rule, const ConstraintTable& table, bool first, std::size_t d_self,
                       std::size_t d_other) {
  const double f = oriented_lookup(table, first, d_self, d_other);
  switch (rule) {
    case ViolationRule::non_zero: return f > 0.0;
    case ViolationRule::non_minimum: return f > table.min_cost();
    case ViolationRule::maximum: return f == table.max_cost();
    case ViolationRule::adaptive: break;
  }
  throw std::invalid_argument("is_violated_fixed: adaptive is not a fixed rule");
}

void evaporate(Matrix& modifier, double gamma) {
  for (double& v : modifier.data()) v *= gamma;
}

void increase_mod(std::size_t d_self, std::size_t d_other, bool self_penalized, bool neighbor_penalized,
                  Scope scope, Matrix& m) {
  switch (scope) {
    case Scope::cell:
      if (self_penalized || neighbor_penalized) m(d_self, d_other) += 1.0;
      return;
    case Scope::table:
      if (self_penalized || neighbor_penalized) {
        for (double& v : m.data()) v += 1.0;
      }
      return;
    case Scope::row:
      if (self_penalized) {
        for (std::size_t c = 0; c < m.cols(); ++c) m(d_self, c) += 1.0;
      }
      if (neighbor_penalized) {
        for (std::size_t r = 0; r < m.rows(); ++r) m(r, d_other) += 1.0;
      }
      if (self_penalized && neighbor_penalized) m(d_self, d_other) -= 1.0;
      return;
    case Scope::column:
      if (self_penalized) {
        for (std::size_t r = 0; r < m.rows(); ++r) m(r, d_other) += 1.0;
      }
      if (neighbor_penalized) {
        for (std::size_t c = 0; c < m.cols(); ++c) m(d_self, c) += 1.0;
      }
      if (self_penalized && neighbor_penalized) m(d_self, d_other) -= 1.0;
      return;
  }
}

void increase_mod_unilateral(std::size_t d_self, std::size_t d_other, Scope scope, Matrix& modifier) {
  increase_mod(d_self, d_other, true, false, scope, modifier);
}

ModifierSet zero_modifiers(const Problem& problem) {
  ModifierSet out(problem.n_agents());
  for (AgentId a = 0; a < problem.n_agents(); ++a) {
    for (const Incidence& inc : problem.incident(a)) {
      out[a].emplace_back(problem.domain_size(a), problem.domain_size(inc.neighbor));
    }
  }
  return out;
}

double local_eff_cost(const Problem& problem, const ModifierSet& modifiers, AgentId agent, Value value,
                      const Assignment& assignment, Manner manner) {
  const auto incident = problem.incident(agent);
  double sum = 0.0;
  for (std::size_t k = 0; k < incident.size(); ++k) {
    sum += eff_cost(problem.edge(incident[k].edge).table, incident[k].first, modifiers[agent][k],
                    static_cast<std::size_t>(value), static_cast<std::size_t>(assignment[incident[k].neighbor]),
                    manner);
  }
  return sum;
}

BestResponse best_response(const Problem& problem, const ModifierSet& modifiers, AgentId agent,
                           const Assignment& assignment, Manner manner) {
  std::vector<double> costs(problem.domain_size(agent));
  for (std::size_t d = 0; d < costs.size(); ++d) {
    costs[d] = local_eff_cost(problem, modifiers, agent, static_cast<Value>(d), assignment, manner);
  }
  return best_response(costs, assignment[agent]);
}

double potential(const Problem& problem, const Assignment& assignment, const ModifierSet& modifiers,
                 Manner manner) {
  check_assignment(problem, assignment);
  double sum = 0.0;
  for (AgentId a = 0; a < problem.n_agents(); ++a) {
    sum += local_eff_cost(problem, modifiers, a, assignment[a], assignment, manner);
  }
  return 0.5 * sum;
}

std::size_t asymmetric_edges(const Problem& problem, const ModifierSet& modifiers) {
  std::size_t bad = 0;
  for (AgentId a = 0; a < problem.n_agents(); ++a) {
    const auto incident = problem.incident(a);
    for (std::size_t k = 0; k < incident.size(); ++k) {
      const AgentId b = incident[k].neighbor;
      if (b < a) continue;
      const Matrix& mine = modifiers[a][k];
      const Matrix& theirs = modifiers[b][incidence_slot(problem.incident(b), a)];
      bool same = mine.rows() == theirs.cols() && mine.cols() == theirs.rows();
      for (std::size_t r = 0; same && r < mine.rows(); ++r) {
        for (std::size_t c = 0; same && c < mine.cols(); ++c) {
          same = std::bit_cast<std::uint64_t>(mine(r, c)) == std::bit_cast<std::uint64_t>(theirs(c, r));
        }
      }
      if (!same) ++bad;
    }
  }
  return bad;
}

PenaltyAgent::PenaltyAgent(const Problem& problem, AgentId id, std::uint64_t seed, Manner manner)
    : problem_(problem), id_(id), incident_(problem.incident(id)), rng_(seed), manner_(manner) {
  modifiers_.reserve(incident_.size());
  for (const Incidence& inc : incident_) {
    modifiers_.emplace_back(problem.domain_size(id), problem.domain_size(inc.neighbor));
  }
}

void PenaltyAgent::start(std::optional<Value> forced, Outbox& out) {
  value_ = detail::initial_value(rng_, problem_.domain_size(id_), forced);
  out.broadcast(AssignmentMsg{value_});
}

void PenaltyAgent::append_penalties(std::vector<double>& out) const {
  for (const Matrix& m : modifiers_) out.insert(out.end(), m.data().begin(), m.data().end());
}

void PenaltyAgent::compute_and_send_gain(std::span<const Envelope> inbox, Outbox& out) {
  read_assignments(inbox, incident_, neighbor_values_);
  costs_.assign(problem_.domain_size(id_), 0.0);
  for (std::size_t d = 0; d < costs_.size(); ++d) {
    double sum = 0.0;
    for (std::size_t k = 0; k < incident_.size(); ++k) {
      const auto other = static_cast<std::size_t>(neighbor_values_[k]);
      sum += eff_cost(oriented_lookup(problem_.edge(incident_[k].edge).table, incident_[k].first, d, other),
                      modifiers_[k](d, other), manner_);
    }
    costs_[d] = sum;
  }
  br_ = best_response(costs_, value_);
  out.broadcast(GainMsg{br_.gain});
}

bool PenaltyAgent::in_qlm() const {
  if (br_.gain != 0.0) return false;
  for (double g : gains_) {
    if (g != 0.0) return false;
  }
  return true;
}

ModifierSet collect_modifiers(const AgentList& agents) {
  ModifierSet out;
  out.reserve(agents.size());
  for (const auto& a : agents) {
    const auto* pa = dynamic_cast<const PenaltyAgent*>(a.get());
    if (pa == nullptr) throw std::logic_error("collect_modifiers: agent has no cost modifiers");
    out.emplace_back(pa->modifiers().begin(), pa->modifiers().end());
  }
  return out;
}

namespace {

class DglsAgent final : public PenaltyAgent {
 public:
  DglsAgent(const Problem& problem, AgentId id, std::uint64_t seed, DglsConfig config)
      : PenaltyAgent(problem, id, seed, config.manner), config_(config) {}

  void on_phase(std::size_t, std::size_t phase, std::span<const Envelope> inbox, Outbox& out) override {
    switch (phase) {
      case 0:
        self_penalized_.assign(incident_.size(), false);
        neighbor_penalized_.assign(incident_.size(), false);
        qlm_ = false;
        compute_and_send_gain(inbox, out);
        return;
      case 1:
        read_gains(id_, inbox, incident_, gains_);
        if (br_.gain > 0.0) {
          if (wins_neighborhood(id_, br_.gain, incident_, gains_)) value_ = br_.value;
        } else if (in_qlm()) {
          qlm_ = true;
          for (std::size_t k = 0; k < incident_.size(); ++k) {
            if (is_violated_adaptive(problem_.edge(incident_[k].edge).table, incident_[k].first,
                                     static_cast<std::size_t>(value_),
                                     static_cast<std::size_t>(neighbor_values_[k]), rng_)) {
              self_penalized_[k] = true;
              out.send(incident_[k].neighbor, SyncMsg{id_});
            }
          }
        }
        return;
      default:
        for (const Envelope& env : inbox) {
          if (std::holds_alternative<SyncMsg>(env.body)) {
            const std::size_t slot = incidence_slot(incident_, env.sender);
            if (slot < incident_.size()) neighbor_penalized_[slot] = true;
          }
        }
        for (std::size_t k = 0; k < incident_.size(); ++k) {
          if (!config_.evaporate_on_qlm_only || qlm_) evaporate(modifiers_[k], config_.gamma);
          increase_mod(static_cast<std::size_t>(value_), static_cast<std::size_t>(neighbor_values_[k]),
                       self_penalized_[k], neighbor_penalized_[k], config_.scope, modifiers_[k]);
        }
        out.broadcast(AssignmentMsg{value_});
        return;
    }
  }

 private:
  DglsConfig config_;
  bool qlm_ = false;
  std::vector<bool> self_penalized_;
  std::vector<bool> neighbor_penalized_;
};

class GdbaAgent final : public PenaltyAgent {
 public:
  GdbaAgent(const Problem& problem, AgentId id, std::uint64_t seed, GdbaConfig config)
      : PenaltyAgent(problem, id, seed, config.manner), config_(config) {}

  void on_phase(std::size_t, std::size_t phase, std::span<const Envelope> inbox, Outbox& out) override {
    if (phase == 0) {
      compute_and_send_gain(inbox, out);
      return;
    }
    read_gains(id_, inbox, incident_, gains_);
    if (br_.gain > 0.0) {
      if (wins_neighborhood(id_, br_.gain, incident_, gains_)) value_ = br_.value;
    } else if (in_qlm()) {
      for (std::size_t k = 0; k < incident_.size(); ++k) {
        const auto mine = static_cast<std::size_t>(value_);
        const auto theirs = static_cast<std::size_t>(neighbor_values_[k]);
        if (is_violated_fixed(config_.violation, problem_.edge(incident_[k].edge).table, incident_[k].first, mine,
                              theirs)) {
          increase_mod_unilateral(mine, theirs, config_.scope, modifiers_[k]);
        }
      }
    }
    out.broadcast(AssignmentMsg{value_});
  }

 private:
  GdbaConfig config_;
};

}  // namespace

Dgls::Dgls(DglsConfig config) : config_(config) {
  if (!(config_.gamma > 0.0 && config_.gamma < 1.0)) throw std::invalid_argument("dgls: gamma must be in (0, 1)");
}

std::string Dgls::label() const {
  return "dgls:" + to_string(config_.manner) + ":" + detail::format_number(config_.gamma) + ":" +
         to_string(config_.scope) + (config_.evaporate_on_qlm_only ? ":evap_qlm" : "");
}

std::unique_ptr<Agent> Dgls::make_agent(const Problem& problem, AgentId id, std::uint64_t seed) const {
  return std::make_unique<DglsAgent>(problem, id, seed, config_);
}

Gdba::Gdba(GdbaConfig config) : config_(config) {
  if (config_.violation == ViolationRule::adaptive) {
    throw std::invalid_argument("gdba: violation rule must be NZ, NM or MX");
  }
}

std::string Gdba::label() const {
  return "gdba:" + to_string(config_.manner) + ":" + to_string(config_.violation) + ":" + to_string(config_.scope);
}

std::unique_ptr<Agent> Gdba::make_agent(const Problem& problem, AgentId id, std::uint64_t seed) const {
  return std::make_unique<GdbaAgent>(problem, id, seed, config_);
}

}  // namespace dcop
