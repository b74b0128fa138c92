#include "dcop/maxsum.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "dcop/decision.hpp"
#include "util.hpp"

namespace dcop {

std::string to_string(DampDirection d) {
  switch (d) {
    case DampDirection::both: return "both";
    case DampDirection::var_only: return "var_only";
    case DampDirection::func_only: return "func_only";
  }
  return "?";
}

DampDirection parse_damp_direction(const std::string& s) {
  if (s == "both") return DampDirection::both;
  if (s == "var_only") return DampDirection::var_only;
  if (s == "func_only") return DampDirection::func_only;
  throw std::invalid_argument("unknown damp_direction '" + s + "'");
}

void normalize(std::vector<double>& message) {
  if (message.empty()) return;
  const double lo = *std::min_element(message.begin(), message.end());
  for (double& v : message) v -= lo;
}

std::vector<double> var_to_func(std::span<const std::vector<double>> incoming, std::size_t exclude,
                                std::size_t domain) {
  std::vector<double> out(domain, 0.0);
  for (std::size_t k = 0; k < incoming.size(); ++k) {
    if (k == exclude) continue;
    for (std::size_t d = 0; d < domain; ++d) out[d] += incoming[k][d];
  }
  normalize(out);
  return out;
}

std::vector<double> func_to_var(const ConstraintTable& table, bool first, std::span<const double> incoming) {
  const std::size_t mine = first ? table.rows() : table.cols();
  const std::size_t theirs = first ? table.cols() : table.rows();
  if (incoming.size() != theirs) throw std::invalid_argument("func_to_var: incoming message has wrong size");
  std::vector<double> out(mine, std::numeric_limits<double>::infinity());
  for (std::size_t d = 0; d < mine; ++d) {
    for (std::size_t e = 0; e < theirs; ++e) out[d] = std::min(out[d], oriented_lookup(table, first, d, e) + incoming[e]);
  }
  normalize(out);
  return out;
}

std::vector<double> damp(std::span<const double> previous, std::span<const double> fresh, double lambda) {
  if (previous.size() != fresh.size()) throw std::invalid_argument("damp: shape mismatch");
  std::vector<double> out(fresh.size());
  for (std::size_t d = 0; d < out.size(); ++d) out[d] = lambda * previous[d] + (1.0 - lambda) * fresh[d];
  normalize(out);
  return out;
}

Value select_value(std::span<const std::vector<double>> incoming, std::size_t domain) {
  std::vector<double> belief(domain, 0.0);
  for (const auto& msg : incoming) {
    for (std::size_t d = 0; d < domain; ++d) belief[d] += msg[d];
  }
  return static_cast<Value>(std::min_element(belief.begin(), belief.end()) - belief.begin());
}

namespace {

class MaxsumAgent final : public Agent {
 public:
  MaxsumAgent(const Problem& problem, AgentId id, MaxsumConfig config)
      : problem_(problem), id_(id), incident_(problem.incident(id)), config_(config) {
    const std::size_t domain = problem.domain_size(id);
    for (const Incidence& inc : incident_) {
      const std::size_t other = problem.domain_size(inc.neighbor);
      r_in_.emplace_back(domain, 0.0);
      q_sent_.emplace_back(domain, 0.0);
      q_remote_.emplace_back(other, 0.0);
      r_sent_remote_.emplace_back(other, 0.0);
    }
  }

  void start(std::optional<Value> forced, Outbox&) override {
    value_ = forced ? *forced : select_value(r_in_, problem_.domain_size(id_));
  }

  void on_phase(std::size_t, std::size_t phase, std::span<const Envelope> inbox, Outbox& out) override {
    if (phase == 0) {
      variable_phase(inbox, out);
    } else {
      function_phase(inbox, out);
    }
  }

  Value value() const override { return value_; }

 private:
  bool hosts(std::size_t k) const { return incident_[k].first; }
  bool damp_var() const { return config_.damp_direction != DampDirection::func_only; }
  bool damp_func() const { return config_.damp_direction != DampDirection::var_only; }

  void variable_phase(std::span<const Envelope> inbox, Outbox& out) {
    for (const Envelope& env : inbox) {
      const auto* msg = std::get_if<PayloadMsg>(&env.body);
      if (msg == nullptr) continue;
      const std::size_t k = incidence_slot(incident_, env.sender);
      if (k < incident_.size() && msg->data.size() == r_in_[k].size()) r_in_[k] = msg->data;
    }
    const std::size_t domain = problem_.domain_size(id_);
    value_ = select_value(r_in_, domain);
    for (std::size_t k = 0; k < incident_.size(); ++k) {
      auto fresh = var_to_func(r_in_, k, domain);
      q_sent_[k] = damp_var() ? damp(q_sent_[k], fresh, config_.damping) : std::move(fresh);
      if (!hosts(k)) out.send(incident_[k].neighbor, PayloadMsg{0, q_sent_[k]});
    }
  }

  void function_phase(std::span<const Envelope> inbox, Outbox& out) {
    for (const Envelope& env : inbox) {
      const auto* msg = std::get_if<PayloadMsg>(&env.body);
      if (msg == nullptr) continue;
      const std::size_t k = incidence_slot(incident_, env.sender);
      if (k < incident_.size() && hosts(k) && msg->data.size() == q_remote_[k].size()) q_remote_[k] = msg->data;
    }
    for (std::size_t k = 0; k < incident_.size(); ++k) {
      if (!hosts(k)) continue;
      const auto& table = problem_.edge(incident_[k].edge).table;
      auto to_self = func_to_var(table, true, q_remote_[k]);
      auto to_other = func_to_var(table, false, q_sent_[k]);
      if (damp_func()) {
        to_self = damp(r_in_[k], to_self, config_.damping);
        to_other = damp(r_sent_remote_[k], to_other, config_.damping);
      }
      r_in_[k] = std::move(to_self);
      r_sent_remote_[k] = to_other;
      out.send(incident_[k].neighbor, PayloadMsg{0, std::move(to_other)});
    }
  }

  const Problem& problem_;
  AgentId id_;
  std::span<const Incidence> incident_;
  MaxsumConfig config_;
  Value value_ = 0;
  std::vector<std::vector<double>> r_in_;           // function -> this variable, per edge
  std::vector<std::vector<double>> q_sent_;         // this variable -> function, per edge
  std::vector<std::vector<double>> q_remote_;       // neighbor variable -> hosted function
  std::vector<std::vector<double>> r_sent_remote_;  // hosted function -> neighbor variable
};

}  // namespace

DampedMaxsum::DampedMaxsum(MaxsumConfig config) : config_(config) {
  if (!(config_.damping >= 0.0 && config_.damping < 1.0)) throw std::invalid_argument("dms: lambda must be in [0, 1)");
}

std::string DampedMaxsum::label() const {
  return "dms:lambda=" + detail::format_number(config_.damping) +
         (config_.damp_direction == DampDirection::both ? "" : ":" + to_string(config_.damp_direction));
}

std::unique_ptr<Agent> DampedMaxsum::make_agent(const Problem& problem, AgentId id, std::uint64_t) const {
  return std::make_unique<MaxsumAgent>(problem, id, config_);
}

}  // namespace dcop
