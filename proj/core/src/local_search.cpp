#include "dcop/local_search.hpp"

#include <stdexcept>

#include "dcop/decision.hpp"
#include "dcop/rng.hpp"
#include "util.hpp"

namespace dcop {

namespace {

enum Mgm2Tag : std::uint32_t { kOffer = 1, kAccept = 2, kCommit = 3 };

class DsaAgent final : public Agent {
 public:
  DsaAgent(const Problem& problem, AgentId id, std::uint64_t seed, DsaConfig config)
      : problem_(problem), id_(id), incident_(problem.incident(id)), rng_(seed), config_(config) {}

  void start(std::optional<Value> forced, Outbox& out) override {
    value_ = detail::initial_value(rng_, problem_.domain_size(id_), forced);
    out.broadcast(AssignmentMsg{value_});
  }

  void on_phase(std::size_t, std::size_t, std::span<const Envelope> inbox, Outbox& out) override {
    read_assignments(inbox, incident_, neighbor_values_);
    base_local_costs(problem_, id_, neighbor_values_, costs_);
    const BestResponse br = best_response(costs_, value_);
    const double u = rng_.uniform01();
    if (br.gain > 0.0) {
      if (u < config_.p) value_ = br.value;
    } else if (config_.allow_sideways && u < config_.p) {
      // Smallest other value with equal cost, if any.
      const double here = costs_[static_cast<std::size_t>(value_)];
      for (std::size_t d = 0; d < costs_.size(); ++d) {
        if (static_cast<Value>(d) != value_ && costs_[d] <= here + kGainTolerance) {
          value_ = static_cast<Value>(d);
          break;
        }
      }
    }
    out.broadcast(AssignmentMsg{value_});
  }

  Value value() const override { return value_; }

 private:
  const Problem& problem_;
  AgentId id_;
  std::span<const Incidence> incident_;
  Rng rng_;
  DsaConfig config_;
  Value value_ = 0;
  std::vector<Value> neighbor_values_;
  std::vector<double> costs_;
};

class MgmAgent final : public Agent {
 public:
  MgmAgent(const Problem& problem, AgentId id, std::uint64_t seed)
      : problem_(problem), id_(id), incident_(problem.incident(id)), rng_(seed) {}

  void start(std::optional<Value> forced, Outbox& out) override {
    value_ = detail::initial_value(rng_, problem_.domain_size(id_), forced);
    out.broadcast(AssignmentMsg{value_});
  }

  void on_phase(std::size_t, std::size_t phase, std::span<const Envelope> inbox, Outbox& out) override {
    if (phase == 0) {
      read_assignments(inbox, incident_, neighbor_values_);
      base_local_costs(problem_, id_, neighbor_values_, costs_);
      br_ = best_response(costs_, value_);
      out.broadcast(GainMsg{br_.gain});
      return;
    }
    read_gains(id_, inbox, incident_, gains_);
    if (br_.gain > 0.0 && wins_neighborhood(id_, br_.gain, incident_, gains_)) value_ = br_.value;
    out.broadcast(AssignmentMsg{value_});
  }

  Value value() const override { return value_; }

 private:
  const Problem& problem_;
  AgentId id_;
  std::span<const Incidence> incident_;
  Rng rng_;
  Value value_ = 0;
  BestResponse br_{0, 0.0};
  std::vector<Value> neighbor_values_;
  std::vector<double> costs_;
  std::vector<double> gains_;
};

class Mgm2Agent final : public Agent {
 public:
  Mgm2Agent(const Problem& problem, AgentId id, std::uint64_t seed, Mgm2Config config)
      : problem_(problem), id_(id), incident_(problem.incident(id)), rng_(seed), config_(config) {}

  void start(std::optional<Value> forced, Outbox& out) override {
    value_ = detail::initial_value(rng_, problem_.domain_size(id_), forced);
    out.broadcast(AssignmentMsg{value_});
  }

  void on_phase(std::size_t, std::size_t phase, std::span<const Envelope> inbox, Outbox& out) override {
    switch (phase) {
      case 0: offer(inbox, out); break;
      case 1: reply(inbox, out); break;
      case 2: gain(inbox, out); break;
      case 3: commit(inbox, out); break;
      default: assign(inbox, out); break;
    }
  }

  Value value() const override { return value_; }

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  // Local cost of each own value, excluding the edge at slot `skip`.
  std::vector<double> costs_without(std::size_t skip) const {
    std::vector<double> out(problem_.domain_size(id_), 0.0);
    for (std::size_t d = 0; d < out.size(); ++d) {
      for (std::size_t k = 0; k < incident_.size(); ++k) {
        if (k == skip) continue;
        out[d] += oriented_lookup(problem_.edge(incident_[k].edge).table, incident_[k].first, d,
                                  static_cast<std::size_t>(neighbor_values_[k]));
      }
    }
    return out;
  }

  void offer(std::span<const Envelope> inbox, Outbox& out) {
    read_assignments(inbox, incident_, neighbor_values_);
    base_local_costs(problem_, id_, neighbor_values_, costs_);
    br_ = best_response(costs_, value_);
    partner_ = kNone;
    pair_gain_ = 0.0;
    offerer_ = rng_.uniform01() < config_.offer_probability;
    if (offerer_ && !incident_.empty()) {
      partner_ = static_cast<std::size_t>(rng_.below(incident_.size()));
      out.send(incident_[partner_].neighbor, PayloadMsg{kOffer, costs_without(partner_)});
    }
  }

  void reply(std::span<const Envelope> inbox, Outbox& out) {
    if (offerer_) return;  // offerers ignore incoming offers
    std::size_t best_slot = kNone;
    double best_gain = 0.0;
    Value best_mine = value_, best_theirs = 0;
    for (const Envelope& env : inbox) {
      const auto* msg = std::get_if<PayloadMsg>(&env.body);
      if (msg == nullptr || msg->tag != kOffer) continue;
      const std::size_t slot = incidence_slot(incident_, env.sender);
      if (slot == incident_.size()) continue;
      const std::size_t their_domain = problem_.domain_size(env.sender);
      if (msg->data.size() != their_domain) continue;  // malformed
      const auto& theirs = msg->data;
      const auto mine = costs_without(slot);
      const auto& table = problem_.edge(incident_[slot].edge).table;
      const bool first = incident_[slot].first;
      const auto their_now = static_cast<std::size_t>(neighbor_values_[slot]);
      const auto my_now = static_cast<std::size_t>(value_);
      const double now = mine[my_now] + theirs[their_now] + oriented_lookup(table, first, my_now, their_now);
      double lowest = now;
      std::size_t arg_mine = my_now, arg_theirs = their_now;
      for (std::size_t a = 0; a < mine.size(); ++a) {
        for (std::size_t b = 0; b < their_domain; ++b) {
          const double c = mine[a] + theirs[b] + oriented_lookup(table, first, a, b);
          if (c < lowest - kGainTolerance) {
            lowest = c;
            arg_mine = a;
            arg_theirs = b;
          }
        }
      }
      const double g = now - lowest;
      if (g <= kGainTolerance) continue;
      if (best_slot == kNone || beats(g, env.sender, best_gain, incident_[best_slot].neighbor)) {
        best_slot = slot;
        best_gain = g;
        best_mine = static_cast<Value>(arg_mine);
        best_theirs = static_cast<Value>(arg_theirs);
      }
    }
    if (best_slot == kNone) return;
    partner_ = best_slot;
    pair_gain_ = best_gain;
    pair_value_ = best_mine;
    out.send(incident_[best_slot].neighbor,
             PayloadMsg{kAccept, {static_cast<double>(best_theirs), static_cast<double>(best_mine), best_gain}});
  }

  void gain(std::span<const Envelope> inbox, Outbox& out) {
    if (offerer_ && partner_ != kNone) {
      const AgentId expected = incident_[partner_].neighbor;
      bool accepted = false;
      for (const Envelope& env : inbox) {
        const auto* msg = std::get_if<PayloadMsg>(&env.body);
        if (msg == nullptr || msg->tag != kAccept || env.sender != expected || msg->data.size() != 3) continue;
        const double v = msg->data[0];
        if (v < 0 || v >= static_cast<double>(problem_.domain_size(id_))) continue;
        pair_value_ = static_cast<Value>(v);
        pair_gain_ = msg->data[2];
        accepted = true;
      }
      if (!accepted) partner_ = kNone;
    }
    out.broadcast(GainMsg{paired() ? pair_gain_ : br_.gain});
  }

  void commit(std::span<const Envelope> inbox, Outbox& out) {
    read_gains(id_, inbox, incident_, gains_);
    if (paired()) {
      go_ = pair_gain_ > 0.0 && wins_neighborhood(id_, pair_gain_, incident_, gains_, partner_);
      out.send(incident_[partner_].neighbor, PayloadMsg{kCommit, {go_ ? 1.0 : 0.0}});
    } else {
      go_ = br_.gain > 0.0 && wins_neighborhood(id_, br_.gain, incident_, gains_);
    }
  }

  void assign(std::span<const Envelope> inbox, Outbox& out) {
    if (paired()) {
      bool partner_go = false;
      for (const Envelope& env : inbox) {
        const auto* msg = std::get_if<PayloadMsg>(&env.body);
        if (msg != nullptr && msg->tag == kCommit && env.sender == incident_[partner_].neighbor &&
            msg->data.size() == 1) {
          partner_go = msg->data[0] == 1.0;
        }
      }
      if (go_ && partner_go) value_ = pair_value_;
    } else if (go_) {
      value_ = br_.value;
    }
    out.broadcast(AssignmentMsg{value_});
  }

  bool paired() const { return partner_ != kNone; }

  const Problem& problem_;
  AgentId id_;
  std::span<const Incidence> incident_;
  Rng rng_;
  Mgm2Config config_;
  Value value_ = 0;
  BestResponse br_{0, 0.0};
  bool offerer_ = false;
  bool go_ = false;
  std::size_t partner_ = kNone;
  double pair_gain_ = 0.0;
  Value pair_value_ = 0;
  std::vector<Value> neighbor_values_;
  std::vector<double> costs_;
  std::vector<double> gains_;
};

}  // namespace

Dsa::Dsa(DsaConfig config) : config_(config) {
  if (!(config_.p > 0.0 && config_.p <= 1.0)) throw std::invalid_argument("dsa: p must be in (0, 1]");
}

std::string Dsa::label() const {
  return "dsa:p=" + detail::format_number(config_.p) + (config_.allow_sideways ? ":sideways" : "");
}

std::unique_ptr<Agent> Dsa::make_agent(const Problem& problem, AgentId id, std::uint64_t seed) const {
  return std::make_unique<DsaAgent>(problem, id, seed, config_);
}

std::unique_ptr<Agent> Mgm::make_agent(const Problem& problem, AgentId id, std::uint64_t seed) const {
  return std::make_unique<MgmAgent>(problem, id, seed);
}

Mgm2::Mgm2(Mgm2Config config) : config_(config) {
  if (!(config_.offer_probability >= 0.0 && config_.offer_probability <= 1.0)) {
    throw std::invalid_argument("mgm2: offer_p must be in [0, 1]");
  }
}

std::string Mgm2::label() const { return "mgm2:offer_p=" + detail::format_number(config_.offer_probability); }

std::unique_ptr<Agent> Mgm2::make_agent(const Problem& problem, AgentId id, std::uint64_t seed) const {
  return std::make_unique<Mgm2Agent>(problem, id, seed, config_);
}

}  // namespace dcop
