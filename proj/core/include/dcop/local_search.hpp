#pragma once

#include <memory>
#include <string>

#include "dcop/engine.hpp"

namespace dcop {

struct DsaConfig {
  double p = 0.8;
  /// Also take zero-gain moves to a different optimal value (DSA-B style).
  bool allow_sideways = false;
};

struct Mgm2Config {
  double offer_probability = 0.5;
};

/// Distributed Stochastic Algorithm: one phase per round. An agent with a
/// strictly improving best response adopts it with probability p.
class Dsa final : public Algorithm {
 public:
  explicit Dsa(DsaConfig config = {});
  std::string name() const override { return "dsa"; }
  std::string label() const override;
  PhasePlan plan() const override { return {{"assignments"}}; }
  std::unique_ptr<Agent> make_agent(const Problem& problem, AgentId id, std::uint64_t seed) const override;
  const DsaConfig& config() const { return config_; }

 private:
  DsaConfig config_;
};

/// Maximum Gain Message: gains are exchanged and only the strict local winner moves.
class Mgm final : public Algorithm {
 public:
  std::string name() const override { return "mgm"; }
  std::string label() const override { return "mgm"; }
  PhasePlan plan() const override { return {{"assignments", "gains"}}; }
  std::unique_ptr<Agent> make_agent(const Problem& problem, AgentId id, std::uint64_t seed) const override;
};

/// MGM2 with the five-phase offerer/receiver protocol:
///   0 offer:   read assignments, draw role, offerers send local costs to one random neighbor
///   1 reply:   receivers accept the best positive joint move among their offers
///   2 gain:    everyone broadcasts its (pair or unilateral) gain
///   3 commit:  pairs exchange go/no-go with their partner
///   4 assign:  committed pairs and unilateral winners move; assignments broadcast
class Mgm2 final : public Algorithm {
 public:
  explicit Mgm2(Mgm2Config config = {});
  std::string name() const override { return "mgm2"; }
  std::string label() const override;
  PhasePlan plan() const override { return {{"offer", "reply", "gain", "commit", "assignments"}}; }
  std::unique_ptr<Agent> make_agent(const Problem& problem, AgentId id, std::uint64_t seed) const override;
  const Mgm2Config& config() const { return config_; }

 private:
  Mgm2Config config_;
};

}  // namespace dcop
