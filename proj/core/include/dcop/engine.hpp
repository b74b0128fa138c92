#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "dcop/problem.hpp"
#include "dcop/stats.hpp"

namespace dcop {

class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AssignmentMsg {
  Value value;
};
struct GainMsg {
  double delta;
};
struct SyncMsg {
  AgentId sender;
};
/// Opaque numeric payload (max-sum tables, MGM2 offers). `tag` lets an
/// algorithm distinguish payload kinds sharing one phase.
struct PayloadMsg {
  std::uint32_t tag = 0;
  std::vector<double> data;
};

using MessageBody = std::variant<AssignmentMsg, GainMsg, SyncMsg, PayloadMsg>;

struct Envelope {
  AgentId sender;
  AgentId recipient;
  MessageBody body;
  std::size_t round;  // 0 for the opening broadcast, rounds count from 1
  std::size_t phase;
};

/// Ordered list of named phases executed every round. Messages sent in phase k
/// are delivered before phase k+1; the last phase's messages open the next round.
struct PhasePlan {
  std::vector<std::string> phases;
  std::size_t size() const { return phases.size(); }
};

/// Per-agent, per-phase send buffer. Only neighbors are valid recipients and
/// at most one message per recipient is allowed in a phase.
class Outbox {
 public:
  Outbox(AgentId self, std::span<const Incidence> neighbors, std::size_t round, std::size_t phase);

  void send(AgentId to, MessageBody body);
  void broadcast(const MessageBody& body);

  AgentId self() const { return self_; }
  std::span<const Envelope> messages() const { return messages_; }
  std::size_t size() const { return messages_.size(); }

 private:
  AgentId self_;
  std::span<const Incidence> neighbors_;
  std::size_t round_;
  std::size_t phase_;
  std::vector<bool> used_;
  std::vector<Envelope> messages_;
};

/// Routes every outbox to its recipients. Inboxes come out ordered by sender
/// index, with a sender's messages in send order.
std::vector<std::vector<Envelope>> exchange(std::span<const Outbox> outboxes, std::size_t n_agents);

/// Engine-side agent state machine. One instance per agent per run; never
/// shared between threads within a phase.
class Agent {
 public:
  virtual ~Agent() = default;
  /// Chooses the initial value (or adopts `forced`) and posts the opening
  /// broadcast, if any.
  virtual void start(std::optional<Value> forced, Outbox& out) = 0;
  virtual void on_phase(std::size_t round, std::size_t phase, std::span<const Envelope> inbox,
                        Outbox& out) = 0;
  virtual Value value() const = 0;
  /// Appends every penalty entry this agent holds; no-op for penalty-free agents.
  virtual void append_penalties(std::vector<double>& /*out*/) const {}
};

class Algorithm {
 public:
  virtual ~Algorithm() = default;
  virtual std::string name() const = 0;
  /// Stable, comma-free identifier of the full configuration.
  virtual std::string label() const = 0;
  virtual PhasePlan plan() const = 0;
  virtual std::unique_ptr<Agent> make_agent(const Problem& problem, AgentId id,
                                            std::uint64_t seed) const = 0;
  virtual bool has_penalties() const { return false; }
};

using AgentList = std::vector<std::unique_ptr<Agent>>;

/// Called once after start (round 0) and once after every round r = 1..R,
/// i.e. at the start of the following round.
using RoundObserver = std::function<void(std::size_t round, const AgentList& agents)>;

struct RunOptions {
  std::size_t rounds = 1000;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  bool collect_penalties = false;
  bool collect_messages = false;
  bool record_assignments = false;
  std::optional<Assignment> initial;
  RoundObserver observer;
};

struct RoundRecord {
  std::size_t round = 0;
  double current_cost = 0.0;
  double best_so_far = 0.0;
  std::optional<PenaltyStats> penalty;
  std::size_t msgs_total = 0;
};

/// rounds[0] is the initial state; rounds[r] the state after round r.
struct AnytimeTrace {
  std::vector<RoundRecord> rounds;
  /// messages[r-1][i]: messages sent by agent i during round r (if collected).
  std::vector<std::vector<std::uint32_t>> messages;
  /// assignments[r]: joint assignment after round r (if recorded).
  std::vector<Assignment> assignments;

  const RoundRecord& final_round() const { return rounds.back(); }
};

/// Seed of agent `id`'s private stream under master seed `seed`.
std::uint64_t agent_seed(std::uint64_t seed, AgentId id);

AnytimeTrace run(const Problem& problem, const Algorithm& algorithm, const RunOptions& options);

/// Per-agent, per-round message counts from a trace recorded with
/// collect_messages. Throws std::logic_error if counts were not collected.
const std::vector<std::vector<std::uint32_t>>& message_audit(const AnytimeTrace& trace);

}  // namespace dcop
