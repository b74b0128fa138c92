#include "dcop/engine.hpp"

#include <algorithm>
#include <limits>

#include <tbb/parallel_for.h>
#include <tbb/task_arena.h>

#include "dcop/rng.hpp"

namespace dcop {

Outbox::Outbox(AgentId self, std::span<const Incidence> neighbors, std::size_t round, std::size_t phase)
    : self_(self), neighbors_(neighbors), round_(round), phase_(phase), used_(neighbors.size(), false) {}

void Outbox::send(AgentId to, MessageBody body) {
  auto it = std::lower_bound(neighbors_.begin(), neighbors_.end(), to,
                             [](const Incidence& inc, AgentId id) { return inc.neighbor < id; });
  if (it == neighbors_.end() || it->neighbor != to) {
    throw ProtocolError("agent " + std::to_string(self_) + " sent a message to non-neighbor " +
                        std::to_string(to));
  }
  const auto slot = static_cast<std::size_t>(it - neighbors_.begin());
  if (used_[slot]) {
    throw ProtocolError("phase overrun: agent " + std::to_string(self_) + " sent twice to " +
                        std::to_string(to) + " in phase " + std::to_string(phase_));
  }
  used_[slot] = true;
  messages_.push_back({self_, to, std::move(body), round_, phase_});
}

void Outbox::broadcast(const MessageBody& body) {
  for (const Incidence& inc : neighbors_) send(inc.neighbor, body);
}

std::vector<std::vector<Envelope>> exchange(std::span<const Outbox> outboxes, std::size_t n_agents) {
  std::vector<std::vector<Envelope>> inboxes(n_agents);
  std::vector<const Outbox*> ordered;
  ordered.reserve(outboxes.size());
  for (const Outbox& o : outboxes) ordered.push_back(&o);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const Outbox* a, const Outbox* b) { return a->self() < b->self(); });
  for (const Outbox* o : ordered) {
    for (const Envelope& env : o->messages()) {
      if (env.recipient >= n_agents) throw ProtocolError("message to unknown agent");
      inboxes[env.recipient].push_back(env);
    }
  }
  return inboxes;
}

std::uint64_t agent_seed(std::uint64_t seed, AgentId id) { return split_seed(seed, id); }

namespace {

template <typename Fn>
void for_each_agent(tbb::task_arena* arena, std::size_t n, Fn&& fn) {
  if (arena == nullptr) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  arena->execute([&] { tbb::parallel_for(std::size_t{0}, n, [&](std::size_t i) { fn(i); }); });
}

}  // namespace

AnytimeTrace run(const Problem& problem, const Algorithm& algorithm, const RunOptions& options) {
  if (options.rounds < 1) throw std::invalid_argument("rounds must be >= 1");
  const PhasePlan plan = algorithm.plan();
  if (plan.size() == 0) throw std::invalid_argument("algorithm has an empty phase plan");
  const std::size_t n = problem.n_agents();
  const std::size_t last_phase = plan.size() - 1;
  if (options.initial) check_assignment(problem, *options.initial);

  std::optional<tbb::task_arena> arena;
  if (options.threads > 1) arena.emplace(static_cast<int>(options.threads));
  tbb::task_arena* arena_ptr = arena ? &*arena : nullptr;

  AgentList agents;
  agents.reserve(n);
  for (AgentId i = 0; i < n; ++i) agents.push_back(algorithm.make_agent(problem, i, agent_seed(options.seed, i)));

  AnytimeTrace trace;
  trace.rounds.reserve(options.rounds + 1);
  Assignment joint(n);
  std::vector<double> penalty_pool;

  auto record = [&](std::size_t round, std::size_t msgs) {
    for (AgentId i = 0; i < n; ++i) joint[i] = agents[i]->value();
    RoundRecord rec;
    rec.round = round;
    rec.current_cost = total_cost(problem, joint);
    rec.best_so_far =
        trace.rounds.empty() ? rec.current_cost : std::min(trace.rounds.back().best_so_far, rec.current_cost);
    rec.msgs_total = msgs;
    if (options.collect_penalties && algorithm.has_penalties()) {
      penalty_pool.clear();
      for (const auto& a : agents) a->append_penalties(penalty_pool);
      rec.penalty = penalty_stats(penalty_pool);
    }
    trace.rounds.push_back(rec);
    if (options.record_assignments) trace.assignments.push_back(joint);
    if (options.observer) options.observer(round, agents);
  };

  std::vector<Outbox> outboxes;
  outboxes.reserve(n);
  for (AgentId i = 0; i < n; ++i) outboxes.emplace_back(i, problem.incident(i), 0, last_phase);
  std::optional<Value> none;
  for (AgentId i = 0; i < n; ++i) {
    agents[i]->start(options.initial ? std::optional<Value>((*options.initial)[i]) : none, outboxes[i]);
  }
  auto inboxes = dcop::exchange(outboxes, n);
  record(0, 0);

  std::vector<std::uint32_t> per_agent(n);
  for (std::size_t round = 1; round <= options.rounds; ++round) {
    std::fill(per_agent.begin(), per_agent.end(), 0);
    std::size_t msgs = 0;
    for (std::size_t phase = 0; phase < plan.size(); ++phase) {
      const std::size_t want_round = phase == 0 ? round - 1 : round;
      const std::size_t want_phase = phase == 0 ? last_phase : phase - 1;
      for (const auto& inbox : inboxes) {
        for (const Envelope& env : inbox) {
          if (env.round != want_round || env.phase != want_phase) {
            throw ProtocolError("phase isolation violated: message from round " + std::to_string(env.round) +
                                " phase " + std::to_string(env.phase) + " delivered to round " +
                                std::to_string(round) + " phase " + std::to_string(phase));
          }
        }
      }
      outboxes.clear();
      for (AgentId i = 0; i < n; ++i) outboxes.emplace_back(i, problem.incident(i), round, phase);
      for_each_agent(arena_ptr, n, [&](std::size_t i) {
        agents[i]->on_phase(round, phase, inboxes[i], outboxes[i]);
      });
      for (AgentId i = 0; i < n; ++i) {
        per_agent[i] += static_cast<std::uint32_t>(outboxes[i].size());
        msgs += outboxes[i].size();
      }
      inboxes = dcop::exchange(outboxes, n);
    }
    if (options.collect_messages) trace.messages.push_back(per_agent);
    record(round, msgs);
  }
  return trace;
}

const std::vector<std::vector<std::uint32_t>>& message_audit(const AnytimeTrace& trace) {
  if (trace.messages.empty() && trace.rounds.size() > 1) {
    throw std::logic_error("message counts were not collected for this trace");
  }
  return trace.messages;
}

}  // namespace dcop
