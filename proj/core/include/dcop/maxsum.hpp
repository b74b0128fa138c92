#pragma once

#include <span>
#include <string>
#include <vector>

#include "dcop/engine.hpp"

namespace dcop {

enum class DampDirection { both, var_only, func_only };

struct MaxsumConfig {
  double damping = 0.9;
  DampDirection damp_direction = DampDirection::both;
};

std::string to_string(DampDirection d);
DampDirection parse_damp_direction(const std::string& s);

/// Shifts a message so its minimum entry is exactly 0.
void normalize(std::vector<double>& message);

/// Sum of all incoming function-to-variable messages except the one at
/// `exclude`, normalized. `domain` sizes the result when `incoming` is empty.
std::vector<double> var_to_func(std::span<const std::vector<double>> incoming, std::size_t exclude,
                                std::size_t domain);

/// out[d] = min over d' of table(d, d') + incoming[d'], normalized. The table
/// is read from the receiving variable's side (`first` as in oriented_lookup).
std::vector<double> func_to_var(const ConstraintTable& table, bool first, std::span<const double> incoming);

/// lambda * previous + (1 - lambda) * fresh, normalized.
std::vector<double> damp(std::span<const double> previous, std::span<const double> fresh, double lambda);

/// Argmin of the summed incoming messages, ties to the smallest index.
Value select_value(std::span<const std::vector<double>> incoming, std::size_t domain);

/// Damped synchronous min-sum. Each constraint's function node lives on its
/// lower-indexed endpoint. Phases per round:
///   0 variable: pick value from current beliefs, send variable-to-function messages
///   1 function: hosts send function-to-variable messages
class DampedMaxsum final : public Algorithm {
 public:
  explicit DampedMaxsum(MaxsumConfig config = {});
  std::string name() const override { return "dms"; }
  std::string label() const override;
  PhasePlan plan() const override { return {{"variable", "function"}}; }
  std::unique_ptr<Agent> make_agent(const Problem& problem, AgentId id, std::uint64_t seed) const override;
  const MaxsumConfig& config() const { return config_; }

 private:
  MaxsumConfig config_;
};

}  // namespace dcop
