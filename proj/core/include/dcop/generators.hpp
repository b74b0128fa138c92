#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "dcop/problem.hpp"

namespace dcop {

class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class DensityMode {
  per_pair,  // each pair independently with probability `density`
  exact,     // exactly round(density * n(n-1)/2) edges, uniformly chosen
};

struct RandomParams {
  std::size_t n = 120;
  double density = 0.1;
  std::size_t domain = 10;
  std::int64_t cost_lo = 0;
  std::int64_t cost_hi = 100;
  DensityMode mode = DensityMode::per_pair;
};

struct ScaleFreeParams {
  std::size_t n = 120;
  std::size_t m0 = 3;
  std::size_t m1 = 3;
  std::size_t domain = 10;
  std::int64_t cost_lo = 0;
  std::int64_t cost_hi = 100;
};

struct LatticeParams {
  std::size_t rows = 10;
  std::size_t cols = 10;
  std::size_t domain = 10;
  std::int64_t cost_lo = 0;
  std::int64_t cost_hi = 100;
};

struct MeetingParams {
  std::size_t slots = 20;
  std::size_t meetings = 20;
  std::size_t persons = 90;
  std::int64_t travel_lo = 6;
  std::int64_t travel_hi = 10;
  std::size_t meetings_per_person = 2;
};

struct ColoringParams {
  std::size_t n = 120;
  std::size_t colors = 3;
  double density = 0.05;
  std::int64_t weight_lo = 1;
  std::int64_t weight_hi = 100;
  DensityMode mode = DensityMode::per_pair;
};

/// Resampling cap for graphs that come out with an isolated vertex.
inline constexpr int kMaxGraphAttempts = 10000;

Problem gen_random(const RandomParams& params, std::uint64_t seed);
Problem gen_scale_free(const ScaleFreeParams& params, std::uint64_t seed);
Problem gen_lattice(const LatticeParams& params, std::uint64_t seed);
Problem gen_meeting_scheduling(const MeetingParams& params, std::uint64_t seed);
Problem gen_wgc(const ColoringParams& params, std::uint64_t seed);

/// Meeting-scheduling table entry: `shared` overbooked persons if the slots are
/// closer than the travel time, else 0.
inline double meeting_conflict_cost(std::size_t slot_a, std::size_t slot_b, std::int64_t travel, double shared) {
  const auto gap = slot_a > slot_b ? slot_a - slot_b : slot_b - slot_a;
  return static_cast<std::int64_t>(gap) < travel ? shared : 0.0;
}

/// Dispatches on family name ("random", "scale_free", "lattice",
/// "meeting_scheduling", "weighted_graph_coloring") with a JSON parameter
/// object; missing keys take the defaults above. Throws std::invalid_argument
/// for unknown families, unknown keys or out-of-range values.
Problem generate(const std::string& family, const std::string& params_json, std::uint64_t seed);

}  // namespace dcop
