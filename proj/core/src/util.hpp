#pragma once

#include <cstdio>
#include <optional>
#include <string>

#include "dcop/problem.hpp"
#include "dcop/rng.hpp"

namespace dcop::detail {

inline std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

inline Value initial_value(Rng& rng, std::size_t domain, std::optional<Value> forced) {
  if (forced) return *forced;
  return static_cast<Value>(rng.below(domain));
}

}  // namespace dcop::detail
