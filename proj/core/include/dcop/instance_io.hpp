#pragma once

#include <filesystem>
#include <string>

#include "dcop/problem.hpp"

namespace dcop {

class InstanceFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Instance files are JSON:
//   {"n_agents": N, "domains": [...], "edges": [{"i": a, "j": b, "costs": [...]}],
//    "meta": {"family": ..., "seed": ..., "params": {...}}}
// with costs row-major and i < j.
std::string to_json(const Problem& problem, int indent = -1);
Problem from_json(const std::string& text);

void save_instance(const Problem& problem, const std::filesystem::path& path);
Problem load_instance(const std::filesystem::path& path);

}  // namespace dcop
