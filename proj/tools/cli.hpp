#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tolquot/relations.hpp"

namespace tolquot::cli {

// 0 success, 1 negative verdict, 2 usage error, 3 input error,
// 4 resource exceeded.
enum ExitCode : int {
  exit_ok = 0,
  exit_negative = 1,
  exit_usage = 2,
  exit_input = 3,
  exit_resource = 4,
};

struct CommandOutcome {
  int exit_code = exit_ok;
  std::string out;
  std::string err;
};

// argv without the program name.
CommandOutcome run(std::vector<std::string> const& args);

// Undirected graph of `rel` without loops. With a covering, every block gets
// a color and vertices in several blocks are drawn wedged.
std::string export_dot(BinaryRelation const& rel, Covering const* cov = nullptr);

}  // namespace tolquot::cli
