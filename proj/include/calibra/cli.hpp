#pragma once
// Config-driven entry point. A run executes one command (generate | audit |
// learn | rules | omnipredict | hardness) described by a JSON config, writes
// canonical reports into the output directory and returns the exit status:
// 0 success, 2 verdict FAIL (including learner budget exhaustion), 1 error.

#include <optional>
#include <string>

#include "json.hpp"

namespace calibra::cli {

struct Overrides {
  std::optional<uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<std::string> formats;  // comma-separated: json,csv,plotdata
};

int run(const nlohmann::json& config, const Overrides& ov);
int run_file(const std::string& config_path, const Overrides& ov);

}  // namespace calibra::cli
