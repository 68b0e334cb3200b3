#pragma once

// Batch front end: `wulff beta|radial|symmetrize|solve|verify --config FILE --out DIR`.

#include <json.hpp>

#include <cstdint>
#include <filesystem>

namespace wulff::cli {

enum ExitCode : int { kPass = 0, kCheckFailed = 1, kConfigError = 2, kNonConvergence = 3 };

struct Options {
  std::filesystem::path out = ".";
  std::uint64_t seed = 0;
  bool deterministic = true;
};

int cmd_beta(const nlohmann::json& cfg, const Options& opts);
int cmd_radial(const nlohmann::json& cfg, const Options& opts);
int cmd_symmetrize(const nlohmann::json& cfg, const Options& opts);
int cmd_solve(const nlohmann::json& cfg, const Options& opts);
int cmd_verify(const nlohmann::json& cfg, const Options& opts);

/// Parses arguments, dispatches, and maps errors to exit codes.
int run(int argc, char** argv);

}  // namespace wulff::cli
