#pragma once

#include <filesystem>

#include "config.hpp"

namespace hypercross::cli {

struct RunContext {
  const ExperimentConfig& cfg;
  int jobs = 1;
  std::filesystem::path out;
};

/// Each command returns 0 when every configured check passes and no record
/// is flagged unreliable, 1 otherwise.
int cmd_rates(const RunContext& ctx);
int cmd_conditions(const RunContext& ctx);
int cmd_lp_check(const RunContext& ctx);
int cmd_sharpness(const RunContext& ctx);
int cmd_grid_info(const RunContext& ctx);

}  // namespace hypercross::cli
