#pragma once

#include "qbd/cli/config.hpp"

namespace qbd::cli {

// Exit codes: 0 success (all declared checks passed), 1 validation error,
// 2 numerical failure. Each command writes its CSV outputs plus a
// manifest.json into cfg.out_dir.
int cmd_noise(const RunConfig& cfg);
int cmd_langevin(const RunConfig& cfg);
int cmd_cutoff(const RunConfig& cfg);
int cmd_dispersion(const RunConfig& cfg);
int cmd_kramers(const RunConfig& cfg);
int cmd_smoluchowski(const RunConfig& cfg);
int cmd_constants(const RunConfig& cfg);

} // namespace qbd::cli
