#pragma once

#include "slspec/config.hpp"

namespace slspec {

// Each command writes its CSV outputs, report.txt and manifest.json under
// cfg.out_dir and echoes the report to stdout. Errors escape to the caller;
// the CLI maps ConfigError to exit code 2 and other library errors to 3.

void cmd_classify(const RunConfig& cfg);
void cmd_eigs(const RunConfig& cfg);
void cmd_asym(const RunConfig& cfg);
void cmd_riesz(const RunConfig& cfg);
void cmd_oracle(const RunConfig& cfg);

}  // namespace slspec
