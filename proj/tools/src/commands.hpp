#pragma once

#include "config.hpp"

namespace ecps::cli {

enum ExitCode { ok = 0, verification_failed = 1, config_error = 2, budget_exceeded = 3 };

struct RunOptions {
  int workers = 1;
};

int cmd_verify(const ExperimentConfig& c, const RunOptions& opt);
int cmd_phi_decay(const ExperimentConfig& c, const RunOptions& opt);
int cmd_entropy(const ExperimentConfig& c, const RunOptions& opt);
int cmd_ergodic(const ExperimentConfig& c, const RunOptions& opt);
int cmd_recurrence(const ExperimentConfig& c, const RunOptions& opt);

}  // namespace ecps::cli
