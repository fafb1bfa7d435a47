#pragma once

#include <iosfwd>
#include <string>

#include "fluidq/config.hpp"
#include "fluidq/scale_functions.hpp"

namespace fluidq {

// Exit codes shared by all subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitGateFailed = 1;
inline constexpr int kExitBadConfig = 2;
inline constexpr int kExitRuntime = 3;

int cmd_analyze(const ExperimentConfig& cfg, std::ostream& log);
int cmd_simulate(const ExperimentConfig& cfg, std::ostream& log);
int cmd_compare(const ExperimentConfig& cfg, std::ostream& log);

struct ScaleFnOptions {
  double q = 0.0;
  double x_max = 5.0;
  int points = 101;
  InversionMethod method = InversionMethod::CrossValidate;
};

int cmd_scale_fn(const ExperimentConfig& cfg, const ScaleFnOptions& opt,
                 std::ostream& log);

// Closed-form observed (length-biased) period means, valid for both spectral
// signs; obtained by one-sided Richardson differentiation of the residual
// transforms at 0.
double observed_idle_mean_closed(const LevyModel& m);
double observed_busy_mean_closed(const LevyModel& m);

}  // namespace fluidq
