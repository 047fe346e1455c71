#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lfd/io.h"
#include "lfd/learner.h"
#include "lfd/numerics.h"
#include "lfd/systems.h"

namespace lfd {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitValidation = 2,
  kExitCertification = 3,
  kExitDivergence = 4,
};

enum class LearnMode { kAuto, kSingle, kMulti };

struct TrackConfig {
  std::string reference = "figure_eight";  // or "setpoint"
  double frequency = 0.1;
  int axis = 0;             // figure-eight on a single-axis plant
  Vec setpoint;             // z_R for "setpoint"
  std::optional<Vec> x0;    // default: the reference's initial state
  double duration = 20.0;
};

/// One JSON document describes a whole run. All quantities are SI.
struct RunConfig {
  std::string preset;
  PresetParameters parameters;
  std::optional<Mat> expert_Q;
  std::optional<Mat> expert_R;
  std::vector<Vec> initial_conditions;  // default: the preset's
  double T = 1.0;
  std::optional<double> demo_length;    // default: T
  double dt = 1e-3;
  LearnMode mode = LearnMode::kAuto;
  FeedbackMode feedback = FeedbackMode::kClosedLoop;
  std::optional<double> hold;
  std::optional<Vec> w;                 // embedding weights, default per preset
  std::optional<Vec> xi0;
  std::vector<double> T_grid;           // default: multiples of T/8 up to the demo length
  std::vector<Vec> simulate_x0;         // default: the first initial condition
  double simulate_duration = 20.0;
  std::optional<TrackConfig> track;

  /// Throws Error(kInvalidArgument) on malformed or inconsistent input.
  static RunConfig from_json(const Json& j);
};

/// Runs one subcommand: demos, learn, certify, simulate, track or all.
/// Files are read from and written to `out`. Messages go to `log`.
int run_command(const std::string& command, const RunConfig& config,
                const std::filesystem::path& out, int jobs, bool force, std::ostream& log);

}  // namespace lfd
