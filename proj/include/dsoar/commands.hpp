#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "dsoar/scenario.hpp"

namespace dsoar {

enum ExitCode : int { kExitOk = 0, kExitInputError = 1, kExitNumeric = 2 };

/// What a command did: exit status, one-line summary for the terminal, the
/// JSON report it wrote and the files it produced.
struct CommandResult {
  int exit_code = kExitOk;
  std::string summary;
  nlohmann::json report;
  std::vector<std::filesystem::path> files;
};

/// Closed-loop DS run: trajectory.csv and simulate_report.json.
CommandResult cmd_simulate(const Scenario& scn);

/// LARC, bad bracket and weight search for scn.larc.system:
/// controllability_report.json.
CommandResult cmd_controllability(const Scenario& scn);

/// Simulates, writes trajectory.csv, reads it back and compares it with
/// scn.reference: compare_report.json.
CommandResult cmd_compare(const Scenario& scn);

/// Scalar ESC toy problem from scn.demo_esc: demo_esc.csv and
/// demo_esc_report.json.
CommandResult cmd_demo_esc(const Scenario& scn);

/// Example 2 obstruction demo from scn.demo_chenfliess: reachable endpoints
/// in demo_chenfliess.csv and demo_chenfliess_report.json.
CommandResult cmd_demo_chenfliess(const Scenario& scn);

/// Random-control sweep behind the obstruction demo.
struct ObstructionSweep {
  int trials = 0;
  double min_output = 0.0;            ///< min over trials and sample times of y(t)
  double max_ode_discrepancy = 0.0;   ///< max |exact form - RK4| over the same samples
  double max_fliess_discrepancy = 0.0;  ///< order-2 series vs exact form, constant inputs
  std::vector<double> sample_times;
  /// (trial, t, x, y) endpoints from the ODE.
  std::vector<std::array<double, 4>> endpoints;
};

ObstructionSweep example2_obstruction_sweep(const DemoChenFliessSettings& cfg);

}  // namespace dsoar
