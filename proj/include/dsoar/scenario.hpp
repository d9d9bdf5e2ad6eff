#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "dsoar/esc.hpp"
#include "dsoar/flight_dynamics.hpp"
#include "dsoar/simulation.hpp"

namespace dsoar {

/// Bad config text, unknown key, wrong type or a violated invariant.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct LarcSettings {
  std::string system = "dynamic_soaring";
  /// Bracket strings such as "[f,[f,b]]"; empty means the fixture's own set.
  std::vector<std::string> brackets;
  double rank_tol = 1e-8;
  int max_w0 = 3;
  int max_w = 10;
};

struct DemoEscSettings {
  double x0 = 0.0;
  double x_star = 1.0;
  double omega = 50.0;
  double t_end = 10.0;
  double h = 1e-4;
};

struct DemoChenFliessSettings {
  double t_end = 5.0;
  int trials = 1000;
  int pieces = 10;
  double bound = 0.1;
  std::uint64_t seed = 1;
  double ode_h = 1e-3;
};

/// Everything one run needs. Defaults are the albatross parameters, the
/// climb-phase initial state and the reported ESC tuning.
struct Scenario {
  BirdWindParams bird;
  EscParams esc;
  FlightState initial_state{0.0, 0.0, 10.0, 14.0, 0.6, 1.4, -0.1};
  double t_end = 10.0;
  double h = 1e-3;
  WindCouplingSign wind_sign = WindCouplingSign::kPositive;
  std::string output_dir = "out";
  std::optional<std::string> reference;
  PhaseOptions phases;
  LarcSettings larc;
  DemoEscSettings demo_esc;
  DemoChenFliessSettings demo_chenfliess;

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

/// Parses JSON text (comments allowed). Empty text gives the defaults.
Scenario parse_scenario(std::string_view text, const std::string& source = "<config>");

/// Reads and parses a file. Throws ConfigError when it cannot be read.
Scenario load_scenario(const std::filesystem::path& path);

/// Fully resolved scenario, defaults included.
nlohmann::json to_json(const Scenario& s);

}  // namespace dsoar
