#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dsoar/esc.hpp"
#include "dsoar/flight_dynamics.hpp"

namespace dsoar {

/// Time-indexed record of a run. All sequences have the same length.
struct Trajectory {
  std::vector<double> times;
  std::vector<FlightState> states;
  std::vector<double> controls;         ///< roll rate u [rad/s]
  std::vector<double> objective;        ///< J [m/s]
  std::vector<double> specific_energy;  ///< e [m]
  std::vector<double> total_energy;     ///< E [J]

  std::size_t size() const { return times.size(); }
  void reserve(std::size_t n);

  /// Throws std::invalid_argument unless lengths agree, size >= 2 and
  /// times strictly increase.
  void validate() const;
};

double specific_energy(const FlightState& s, const BirdWindParams& p);
double total_energy(const FlightState& s, const BirdWindParams& p);

/// The two terms of de/dt: aerodynamic drag loss and wind-shear exchange.
/// Their sum equals V sin(gamma) + V Vdot / g for the drift with `sign`.
struct EnergyRateTerms {
  double drag_term;  ///< -D V / (m g) [m/s]
  double wind_term;  ///< sign * V Wdot cos(gamma) sin(psi) / g [m/s]
  double total() const { return drag_term + wind_term; }
};

EnergyRateTerms energy_rate_terms(const FlightState& s, const BirdWindParams& p,
                                  WindCouplingSign sign = WindCouplingSign::kPositive);

/// de/dt = V sin(gamma) + V Vdot / g from the implemented drift.
double specific_energy_rate(const FlightState& s, const BirdWindParams& p,
                            WindCouplingSign sign = WindCouplingSign::kPositive);

enum class SimStatus { kCompleted, kSingularity, kNonFinite };

std::string to_string(SimStatus s);

struct SimulationOptions {
  double t_end = 10.0;
  double h = 1e-3;
  WindCouplingSign sign = WindCouplingSign::kPositive;
};

/// Trajectory up to the last good step plus how the run ended.
struct SimulationResult {
  Trajectory trajectory;
  SimStatus status = SimStatus::kCompleted;
  std::string message;
  std::optional<double> abort_time;

  bool completed() const { return status == SimStatus::kCompleted; }
};

using ControlLaw = std::function<double(double t, const FlightState& s)>;

/// Fixed-step RK4 of xdot = f(x) + b law(t, x). The law is evaluated at every
/// stage. A singular or non-finite state ends the run early with a status.
SimulationResult simulate(const FlightState& x0, const BirdWindParams& p, const ControlLaw& law,
                          const SimulationOptions& opt);

/// Closed-loop dynamic-soaring run under the ESC roll law. Rejects steps
/// coarser than a twentieth of the dither period.
SimulationResult simulate_ds(const FlightState& x0, const BirdWindParams& p, const EscParams& e,
                             const SimulationOptions& opt);

enum class Phase { kWindwardClimb, kHighTurn, kLeewardDescent, kLowTurn };

std::string to_string(Phase p);

struct PhaseSegment {
  Phase phase;
  std::size_t first;  ///< index of the first sample
  std::size_t last;   ///< index of the last sample (shared with the next segment)
  double t_begin;
  double t_end;
  double heading_change;  ///< psi(last) - psi(first) [rad]
};

struct PhaseOptions {
  double prominence = 0.5;   ///< minimum altitude swing that confirms an extremum [m]
  double turn_window = 0.5;  ///< half-width of a turn segment around an extremum [s]
};

struct PhaseSegmentation {
  std::vector<PhaseSegment> segments;
  bool full_cycle = false;
  /// Sample range [first, last] of the first complete four-phase cycle.
  std::optional<std::pair<std::size_t, std::size_t>> cycle;

  std::string status() const { return full_cycle ? "complete cycle" : "incomplete cycle"; }
};

/// Splits a trajectory into climb / turn / descent / turn segments around
/// altitude extrema that pass the prominence threshold.
PhaseSegmentation detect_phases(const Trajectory& traj, const PhaseOptions& opt = {});

/// |E[last] - E[first]| / |E[first]|.
double relative_energy_drift(const Trajectory& traj, std::size_t first, std::size_t last);

struct ComparisonReport {
  static constexpr std::array<const char*, kStateDim> kStateNames = {"x", "y", "z", "V",
                                                                     "gamma", "psi", "phi"};
  /// Per-state RMSE over the overlap; empty when the reference lacks the state.
  std::array<std::optional<double>, kStateDim> rmse;
  double trajectory_energy_drift = 0.0;
  double reference_energy_drift = 0.0;
  double overlap_begin = 0.0;
  double overlap_end = 0.0;
  std::size_t samples = 0;

  double overlap() const { return overlap_end - overlap_begin; }
};

/// Per-state RMSE of `traj` against `ref` linearly interpolated to traj's
/// sample times inside the common time range. Reference states whose value
/// is NaN are treated as absent. Throws std::invalid_argument on an empty
/// overlap.
ComparisonReport compare_trajectories(const Trajectory& traj, const Trajectory& ref);

}  // namespace dsoar
