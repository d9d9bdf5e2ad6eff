#pragma once

#include <functional>
#include <vector>

#include "dsoar/flight_dynamics.hpp"

namespace dsoar {

/// Dither amplitudes, frequency and phase offset of the roll-rate ESC law.
struct EscParams {
  double a = 2.1;      ///< amplitude of u1 [rad/s]
  double b = 0.8;      ///< amplitude of u2 [rad/s]
  double omega = 5.8;  ///< dither frequency [rad/s]
  double mu = 0.55;    ///< phase offset of u1 [rad]

  double period() const;
  void validate() const;
};

struct DitherPair {
  double u1;
  double u2;
};

/// u1 = a cos(omega t + mu), u2 = b sin(omega t).
DitherPair dither_signals(double t, const EscParams& e);

/// Gain shapes b1(J), b2(J) of u = b1(J) u1(t) + b2(J) u2(t).
struct EscGainShapes {
  std::function<double(double)> b1 = [](double j) { return j; };
  std::function<double(double)> b2 = [](double) { return 1.0; };
};

/// Energy-gain objective J = -V Wdot cos(gamma) sin(psi) / g [m/s].
double objective_energy_gain(const FlightState& s, const BirdWindParams& p);

/// Control law from a measured objective value. The controller only ever
/// sees J; nothing else about the wind or airframe.
double esc_control_from_objective(double t, double objective, const EscParams& e,
                                  const EscGainShapes& shapes = {});

/// Roll-rate command u(t, x) with J evaluated from the state.
double esc_control(double t, const FlightState& s, const EscParams& e, const BirdWindParams& p);

struct ScalarEscTrace {
  std::vector<double> times;
  std::vector<double> x;
  std::vector<double> objective;
  std::vector<double> control;
  double x_star = 1.0;

  double final_error() const;
  /// max |x - x_star| over the trailing `window` seconds.
  double max_error_over_last(double window) const;
};

/// Scalar ESC toy problem xdot = J(x) sqrt(w) cos(w t) + sqrt(w) sin(w t) with
/// J(x) = 2 (x - x_star)^2, integrated with RK4. Throws std::runtime_error
/// naming the time of blow-up if the state goes non-finite.
ScalarEscTrace scalar_esc_demo(double x0, double x_star, double omega, double t_end, double h);

}  // namespace dsoar
