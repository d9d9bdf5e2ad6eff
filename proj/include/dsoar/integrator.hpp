#pragma once

#include <stdexcept>

namespace dsoar {

/// One classical fourth-order Runge-Kutta step of xdot = deriv(t, x).
///
/// `State` is anything closed under + and scalar * (Eigen vectors, double).
/// Exceptions thrown by `deriv` propagate unchanged so the caller can see
/// which stage hit a singular state.
template <typename State, typename Deriv>
State rk4_step(Deriv&& deriv, const State& s, double t, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("rk4_step: step must be > 0");
  const double half = 0.5 * h;
  const State k1 = deriv(t, s);
  const State k2 = deriv(t + half, State(s + half * k1));
  const State k3 = deriv(t + half, State(s + half * k2));
  const State k4 = deriv(t + h, State(s + h * k3));
  return State(s + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
}

}  // namespace dsoar
