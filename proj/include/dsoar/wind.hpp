#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "dsoar/jet.hpp"

namespace dsoar {

/// Logistic shear layer W(z) = w0 / (1 + exp(-z/delta)).
struct WindParams {
  double w0 = 7.8;     ///< free-stream wind speed [m/s]
  double delta = 7.0;  ///< shear-layer thickness [m]

  void validate() const {
    if (!std::isfinite(w0) || w0 < 0.0) throw std::invalid_argument("w0: must be finite and >= 0");
    if (!std::isfinite(delta) || delta <= 0.0) throw std::invalid_argument("delta: must be > 0");
  }
};

namespace detail {

// exp(-z/delta) overflows for z/delta < -700; the profile is flat there.
inline constexpr double kExpClamp = 700.0;

inline void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw std::domain_error(std::string(what) + " is not finite");
}

}  // namespace detail

/// Wind speed [m/s] at altitude z [m].
template <typename Scalar>
Scalar wind_speed(const Scalar& z, const WindParams& p) {
  using std::exp;
  detail::require_finite(value_of(z), "altitude");
  const Scalar arg = -z / p.delta;
  if (value_of(arg) > detail::kExpClamp) return Scalar(0.0);
  return p.w0 / (1.0 + exp(arg));
}

/// dW/dz [1/s].
template <typename Scalar>
Scalar wind_gradient(const Scalar& z, const WindParams& p) {
  using std::exp;
  detail::require_finite(value_of(z), "altitude");
  const Scalar arg = -z / p.delta;
  if (value_of(arg) > detail::kExpClamp) return Scalar(0.0);
  const Scalar e = exp(arg);
  const Scalar one_plus = 1.0 + e;
  return p.w0 * e / (p.delta * one_plus * one_plus);
}

/// Along-track wind rate Wdot = dW/dz * zdot with zdot = V sin(gamma) [m/s^2].
template <typename Scalar>
Scalar wind_rate(const Scalar& z, const Scalar& v, const Scalar& gamma, const WindParams& p) {
  using std::sin;
  detail::require_finite(value_of(v), "airspeed");
  detail::require_finite(value_of(gamma), "flight-path angle");
  return wind_gradient(z, p) * v * sin(gamma);
}

}  // namespace dsoar
