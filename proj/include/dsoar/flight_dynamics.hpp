#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

#include "dsoar/jet.hpp"
#include "dsoar/wind.hpp"

namespace dsoar {

inline constexpr int kStateDim = 7;

template <typename Scalar>
using StateVector = Eigen::Matrix<Scalar, kStateDim, 1>;

/// Index of each coordinate in a StateVector.
enum StateIndex : int { kX = 0, kY, kZ, kV, kGamma, kPsi, kPhi };

/// Point-mass glider state in the control-affine form: position in the
/// Earth frame, airspeed and angles relative to the air mass. Angles are
/// radians and never wrapped.
struct FlightState {
  double x = 0.0;      ///< east [m]
  double y = 0.0;      ///< north [m]
  double z = 0.0;      ///< altitude [m]
  double v = 0.0;      ///< airspeed [m/s]
  double gamma = 0.0;  ///< flight-path angle [rad]
  double psi = 0.0;    ///< heading [rad]
  double phi = 0.0;    ///< roll [rad]

  StateVector<double> to_vector() const { return {x, y, z, v, gamma, psi, phi}; }

  static FlightState from_vector(const StateVector<double>& s) {
    return {s[kX], s[kY], s[kZ], s[kV], s[kGamma], s[kPsi], s[kPhi]};
  }

  /// Throws std::invalid_argument naming the first offending field.
  void validate() const;
};

/// Thrown when a state leaves the model's domain (v -> 0 or cos(gamma) -> 0).
class SingularStateError : public std::domain_error {
 public:
  SingularStateError(const std::string& what, StateVector<double> state)
      : std::domain_error(what), state_(std::move(state)) {}
  const StateVector<double>& state() const { return state_; }

 private:
  StateVector<double> state_;
};

/// Albatross and wind constants.
struct BirdWindParams {
  double mass = 9.5;         ///< [kg]
  double wing_area = 0.65;   ///< [m^2]
  double cd0 = 0.01;
  double k_induced = 0.0156;
  double rho = 1.2;          ///< [kg/m^3]
  double g = 9.8;            ///< [m/s^2]
  WindParams wind;
  double cl_fixed = std::sqrt(0.01 / 0.0156);

  /// sqrt(cd0 / k_induced): the lift coefficient of maximum L/D.
  double best_glide_cl() const { return std::sqrt(cd0 / k_induced); }

  void validate() const;
};

/// Sign applied to the m*Wdot*cos(gamma)*sin(psi) term of the airspeed equation.
enum class WindCouplingSign : int { kPositive = 1, kNegative = -1 };

inline double to_double(WindCouplingSign s) { return static_cast<double>(static_cast<int>(s)); }

/// Parses "+1", "1", "-1".
WindCouplingSign parse_wind_coupling_sign(const std::string& text);

template <typename Scalar>
struct AeroForces {
  Scalar lift;
  Scalar drag;
};

/// Lift and drag [N] with the parabolic polar C_D = cd0 + k C_L^2.
template <typename Scalar>
AeroForces<Scalar> lift_drag(const Scalar& v, double cl, const BirdWindParams& p) {
  if (!(value_of(v) >= 0.0)) throw std::domain_error("lift_drag: airspeed must be >= 0");
  const Scalar q = 0.5 * p.rho * p.wing_area * v * v;
  return {q * cl, q * (p.cd0 + p.k_induced * cl * cl)};
}

struct DriftOptions {
  WindCouplingSign sign = WindCouplingSign::kPositive;
  /// When set, lift and drag are constants evaluated at this airspeed
  /// instead of functions of the state's V.
  std::optional<double> frozen_aero_airspeed;
};

namespace detail {

inline constexpr double kSingularTol = 1e-6;

template <typename Scalar>
void check_domain(const StateVector<Scalar>& s) {
  using std::cos;
  const double v = value_of(s[kV]);
  const double cg = std::cos(value_of(s[kGamma]));
  for (int i = 0; i < kStateDim; ++i) {
    if (!std::isfinite(value_of(s[i]))) {
      StateVector<double> vals;
      for (int j = 0; j < kStateDim; ++j) vals[j] = value_of(s[j]);
      throw SingularStateError("non-finite state component", vals);
    }
  }
  if (v < kSingularTol || std::abs(cg) < kSingularTol) {
    StateVector<double> vals;
    for (int j = 0; j < kStateDim; ++j) vals[j] = value_of(s[j]);
    throw SingularStateError(v < kSingularTol ? "airspeed below singularity guard"
                                              : "|cos(gamma)| below singularity guard",
                             vals);
  }
}

}  // namespace detail

/// Drift f(x) of the roll-rate control-affine glider: the six point-mass
/// equations with C_L fixed, plus a zero roll rate.
template <typename Scalar>
StateVector<Scalar> drift_field(const StateVector<Scalar>& s, const BirdWindParams& p,
                                const DriftOptions& opt = {}) {
  using std::cos;
  using std::sin;
  detail::check_domain(s);

  const Scalar& z = s[kZ];
  const Scalar& v = s[kV];
  const Scalar& gamma = s[kGamma];
  const Scalar& psi = s[kPsi];
  const Scalar& phi = s[kPhi];

  Scalar lift;
  Scalar drag;
  if (opt.frozen_aero_airspeed) {
    const auto f = lift_drag(*opt.frozen_aero_airspeed, p.cl_fixed, p);
    lift = Scalar(f.lift);
    drag = Scalar(f.drag);
  } else {
    auto f = lift_drag(v, p.cl_fixed, p);
    lift = std::move(f.lift);
    drag = std::move(f.drag);
  }

  const Scalar w = wind_speed(z, p.wind);
  const Scalar wdot = wind_rate(z, v, gamma, p.wind);
  const Scalar cg = cos(gamma);
  const Scalar sg = sin(gamma);
  const Scalar cp = cos(psi);
  const Scalar sp = sin(psi);
  const double m = p.mass;
  const double sgn = to_double(opt.sign);

  StateVector<Scalar> out;
  out[kX] = v * cg * cp;
  out[kY] = v * cg * sp - w;
  out[kZ] = v * sg;
  out[kV] = (-drag - m * p.g * sg + sgn * m * wdot * cg * sp) / m;
  out[kGamma] = (lift * cos(phi) - m * p.g * cg - m * wdot * sp * sg) / (m * v);
  out[kPsi] = (lift * sin(phi) + m * wdot * cp) / (m * v * cg);
  out[kPhi] = Scalar(0.0);
  return out;
}

/// The roll-rate input direction: the unit vector in the phi slot.
template <typename Scalar = double>
StateVector<Scalar> control_field() {
  StateVector<Scalar> b;
  for (int i = 0; i < kStateDim; ++i) b[i] = Scalar(0.0);
  b[kPhi] = Scalar(1.0);
  return b;
}

/// xdot = f(x) + b u.
template <typename Scalar>
StateVector<Scalar> state_derivative(const StateVector<Scalar>& s, const Scalar& u,
                                     const BirdWindParams& p, const DriftOptions& opt = {}) {
  StateVector<Scalar> out = drift_field(s, p, opt);
  out[kPhi] = out[kPhi] + u;
  return out;
}

inline StateVector<double> state_derivative(const FlightState& s, double u,
                                            const BirdWindParams& p,
                                            WindCouplingSign sign = WindCouplingSign::kPositive) {
  return state_derivative<double>(s.to_vector(), u, p, DriftOptions{sign, std::nullopt});
}

using LegacyState = Eigen::Matrix<double, 6, 1>;

/// Original two-input model with controls (C_L, phi), for replaying
/// externally produced trajectories.
LegacyState legacy_two_input_derivative(const LegacyState& s6, double cl, double phi,
                                        const BirdWindParams& p,
                                        WindCouplingSign sign = WindCouplingSign::kPositive);

}  // namespace dsoar
