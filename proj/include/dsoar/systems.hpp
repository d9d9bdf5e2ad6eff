#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "dsoar/flight_dynamics.hpp"
#include "dsoar/lie.hpp"

namespace dsoar {

/// The 7-state roll-rate glider as a control-affine system.
ControlAffineSystem dynamic_soaring_system(const BirdWindParams& p, const DriftOptions& opt = {});

/// Unicycle: xdot = b1 u1 + b2 u2 with b1 = (cos th, sin th, 0), b2 = (0, 0, 1).
ControlAffineSystem ground_robot_system();

/// xdot = u, ydot = x^2: accessible but not controllable at the origin.
ControlAffineSystem example2_system();

/// f = 0, b = (1, 0, x1^2) style driftless fixture with nonconstant b.
ControlAffineSystem driftless_system();

/// {f, b, ad_f^2 b, ..., ad_f^5 b}; with `include_fb` also ad_f^1 b.
std::vector<FormalBracket> ds_distribution(bool include_fb);

/// [b,[f,b]].
FormalBracket ds_bad_bracket();

struct NamedFixture {
  std::string system;  ///< "dynamic_soaring", "ground_robot", "example2", "driftless"
  ControlAffineSystem fields;
  Eigen::VectorXd x0;
  std::vector<FormalBracket> distribution;
  std::optional<FormalBracket> bad;
  /// Informational remarks that go into reports.
  std::vector<std::string> notes;
};

/// Builds a fixture by name. The dynamic-soaring one uses `p`, `opt` and `ds_x0`.
/// Throws std::invalid_argument for an unknown name.
NamedFixture make_fixture(const std::string& name, const BirdWindParams& p,
                          const DriftOptions& opt, const FlightState& ds_x0);

}  // namespace dsoar
