#include "dsoar/flight_dynamics.hpp"

namespace dsoar {

void FlightState::validate() const {
  const double vals[] = {x, y, z, v, gamma, psi, phi};
  const char* names[] = {"x", "y", "z", "V", "gamma", "psi", "phi"};
  for (int i = 0; i < kStateDim; ++i) {
    if (!std::isfinite(vals[i])) throw std::invalid_argument(std::string(names[i]) + ": not finite");
  }
  if (v <= 0.0) throw std::invalid_argument("V: airspeed must be > 0");
  if (std::abs(gamma) >= M_PI / 2) throw std::invalid_argument("gamma: |gamma| must be < pi/2");
}

void BirdWindParams::validate() const {
  const auto positive = [](double v, const char* name) {
    if (!std::isfinite(v) || v <= 0.0) throw std::invalid_argument(std::string(name) + ": must be > 0");
  };
  const auto nonnegative = [](double v, const char* name) {
    if (!std::isfinite(v) || v < 0.0) throw std::invalid_argument(std::string(name) + ": must be >= 0");
  };
  positive(mass, "mass");
  positive(wing_area, "wing_area");
  nonnegative(cd0, "cd0");
  nonnegative(k_induced, "k_induced");
  positive(rho, "rho");
  positive(g, "g");
  positive(cl_fixed, "cl_fixed");
  wind.validate();
}

WindCouplingSign parse_wind_coupling_sign(const std::string& text) {
  if (text == "+1" || text == "1") return WindCouplingSign::kPositive;
  if (text == "-1") return WindCouplingSign::kNegative;
  throw std::invalid_argument("sign: expected +1 or -1, got '" + text + "'");
}

LegacyState legacy_two_input_derivative(const LegacyState& s6, double cl, double phi,
                                        const BirdWindParams& p, WindCouplingSign sign) {
  BirdWindParams q = p;
  q.cl_fixed = cl;
  StateVector<double> s;
  s << s6, phi;
  const StateVector<double> rate = drift_field<double>(s, q, DriftOptions{sign, std::nullopt});
  return rate.head<6>();
}

}  // namespace dsoar
