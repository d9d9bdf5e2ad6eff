#include "dsoar/esc.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "dsoar/integrator.hpp"

namespace dsoar {

double EscParams::period() const { return 2.0 * M_PI / omega; }

void EscParams::validate() const {
  if (!std::isfinite(omega) || omega <= 0.0) throw std::invalid_argument("omega: must be > 0");
  if (!std::isfinite(a)) throw std::invalid_argument("a: not finite");
  if (!std::isfinite(b)) throw std::invalid_argument("b: not finite");
  if (!std::isfinite(mu)) throw std::invalid_argument("mu: not finite");
}

DitherPair dither_signals(double t, const EscParams& e) {
  return {e.a * std::cos(e.omega * t + e.mu), e.b * std::sin(e.omega * t)};
}

double objective_energy_gain(const FlightState& s, const BirdWindParams& p) {
  const double wdot = wind_rate(s.z, s.v, s.gamma, p.wind);
  return -s.v * wdot * std::cos(s.gamma) * std::sin(s.psi) / p.g;
}

double esc_control_from_objective(double t, double objective, const EscParams& e,
                                  const EscGainShapes& shapes) {
  const DitherPair d = dither_signals(t, e);
  return shapes.b1(objective) * d.u1 + shapes.b2(objective) * d.u2;
}

double esc_control(double t, const FlightState& s, const EscParams& e, const BirdWindParams& p) {
  const DitherPair d = dither_signals(t, e);
  return objective_energy_gain(s, p) * d.u1 + d.u2;
}

double ScalarEscTrace::final_error() const { return std::abs(x.back() - x_star); }

double ScalarEscTrace::max_error_over_last(double window) const {
  const double t_from = times.back() - window;
  double worst = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] >= t_from) worst = std::max(worst, std::abs(x[i] - x_star));
  }
  return worst;
}

ScalarEscTrace scalar_esc_demo(double x0, double x_star, double omega, double t_end, double h) {
  if (!(omega > 0.0) || !std::isfinite(omega)) throw std::invalid_argument("omega: must be > 0");
  if (!(h > 0.0)) throw std::invalid_argument("h: must be > 0");
  if (!(t_end > 0.0)) throw std::invalid_argument("t_end: must be > 0");

  const double amp = std::sqrt(omega);
  const auto objective = [x_star](double x) { return 2.0 * (x - x_star) * (x - x_star); };
  const auto control = [&](double t, double x) {
    return objective(x) * amp * std::cos(omega * t) + amp * std::sin(omega * t);
  };

  ScalarEscTrace out;
  out.x_star = x_star;
  const auto steps = static_cast<std::size_t>(std::llround(t_end / h));
  out.times.reserve(steps + 1);
  out.x.reserve(steps + 1);
  double x = x0;
  for (std::size_t k = 0;; ++k) {
    const double t = static_cast<double>(k) * h;
    out.times.push_back(t);
    out.x.push_back(x);
    out.objective.push_back(objective(x));
    out.control.push_back(control(t, x));
    if (k == steps) break;
    x = rk4_step(control, x, t, h);
    if (!std::isfinite(x)) {
      std::ostringstream msg;
      msg << "scalar ESC diverged at t=" << t + h;
      throw std::runtime_error(msg.str());
    }
  }
  return out;
}

}  // namespace dsoar
