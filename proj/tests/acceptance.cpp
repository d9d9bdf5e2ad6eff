// Acceptance checks: one PASS/FAIL line per criterion, exit 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>

#include <Eigen/Core>

#include "dsoar/commands.hpp"
#include "dsoar/integrator.hpp"
#include "dsoar/lie.hpp"
#include "dsoar/simulation.hpp"
#include "dsoar/systems.hpp"

using namespace dsoar;

namespace {

const FlightState kX0{0.0, 0.0, 10.0, 14.0, 0.6, 1.4, -0.1};

int failures = 0;

void report(int id, bool ok, const std::string& title, const std::string& detail) {
  std::printf("[%s] %2d %s: %s\n", ok ? "PASS" : "FAIL", id, title.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Eigen::VectorXd fb_closed_form(const FlightState& s, const BirdWindParams& p) {
  const double L = lift_drag(s.v, p.cl_fixed, p).lift;
  Eigen::VectorXd r = Eigen::VectorXd::Zero(7);
  r[4] = L * std::sin(s.phi) / (p.mass * s.v);
  r[5] = -L * std::cos(s.phi) / (p.mass * s.v * std::cos(s.gamma));
  return r;
}

// [f,[f,b]] with lift and drag treated as constants.
Eigen::VectorXd ffb_closed_form(const FlightState& s, const BirdWindParams& p) {
  const double m = p.mass, g = p.g, V = s.v, W0 = p.wind.w0, d = p.wind.delta;
  const auto ld = lift_drag(V, p.cl_fixed, p);
  const double L = ld.lift, D = ld.drag;
  const double Cg = std::cos(s.gamma), Sg = std::sin(s.gamma), Tg = std::tan(s.gamma);
  const double Cp = std::cos(s.psi), Sp = std::sin(s.psi);
  const double Cf = std::cos(s.phi), Sf = std::sin(s.phi);
  const double sec = 1.0 / Cg;
  const double eta = std::exp(-s.z / d);
  const double xi = 1.0 + eta;
  const double k = eta * W0 / (d * xi * xi);
  const double A = -D - m * g * Sg + k * m * V * Cg * Sg * Sp +
                   Tg * (m * g * Cg - L * Cf + k * m * V * Sg * Sg * Sp);
  const double B = k * Cp + sec * Tg / (m * V) * (k * m * V * Cp * Sg + L * Sf);
  Eigen::VectorXd r(7);
  r[0] = L / m * (Cp * Sg * Sf - Cf * Sp);
  r[1] = L / m * (Cf * Cp + Sg * Sf * Sp);
  r[2] = -L / m * Cg * Sf;
  r[3] = k * L * Cf * Cp * Sg / m -
         L * Sf / (m * m * V) * (-m * g * Cg + k * m * V * Sp * (Cg * Cg - Sg * Sg));
  r[4] = -L * Sf / (m * m * V * V) * (-k * m * V * Cg * Sg * Sp - D) -
         k * L * Cf * Cp * Sg * Tg / (m * V);
  r[5] = L * Cf * sec / (m * m * V * V) * A - k * L * Cf * sec * Sp * Tg / (m * V) -
         L * Sf / (m * V) * B;
  r[6] = 0.0;
  return r;
}

// Largest relative error over the nonzero components of `exact`.
double worst_component_error(const Eigen::VectorXd& v, const Eigen::VectorXd& exact) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < exact.size(); ++i) {
    if (exact[i] == 0.0) {
      worst = std::max(worst, std::abs(v[i]) / std::max(1e-300, exact.norm()));
    } else {
      worst = std::max(worst, std::abs(v[i] - exact[i]) / std::abs(exact[i]));
    }
  }
  return worst;
}

void criterion_larc_rank() {
  const auto t0 = std::chrono::steady_clock::now();
  const ControlAffineSystem sys = dynamic_soaring_system(BirdWindParams{});
  const LarcReport with_fb = larc_rank(ds_distribution(true), sys, kX0.to_vector());
  const LarcReport printed = larc_rank(ds_distribution(false), sys, kX0.to_vector());
  const double dt = seconds_since(t0);
  const bool ok = with_fb.rank == 7 && with_fb.smallest_ratio() > 1e-8 &&
                  !with_fb.numeric_breakdown && dt < 5.0;
  report(1, ok, "LARC rank at x0",
         "rank " + std::to_string(with_fb.rank) + "/7 with [f,b], sigma_min/sigma_1 = " +
             num(with_fb.smallest_ratio()) + ", without [f,b] rank " +
             std::to_string(printed.rank) + ", " + num(dt) + " s");
}

void criterion_bracket_oracles() {
  const BirdWindParams p;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> jitter(0.8, 1.2);
  double worst_fb = 0.0;
  double worst_ffb = 0.0;
  for (int trial = 0; trial <= 20; ++trial) {
    Eigen::VectorXd x = kX0.to_vector();
    if (trial > 0) {
      for (int i = 0; i < kStateDim; ++i) x[i] *= jitter(rng);
    }
    const FlightState s = FlightState::from_vector(x);
    const ControlAffineSystem model = dynamic_soaring_system(p);
    const ControlAffineSystem frozen =
        dynamic_soaring_system(p, DriftOptions{WindCouplingSign::kPositive, s.v});
    worst_fb = std::max(worst_fb, worst_component_error(
                                      nested_bracket(FormalBracket::ad_drift(1), model, x),
                                      fb_closed_form(s, p)));
    worst_ffb = std::max(worst_ffb, worst_component_error(
                                        nested_bracket(FormalBracket::ad_drift(2), frozen, x),
                                        ffb_closed_form(s, p)));
  }
  report(2, worst_fb <= 1e-4 && worst_ffb <= 1e-4, "bracket closed forms at x0 + 20 states",
         "max rel error [f,b] " + num(worst_fb) + ", [f,[f,b]] " + num(worst_ffb));
}

void criterion_bad_bracket() {
  const ControlAffineSystem sys = dynamic_soaring_system(BirdWindParams{});
  const BadBracketStatus st =
      bad_bracket_check(ds_bad_bracket(), ds_distribution(true), sys, kX0.to_vector());
  report(3, st.nonvanishing && st.in_span, "[b,[f,b]] at x0",
         "relative norm " + num(st.relative_norm) + ", projection residual " +
             num(st.projection_residual));
}

void criterion_weights() {
  const NeutralizationStatus st = weight_neutralization(1, 5);
  const auto found = find_admissible_weight(3, 10);
  const bool ok = st.passed && st.inequalities.size() == 4 && found == std::make_pair(1, 5);
  report(4, ok, "weight neutralization",
         std::string("(1,5) ") + (st.passed ? "passes" : "fails") + ", search returns " +
             (found ? "(" + std::to_string(found->first) + "," + std::to_string(found->second) + ")"
                    : std::string("none")));
}

void criterion_fixtures() {
  const NamedFixture robot = make_fixture("ground_robot", {}, {}, kX0);
  const int robot_rank = larc_rank(robot.distribution, robot.fields, robot.x0).rank;
  const NamedFixture ex2 = make_fixture("example2", {}, {}, kX0);
  const int ex2_rank = larc_rank(ex2.distribution, ex2.fields, ex2.x0).rank;
  const double fb = nested_bracket(FormalBracket::parse("[f,b]"), ex2.fields, ex2.x0).norm();
  Eigen::Vector2d expected(0.0, 2.0);
  const double fbb =
      (nested_bracket(FormalBracket::parse("[[f,b],b]"), ex2.fields, ex2.x0) - expected).norm();
  const bool ok = robot_rank == 3 && ex2_rank == 2 && fb <= 1e-8 && fbb <= 1e-8;
  report(5, ok, "reference fixtures",
         "ground robot rank " + std::to_string(robot_rank) + ", example 2 rank " +
             std::to_string(ex2_rank) + ", |[f,b](0)| " + num(fb) + ", |[[f,b],b](0)-(0,2)| " +
             num(fbb));
}

void criterion_obstruction() {
  const auto t0 = std::chrono::steady_clock::now();
  const ObstructionSweep sw = example2_obstruction_sweep(DemoChenFliessSettings{});
  const double dt = seconds_since(t0);
  const bool ok = sw.trials == 1000 && sw.min_output >= -1e-9 && sw.max_ode_discrepancy <= 1e-6;
  report(6, ok, "example 2 obstruction",
         std::to_string(sw.trials) + " controls, min y " + num(sw.min_output) +
             ", max |exact - ODE| " + num(sw.max_ode_discrepancy) + ", " + num(dt) + " s");
}

void criterion_conservation() {
  BirdWindParams cons;
  cons.wind.w0 = 0.0;
  cons.cd0 = 0.0;
  cons.k_induced = 0.0;
  const SimulationResult still =
      simulate(kX0, cons, [](double, const FlightState&) { return 0.0; }, SimulationOptions{10.0, 1e-3});
  const double drift = still.completed()
                           ? relative_energy_drift(still.trajectory, 0, still.trajectory.size() - 1)
                           : INFINITY;

  const BirdWindParams p;
  double worst = 0.0;
  const SimulationResult run = simulate_ds(kX0, p, EscParams{}, SimulationOptions{});
  const Trajectory& tr = run.trajectory;
  for (std::size_t i = 1; i + 1 < tr.size(); ++i) {
    const double fd = (tr.specific_energy[i + 1] - tr.specific_energy[i - 1]) /
                      (tr.times[i + 1] - tr.times[i - 1]);
    worst = std::max(worst, std::abs(fd - specific_energy_rate(tr.states[i], p)));
  }
  report(7, drift <= 1e-6 && worst <= 1e-3 && run.completed(), "energy conservation and rate identity",
         "conservative drift " + num(drift) + ", identity residual " + num(worst) + " m/s");
}

void criterion_esc_cycle() {
  const auto t0 = std::chrono::steady_clock::now();
  const SimulationResult run = simulate_ds(kX0, BirdWindParams{}, EscParams{}, SimulationOptions{});
  const PhaseSegmentation seg = detect_phases(run.trajectory);
  const double dt = seconds_since(t0);
  const double drift = seg.cycle ? relative_energy_drift(run.trajectory, seg.cycle->first,
                                                         seg.cycle->second)
                                 : INFINITY;
  const bool ok = run.completed() && seg.full_cycle && drift <= 0.10 && dt < 10.0;
  std::string detail = seg.status();
  if (seg.cycle) {
    detail += " over [" + num(run.trajectory.times[seg.cycle->first]) + ", " +
              num(run.trajectory.times[seg.cycle->second]) + "] s";
  }
  detail += ", cycle energy drift " + num(drift) + " (target <= 0.1), " + num(dt) + " s";
  report(8, ok, "ESC closed-loop cycle", detail);
}

void criterion_scalar_esc() {
  double worst = 0.0;
  for (double x0 : {-2.0, 0.0, 3.0}) {
    worst = std::max(worst, scalar_esc_demo(x0, 1.0, 50.0, 10.0, 1e-4).max_error_over_last(1.0));
  }
  report(9, worst <= 0.2, "scalar ESC demo", "max |x-1| over the last second " + num(worst));
}

void criterion_rk4_order() {
  const BirdWindParams p;
  const auto run = [&](double h) {
    const auto rhs = [&](double, const StateVector<double>& s) { return drift_field<double>(s, p); };
    StateVector<double> s = kX0.to_vector();
    const auto n = static_cast<int>(std::llround(2.0 / h));
    for (int k = 0; k < n; ++k) s = rk4_step(rhs, s, k * h, h);
    return s;
  };
  const auto y4 = run(4e-3);
  const auto y2 = run(2e-3);
  const auto y1 = run(1e-3);
  const double order = std::log2((y4 - y2).norm() / (y2 - y1).norm());
  report(10, order >= 3.8, "RK4 order on u=0 drift", "empirical order " + num(order));
}

}  // namespace

int main() {
  const auto guard = [](int id, void (*fn)()) {
    try {
      fn();
    } catch (const std::exception& e) {
      report(id, false, "exception", e.what());
    }
  };
  guard(1, criterion_larc_rank);
  guard(2, criterion_bracket_oracles);
  guard(3, criterion_bad_bracket);
  guard(4, criterion_weights);
  guard(5, criterion_fixtures);
  guard(6, criterion_obstruction);
  guard(7, criterion_conservation);
  guard(8, criterion_esc_cycle);
  guard(9, criterion_scalar_esc);
  guard(10, criterion_rk4_order);
  std::printf("%d of 10 criteria passed\n", 10 - failures);
  return failures == 0 ? 0 : 1;
}
