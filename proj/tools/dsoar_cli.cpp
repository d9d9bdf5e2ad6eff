#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "dsoar/commands.hpp"
#include "dsoar/scenario.hpp"

namespace {

struct Overrides {
  std::string config;
  std::optional<std::string> out;
  std::optional<double> h;
  std::optional<double> t_end;
  std::optional<std::string> sign;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> system;
  std::optional<std::string> reference;
  std::optional<double> x0;
  std::optional<double> omega;
};

dsoar::Scenario resolve(const Overrides& o, const std::string& command) {
  dsoar::Scenario s = o.config.empty() ? dsoar::parse_scenario("") : dsoar::load_scenario(o.config);
  if (o.out) s.output_dir = *o.out;
  if (o.sign) s.wind_sign = dsoar::parse_wind_coupling_sign(*o.sign);
  if (o.seed) s.demo_chenfliess.seed = *o.seed;
  if (o.system) s.larc.system = *o.system;
  if (o.reference) s.reference = *o.reference;
  if (command == "demo-esc") {
    if (o.h) s.demo_esc.h = *o.h;
    if (o.t_end) s.demo_esc.t_end = *o.t_end;
    if (o.x0) s.demo_esc.x0 = *o.x0;
    if (o.omega) s.demo_esc.omega = *o.omega;
  } else if (command == "demo-chenfliess") {
    if (o.h) s.demo_chenfliess.ode_h = *o.h;
    if (o.t_end) s.demo_chenfliess.t_end = *o.t_end;
  } else {
    if (o.h) s.h = *o.h;
    if (o.t_end) s.t_end = *o.t_end;
    if (o.omega) s.esc.omega = *o.omega;
  }
  s.validate();
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamic-soaring ESC simulator and Lie-bracket controllability toolkit"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  app.fallthrough();

  Overrides o;
  app.add_option("--config", o.config, "Scenario file (JSON)");
  app.add_option("--out", o.out, "Output directory");
  app.add_option("--h", o.h, "Integration step [s]");
  app.add_option("--t-end", o.t_end, "End time [s]");
  app.add_option("--sign", o.sign, "Wind-coupling sign in the airspeed equation")
      ->check(CLI::IsMember({"+1", "1", "-1"}));
  app.add_option("--seed", o.seed, "Seed for the randomized control sweep");

  app.add_subcommand("simulate", "Closed-loop dynamic-soaring run");
  auto* ctrl = app.add_subcommand("controllability", "LARC rank, bad bracket and weight search");
  ctrl->add_option("--system", o.system, "dynamic_soaring | ground_robot | example2 | driftless");
  auto* cmp = app.add_subcommand("compare", "Compare a run against a reference trajectory CSV");
  cmp->add_option("--reference", o.reference, "Reference CSV");
  auto* esc = app.add_subcommand("demo-esc", "Scalar extremum-seeking demo");
  esc->add_option("--x0", o.x0, "Initial state");
  esc->add_option("--omega", o.omega, "Dither frequency [rad/s]");
  app.add_subcommand("demo-chenfliess", "Example 2 obstruction demo");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : dsoar::kExitInputError;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    const dsoar::Scenario scn = resolve(o, command);
    dsoar::CommandResult r;
    if (command == "simulate") {
      r = dsoar::cmd_simulate(scn);
    } else if (command == "controllability") {
      r = dsoar::cmd_controllability(scn);
    } else if (command == "compare") {
      r = dsoar::cmd_compare(scn);
    } else if (command == "demo-esc") {
      r = dsoar::cmd_demo_esc(scn);
    } else {
      r = dsoar::cmd_demo_chenfliess(scn);
    }
    std::cout << r.summary << '\n';
    for (const auto& f : r.files) std::cout << "  wrote " << f.string() << '\n';
    return r.exit_code;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return dsoar::kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return dsoar::kExitNumeric;
  }
}
