#include "dsoar/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "dsoar/chen_fliess.hpp"
#include "dsoar/io.hpp"
#include "dsoar/lie.hpp"
#include "dsoar/systems.hpp"

namespace dsoar {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path prepare_output_dir(const Scenario& scn) {
  const fs::path dir(scn.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::invalid_argument("output_dir: cannot create '" + scn.output_dir + "': " + ec.message());
  return dir;
}

json report_header(const char* command, const Scenario& scn) {
  return {{"command", command},
          {"scenario", to_json(scn)},
          {"wind_sign", static_cast<int>(scn.wind_sign)}};
}

json files_json(const std::vector<fs::path>& files) {
  json out = json::array();
  for (const auto& f : files) out.push_back(f.string());
  return out;
}

SimulationResult run_ds(const Scenario& scn) {
  return simulate_ds(scn.initial_state, scn.bird, scn.esc,
                     SimulationOptions{scn.t_end, scn.h, scn.wind_sign});
}

std::string fmt(double v) {
  std::ostringstream s;
  s << v;
  return s.str();
}

}  // namespace

CommandResult cmd_simulate(const Scenario& scn) {
  scn.validate();
  const fs::path dir = prepare_output_dir(scn);
  const SimulationResult run = run_ds(scn);
  const Trajectory& traj = run.trajectory;

  CommandResult out;
  out.files.push_back(dir / "trajectory.csv");
  write_trajectory_csv(out.files.back(), traj);

  json rep = report_header("simulate", scn);
  rep["status"] = to_string(run.status);
  rep["message"] = run.message;
  rep["abort_time"] = run.abort_time ? json(*run.abort_time) : json(nullptr);
  rep["samples"] = traj.size();
  rep["esc"] = to_json(scn)["esc"];
  rep["sign_convention"] =
      "Vdot contains wind_sign * Wdot cos(gamma) sin(psi); wind_sign = " +
      std::to_string(static_cast<int>(scn.wind_sign));

  bool full_cycle = false;
  if (traj.size() >= 2) {
    const PhaseSegmentation seg = detect_phases(traj, scn.phases);
    full_cycle = seg.full_cycle;
    rep["phases"] = to_json(seg, traj);
    rep["cycle_energy_drift"] = seg.cycle ? json(relative_energy_drift(traj, seg.cycle->first,
                                                                       seg.cycle->second))
                                          : json(nullptr);
    rep["run_energy_drift"] = relative_energy_drift(traj, 0, traj.size() - 1);
    rep["specific_energy"] = {{"initial", traj.specific_energy.front()},
                              {"final", traj.specific_energy.back()}};
  } else {
    rep["phases"] = {{"status", "incomplete cycle"}, {"full_cycle", false}, {"segments", json::array()}};
    rep["cycle_energy_drift"] = nullptr;
    rep["run_energy_drift"] = nullptr;
  }
  rep["full_cycle"] = full_cycle;

  out.files.push_back(dir / "simulate_report.json");
  rep["files"] = files_json(out.files);
  write_json(out.files.back(), rep);

  out.exit_code = run.completed() ? kExitOk : kExitNumeric;
  out.summary = "simulate: " + to_string(run.status) + ", " + std::to_string(traj.size()) +
                " samples, " + (full_cycle ? "complete cycle" : "incomplete cycle");
  if (!run.completed()) out.summary += " (" + run.message + ")";
  out.report = std::move(rep);
  return out;
}

ObstructionSweep example2_obstruction_sweep(const DemoChenFliessSettings& cfg) {
  ObstructionSweep sw;
  sw.trials = cfg.trials;
  constexpr int kSamples = 10;
  for (int j = 1; j <= kSamples; ++j) sw.sample_times.push_back(cfg.t_end * j / kSamples);

  std::mt19937_64 rng(cfg.seed);
  sw.min_output = std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < cfg.trials; ++trial) {
    const InputSignal u = random_piecewise_constant(rng, cfg.t_end, cfg.pieces, cfg.bound);
    for (double t : sw.sample_times) {
      const double y = example2_exact_output(0.0, 0.0, u, t);
      const Eigen::Vector2d ode = example2_ode(0.0, 0.0, u, t, cfg.ode_h);
      sw.min_output = std::min(sw.min_output, y);
      sw.max_ode_discrepancy = std::max(sw.max_ode_discrepancy, std::abs(y - ode[1]));
      sw.endpoints.push_back({static_cast<double>(trial), t, ode[0], ode[1]});
    }
  }

  const ControlAffineSystem sys = example2_system();
  const ScalarField h_out = make_scalar_field("y", [](const auto& x) { return x[1]; });
  const double starts[][2] = {{0.0, 0.0}, {0.2, 0.1}, {-0.3, 0.0}};
  for (const auto& st : starts) {
    for (double c : {-cfg.bound, 0.0, cfg.bound}) {
      const InputSignal u = InputSignal::constant(c);
      const double series =
          fliess_output(h_out, sys, Eigen::Vector2d(st[0], st[1]), {u}, cfg.t_end, 2);
      const double exact = example2_exact_output(st[0], st[1], u, cfg.t_end);
      sw.max_fliess_discrepancy = std::max(sw.max_fliess_discrepancy, std::abs(series - exact));
    }
  }
  return sw;
}

namespace {

json sweep_json(const ObstructionSweep& sw, const DemoChenFliessSettings& cfg) {
  return {{"trials", sw.trials},
          {"pieces", cfg.pieces},
          {"bound", cfg.bound},
          {"seed", cfg.seed},
          {"t_end", cfg.t_end},
          {"sample_times", sw.sample_times},
          {"min_output", sw.min_output},
          {"nonnegative", sw.min_output >= -1e-9},
          {"max_ode_discrepancy", sw.max_ode_discrepancy},
          {"max_fliess_order2_discrepancy", sw.max_fliess_discrepancy}};
}

}  // namespace

CommandResult cmd_controllability(const Scenario& scn) {
  scn.validate();
  const fs::path dir = prepare_output_dir(scn);
  NamedFixture fx = make_fixture(scn.larc.system, scn.bird, DriftOptions{scn.wind_sign, std::nullopt},
                                 scn.initial_state);
  const int m = fx.fields.num_controls();

  LarcOptions lopt;
  lopt.rank_tol = scn.larc.rank_tol;

  struct Labeled {
    std::string label;
    std::vector<FormalBracket> brackets;
  };
  std::vector<Labeled> sets;
  if (!scn.larc.brackets.empty()) {
    Labeled l{"configured", {}};
    for (const auto& b : scn.larc.brackets) l.brackets.push_back(FormalBracket::parse(b, m));
    sets.push_back(std::move(l));
  } else if (fx.system == "dynamic_soaring") {
    sets.push_back({"with_fb", ds_distribution(true)});
    sets.push_back({"printed", ds_distribution(false)});
    fx.notes.push_back(
        "the printed span lists six vectors in R^7 and cannot reach rank 7 alone; the set with "
        "[f,b] (weighted in the neutralization argument) is the primary one");
  } else {
    sets.push_back({"fixture", fx.distribution});
  }

  json rep = report_header("controllability", scn);
  rep["system"] = fx.system;
  rep["x0"] = to_json(fx.x0);
  rep["notes"] = fx.notes;
  rep["primary_distribution"] = sets.front().label;

  bool breakdown = false;
  LarcReport primary;
  json dists = json::array();
  for (std::size_t i = 0; i < sets.size(); ++i) {
    LarcReport r = larc_rank(sets[i].brackets, fx.fields, fx.x0, lopt);
    breakdown = breakdown || r.numeric_breakdown;
    json d = to_json(r);
    d["label"] = sets[i].label;
    dists.push_back(std::move(d));
    if (i == 0) primary = std::move(r);
  }
  rep["distributions"] = dists;
  rep["rank"] = primary.rank;
  rep["dimension"] = primary.dim;
  rep["full_rank"] = primary.full_rank;
  rep["numeric_breakdown"] = breakdown;

  if (fx.bad) {
    BadBracketOptions bopt;
    bopt.larc = lopt;
    rep["bad_bracket"] = to_json(bad_bracket_check(*fx.bad, sets.front().brackets, fx.fields,
                                                   fx.x0, bopt));
  } else {
    rep["bad_bracket"] = nullptr;
  }

  bool weight_ok = true;
  if (fx.system == "dynamic_soaring") {
    const auto found = find_admissible_weight(scn.larc.max_w0, scn.larc.max_w);
    weight_ok = found.has_value();
    json w = {{"bounds", {{"max_w0", scn.larc.max_w0}, {"max_w", scn.larc.max_w}}}};
    if (found) {
      w["found"] = {found->first, found->second};
      w["status"] = to_json(weight_neutralization(found->first, found->second));
    } else {
      w["found"] = nullptr;
      w["status"] = "not found";
    }
    rep["weight"] = w;
  } else {
    rep["weight"] = nullptr;
  }

  if (fx.system == "example2") {
    const ObstructionSweep sw = example2_obstruction_sweep(scn.demo_chenfliess);
    rep["obstruction"] = sweep_json(sw, scn.demo_chenfliess);
  } else {
    rep["obstruction"] = nullptr;
  }

  CommandResult out;
  out.files.push_back(dir / "controllability_report.json");
  rep["files"] = files_json(out.files);
  write_json(out.files.back(), rep);

  if (breakdown) {
    out.exit_code = kExitNumeric;
  } else {
    out.exit_code = primary.full_rank && weight_ok ? kExitOk : kExitNumeric;
  }
  out.summary = "controllability: " + fx.system + " rank " + std::to_string(primary.rank) + "/" +
                std::to_string(primary.dim);
  if (rep["weight"].is_object() && rep["weight"]["found"].is_array()) {
    out.summary += ", weight (" + rep["weight"]["found"][0].dump() + "," +
                   rep["weight"]["found"][1].dump() + ")";
  }
  if (breakdown) {
    out.summary += ", NUMERIC BREAKDOWN:";
    for (const auto& d : rep["distributions"]) {
      for (const auto& n : d["notes"]) out.summary += " " + n.get<std::string>() + ";";
    }
  }
  out.report = std::move(rep);
  return out;
}

CommandResult cmd_compare(const Scenario& scn) {
  scn.validate();
  if (!scn.reference) throw std::invalid_argument("reference: no reference trajectory given");
  const Trajectory ref = read_trajectory_csv(fs::path(*scn.reference), scn.bird);
  const fs::path dir = prepare_output_dir(scn);

  const SimulationResult run = run_ds(scn);
  CommandResult out;
  out.files.push_back(dir / "trajectory.csv");
  write_trajectory_csv(out.files.back(), run.trajectory);
  const Trajectory traj = read_trajectory_csv(out.files.back(), scn.bird);

  const ComparisonReport cmp = compare_trajectories(traj, ref);
  json rep = report_header("compare", scn);
  rep["reference"] = *scn.reference;
  rep["simulation_status"] = to_string(run.status);
  rep["comparison"] = to_json(cmp);
  out.files.push_back(dir / "compare_report.json");
  rep["files"] = files_json(out.files);
  write_json(out.files.back(), rep);

  out.exit_code = kExitOk;
  out.summary = "compare: " + std::to_string(cmp.samples) + " samples over [" +
                fmt(cmp.overlap_begin) + ", " + fmt(cmp.overlap_end) + "] s";
  out.report = std::move(rep);
  return out;
}

CommandResult cmd_demo_esc(const Scenario& scn) {
  scn.validate();
  const fs::path dir = prepare_output_dir(scn);
  const DemoEscSettings& d = scn.demo_esc;
  const ScalarEscTrace trace = scalar_esc_demo(d.x0, d.x_star, d.omega, d.t_end, d.h);

  CommandResult out;
  out.files.push_back(dir / "demo_esc.csv");
  write_scalar_esc_csv(out.files.back(), trace);

  const double window = std::min(1.0, d.t_end);
  json rep = report_header("demo-esc", scn);
  rep["final_error"] = trace.final_error();
  rep["max_error_last_window"] = trace.max_error_over_last(window);
  rep["window"] = window;
  rep["x_final"] = trace.x.back();
  out.files.push_back(dir / "demo_esc_report.json");
  rep["files"] = files_json(out.files);
  write_json(out.files.back(), rep);

  out.summary = "demo-esc: final |x - x*| = " + fmt(trace.final_error()) +
                ", max over last " + fmt(window) + " s = " + fmt(trace.max_error_over_last(window));
  out.report = std::move(rep);
  return out;
}

CommandResult cmd_demo_chenfliess(const Scenario& scn) {
  scn.validate();
  const fs::path dir = prepare_output_dir(scn);
  const ObstructionSweep sw = example2_obstruction_sweep(scn.demo_chenfliess);

  CommandResult out;
  out.files.push_back(dir / "demo_chenfliess.csv");
  {
    std::ofstream csv(out.files.back(), std::ios::binary);
    if (!csv) throw std::runtime_error(out.files.back().string() + ": cannot open for writing");
    csv << "trial,t,x,y\n";
    for (const auto& e : sw.endpoints) {
      csv << static_cast<long>(e[0]) << ',' << format_number(e[1]) << ',' << format_number(e[2])
          << ',' << format_number(e[3]) << '\n';
    }
  }

  json rep = report_header("demo-chenfliess", scn);
  rep["obstruction"] = sweep_json(sw, scn.demo_chenfliess);
  out.files.push_back(dir / "demo_chenfliess_report.json");
  rep["files"] = files_json(out.files);
  write_json(out.files.back(), rep);

  const bool ok = sw.min_output >= -1e-9 && sw.max_ode_discrepancy <= 1e-6;
  out.exit_code = ok ? kExitOk : kExitNumeric;
  out.summary = "demo-chenfliess: min y = " + fmt(sw.min_output) + " over " +
                std::to_string(sw.trials) + " controls, max |exact - ode| = " +
                fmt(sw.max_ode_discrepancy);
  out.report = std::move(rep);
  return out;
}

}  // namespace dsoar
