#include "dsoar/io.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace dsoar {

using nlohmann::json;

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  out << kTrajectoryHeader << '\n';
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const FlightState& s = traj.states[i];
    const double row[] = {traj.times[i], s.x,   s.y,   s.z,  s.v,
                          s.gamma,       s.psi, s.phi, traj.controls[i],
                          traj.objective[i], traj.specific_energy[i], traj.total_energy[i]};
    for (std::size_t c = 0; c < std::size(row); ++c) {
      if (c) out << ',';
      out << format_number(row[c]);
    }
    out << '\n';
  }
}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
  write_trajectory_csv(out, traj);
  if (!out) throw std::runtime_error(path.string() + ": write failed");
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    std::size_t b = 0;
    while (b < cell.size() && cell[b] == ' ') ++b;
    out.push_back(cell.substr(b));
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_cell(const std::string& cell, const std::string& where) {
  if (cell.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(cell, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != cell.size()) throw std::invalid_argument(where + ": not a number '" + cell + "'");
  return v;
}

}  // namespace

Trajectory read_trajectory_csv(std::istream& in, const BirdWindParams& p,
                               const std::string& source) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") != std::string::npos) break;
  }
  if (lineno == 0 || line.find_first_not_of(" \t\r") == std::string::npos) {
    throw std::invalid_argument(source + ": empty file");
  }
  const std::vector<std::string> header = split_csv_line(line);
  std::map<std::string, std::size_t> col;
  for (std::size_t c = 0; c < header.size(); ++c) col.emplace(header[c], c);

  static const char* kRequired[] = {"t", "x", "y", "z", "V", "gamma", "psi"};
  std::array<std::size_t, 7> state_col{};
  for (int i = 0; i < 7; ++i) {
    const auto it = col.find(kRequired[i]);
    if (it == col.end()) {
      throw std::invalid_argument(source + ": missing required column '" + kRequired[i] + "'");
    }
    state_col[static_cast<std::size_t>(i)] = it->second;
  }
  auto optional_col = [&](const char* name) -> std::ptrdiff_t {
    const auto it = col.find(name);
    return it == col.end() ? -1 : static_cast<std::ptrdiff_t>(it->second);
  };
  const std::ptrdiff_t phi_col = optional_col("phi");
  const std::ptrdiff_t u_col = optional_col("u");
  const std::ptrdiff_t j_col = optional_col("J");
  const double nan = std::numeric_limits<double>::quiet_NaN();

  Trajectory traj;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::vector<std::string> cells = split_csv_line(line);
    const std::string where = source + ":" + std::to_string(lineno);
    if (cells.size() != header.size()) {
      throw std::invalid_argument(where + ": expected " + std::to_string(header.size()) +
                                  " columns, got " + std::to_string(cells.size()));
    }
    auto at = [&](std::size_t c) { return parse_cell(cells[c], where); };
    auto at_opt = [&](std::ptrdiff_t c) {
      return c < 0 ? nan : at(static_cast<std::size_t>(c));
    };
    const double t = at(state_col[0]);
    if (!std::isfinite(t)) throw std::invalid_argument(where + ": time is not finite");
    FlightState s{at(state_col[1]), at(state_col[2]), at(state_col[3]), at(state_col[4]),
                  at(state_col[5]), at(state_col[6]), at_opt(phi_col)};
    traj.times.push_back(t);
    traj.states.push_back(s);
    traj.controls.push_back(at_opt(u_col));
    traj.objective.push_back(at_opt(j_col));
    traj.specific_energy.push_back(specific_energy(s, p));
    traj.total_energy.push_back(total_energy(s, p));
  }
  try {
    traj.validate();
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(source + ": " + e.what());
  }
  return traj;
}

Trajectory read_trajectory_csv(const std::filesystem::path& path, const BirdWindParams& p) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument(path.string() + ": cannot open reference file");
  return read_trajectory_csv(in, p, path.string());
}

void write_scalar_esc_csv(const std::filesystem::path& path, const ScalarEscTrace& trace) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
  out << "t,x,J,u\n";
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    out << format_number(trace.times[i]) << ',' << format_number(trace.x[i]) << ','
        << format_number(trace.objective[i]) << ',' << format_number(trace.control[i]) << '\n';
  }
  if (!out) throw std::runtime_error(path.string() + ": write failed");
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error(path.string() + ": write failed");
}

json to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

json to_json(const PhaseSegmentation& seg, const Trajectory& traj) {
  json j;
  j["status"] = seg.status();
  j["full_cycle"] = seg.full_cycle;
  j["segments"] = json::array();
  for (const auto& s : seg.segments) {
    j["segments"].push_back({{"phase", to_string(s.phase)},
                             {"t_begin", s.t_begin},
                             {"t_end", s.t_end},
                             {"first_index", s.first},
                             {"last_index", s.last},
                             {"heading_change", s.heading_change}});
  }
  if (seg.cycle) {
    const auto [a, b] = *seg.cycle;
    j["cycle"] = {{"t_begin", traj.times[a]},
                  {"t_end", traj.times[b]},
                  {"energy_drift", relative_energy_drift(traj, a, b)}};
  } else {
    j["cycle"] = nullptr;
  }
  return j;
}

json to_json(const ComparisonReport& rep) {
  json rmse = json::object();
  for (int c = 0; c < kStateDim; ++c) {
    const auto& v = rep.rmse[static_cast<std::size_t>(c)];
    rmse[ComparisonReport::kStateNames[static_cast<std::size_t>(c)]] =
        v ? json(*v) : json(nullptr);
  }
  return {{"rmse", rmse},
          {"trajectory_energy_drift", rep.trajectory_energy_drift},
          {"reference_energy_drift", rep.reference_energy_drift},
          {"overlap", {{"t_begin", rep.overlap_begin}, {"t_end", rep.overlap_end},
                       {"duration", rep.overlap()}}},
          {"samples", rep.samples}};
}

json to_json(const LarcReport& rep) {
  json cols = json::array();
  for (const auto& c : rep.columns) {
    cols.push_back({{"name", c.name},
                    {"value", to_json(c.value)},
                    {"norm", c.norm},
                    {"dropped", c.dropped},
                    {"scheme_disagreement", c.scheme_disagreement
                                                ? json(*c.scheme_disagreement)
                                                : json(nullptr)}});
  }
  return {{"dimension", rep.dim},
          {"brackets", cols},
          {"singular_values", rep.singular_values},
          {"smallest_ratio", rep.smallest_ratio()},
          {"rank", rep.rank},
          {"full_rank", rep.full_rank},
          {"numeric_breakdown", rep.numeric_breakdown},
          {"notes", rep.notes}};
}

json to_json(const BadBracketStatus& st) {
  return {{"name", st.name},
          {"value", to_json(st.value)},
          {"norm", st.norm},
          {"relative_norm", st.relative_norm},
          {"nonvanishing", st.nonvanishing},
          {"projection_residual", st.projection_residual},
          {"in_span", st.in_span},
          {"good_rank", st.good_rank},
          {"rank_with_bad", st.rank_with_bad},
          {"needed_for_span", st.needed_for_span}};
}

json to_json(const NeutralizationStatus& st) {
  json ineq = json::array();
  for (const auto& q : st.inequalities) {
    ineq.push_back({{"bracket", q.bracket},
                    {"bad_weight", q.bad_weight},
                    {"bracket_weight", q.bracket_weight},
                    {"holds", q.holds}});
  }
  return {{"weights", st.weights},
          {"admissible", st.admissible},
          {"inequalities", ineq},
          {"passed", st.passed}};
}

}  // namespace dsoar
