#include "dsoar/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "dsoar/integrator.hpp"

namespace dsoar {

void Trajectory::reserve(std::size_t n) {
  times.reserve(n);
  states.reserve(n);
  controls.reserve(n);
  objective.reserve(n);
  specific_energy.reserve(n);
  total_energy.reserve(n);
}

void Trajectory::validate() const {
  const std::size_t n = times.size();
  if (states.size() != n || controls.size() != n || objective.size() != n ||
      specific_energy.size() != n || total_energy.size() != n) {
    throw std::invalid_argument("trajectory: sequences differ in length");
  }
  if (n < 2) throw std::invalid_argument("trajectory: needs at least two samples");
  for (std::size_t i = 1; i < n; ++i) {
    if (!(times[i] > times[i - 1])) {
      throw std::invalid_argument("trajectory: times not strictly increasing");
    }
  }
}

double specific_energy(const FlightState& s, const BirdWindParams& p) {
  return s.z + s.v * s.v / (2.0 * p.g);
}

double total_energy(const FlightState& s, const BirdWindParams& p) {
  return p.mass * p.g * specific_energy(s, p);
}

EnergyRateTerms energy_rate_terms(const FlightState& s, const BirdWindParams& p,
                                  WindCouplingSign sign) {
  const auto forces = lift_drag(s.v, p.cl_fixed, p);
  const double wdot = wind_rate(s.z, s.v, s.gamma, p.wind);
  return {-forces.drag * s.v / (p.mass * p.g),
          to_double(sign) * s.v * wdot * std::cos(s.gamma) * std::sin(s.psi) / p.g};
}

double specific_energy_rate(const FlightState& s, const BirdWindParams& p, WindCouplingSign sign) {
  const StateVector<double> rate = drift_field<double>(s.to_vector(), p, {sign, std::nullopt});
  return s.v * std::sin(s.gamma) + s.v * rate[kV] / p.g;
}

std::string to_string(SimStatus s) {
  switch (s) {
    case SimStatus::kCompleted: return "completed";
    case SimStatus::kSingularity: return "singularity";
    case SimStatus::kNonFinite: return "non-finite state";
  }
  return "unknown";
}

namespace {

void log_sample(Trajectory& traj, double t, const FlightState& s, double u,
                const BirdWindParams& p) {
  traj.times.push_back(t);
  traj.states.push_back(s);
  traj.controls.push_back(u);
  traj.objective.push_back(objective_energy_gain(s, p));
  traj.specific_energy.push_back(specific_energy(s, p));
  traj.total_energy.push_back(total_energy(s, p));
}

}  // namespace

SimulationResult simulate(const FlightState& x0, const BirdWindParams& p, const ControlLaw& law,
                          const SimulationOptions& opt) {
  x0.validate();
  p.validate();
  if (!(opt.h > 0.0)) throw std::invalid_argument("h: must be > 0");
  if (!(opt.t_end > 0.0)) throw std::invalid_argument("t_end: must be > 0");

  const DriftOptions drift_opt{opt.sign, std::nullopt};
  const auto rhs = [&](double t, const StateVector<double>& s) {
    return state_derivative<double>(s, law(t, FlightState::from_vector(s)), p, drift_opt);
  };

  const auto steps = static_cast<std::size_t>(std::llround(opt.t_end / opt.h));
  SimulationResult result;
  result.trajectory.reserve(steps + 1);

  StateVector<double> s = x0.to_vector();
  for (std::size_t k = 0;; ++k) {
    const double t = static_cast<double>(k) * opt.h;
    const FlightState fs = FlightState::from_vector(s);
    log_sample(result.trajectory, t, fs, law(t, fs), p);
    if (k == steps) break;
    try {
      s = rk4_step(rhs, s, t, opt.h);
    } catch (const SingularStateError& err) {
      std::ostringstream msg;
      msg << err.what() << " during step from t=" << t << " (state " << err.state().transpose()
          << ")";
      result.status = SimStatus::kSingularity;
      result.message = msg.str();
      result.abort_time = t;
      return result;
    }
    if (!s.allFinite()) {
      result.status = SimStatus::kNonFinite;
      result.message = "state became non-finite";
      result.abort_time = t + opt.h;
      return result;
    }
  }
  return result;
}

SimulationResult simulate_ds(const FlightState& x0, const BirdWindParams& p, const EscParams& e,
                             const SimulationOptions& opt) {
  e.validate();
  if (opt.h > e.period() / 20.0) {
    std::ostringstream msg;
    msg << "h: step " << opt.h << " does not resolve the dither (must be <= period/20 = "
        << e.period() / 20.0 << ")";
    throw std::invalid_argument(msg.str());
  }
  const ControlLaw law = [&](double t, const FlightState& s) { return esc_control(t, s, e, p); };
  return simulate(x0, p, law, opt);
}

std::string to_string(Phase p) {
  switch (p) {
    case Phase::kWindwardClimb: return "windward_climb";
    case Phase::kHighTurn: return "high_turn";
    case Phase::kLeewardDescent: return "leeward_descent";
    case Phase::kLowTurn: return "low_turn";
  }
  return "unknown";
}

namespace {

struct Extremum {
  std::size_t index;
  bool is_max;
};

// Alternating altitude extrema, each confirmed by a swing of at least
// `prominence` on its far side. The endpoints never count.
std::vector<Extremum> find_extrema(const std::vector<double>& z, double prominence) {
  std::vector<Extremum> out;
  std::size_t imax = 0;
  std::size_t imin = 0;
  int trend = 0;  // +1 rising toward a max, -1 falling toward a min
  for (std::size_t i = 1; i < z.size(); ++i) {
    if (trend == 0) {
      if (z[i] > z[imax]) imax = i;
      if (z[i] < z[imin]) imin = i;
      if (z[imax] - z[imin] >= prominence) {
        trend = imax > imin ? 1 : -1;
        if (trend == 1 && imin > 0) out.push_back({imin, false});
        if (trend == -1 && imax > 0) out.push_back({imax, true});
      }
    } else if (trend == 1) {
      if (z[i] > z[imax]) imax = i;
      if (z[imax] - z[i] >= prominence) {
        out.push_back({imax, true});
        trend = -1;
        imin = i;
      }
    } else {
      if (z[i] < z[imin]) imin = i;
      if (z[i] - z[imin] >= prominence) {
        out.push_back({imin, false});
        trend = 1;
        imax = i;
      }
    }
  }
  return out;
}

bool is_canonical_rotation(const std::vector<PhaseSegment>& segs, std::size_t j) {
  const auto first = static_cast<int>(segs[j].phase);
  for (std::size_t k = 1; k < 4; ++k) {
    if (static_cast<int>(segs[j + k].phase) != (first + static_cast<int>(k)) % 4) return false;
  }
  return true;
}

}  // namespace

PhaseSegmentation detect_phases(const Trajectory& traj, const PhaseOptions& opt) {
  PhaseSegmentation out;
  const std::size_t n = traj.size();
  if (n < 2) return out;

  std::vector<double> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = traj.states[i].z;
  const std::vector<Extremum> ext = find_extrema(z, opt.prominence);

  const auto add = [&](Phase ph, std::size_t first, std::size_t last) {
    if (last <= first) return;
    out.segments.push_back({ph, first, last, traj.times[first], traj.times[last],
                            traj.states[last].psi - traj.states[first].psi});
  };

  if (ext.empty()) {
    add(z.back() >= z.front() ? Phase::kWindwardClimb : Phase::kLeewardDescent, 0, n - 1);
    return out;
  }

  // Turn windows, clipped so neighbouring windows never overlap.
  std::vector<std::pair<std::size_t, std::size_t>> windows;
  for (std::size_t j = 0; j < ext.size(); ++j) {
    const double tc = traj.times[ext[j].index];
    double lo_t = tc - opt.turn_window;
    double hi_t = tc + opt.turn_window;
    if (j > 0) lo_t = std::max(lo_t, 0.5 * (traj.times[ext[j - 1].index] + tc));
    if (j + 1 < ext.size()) hi_t = std::min(hi_t, 0.5 * (tc + traj.times[ext[j + 1].index]));
    const auto lo = static_cast<std::size_t>(
        std::lower_bound(traj.times.begin(), traj.times.end(), lo_t) - traj.times.begin());
    auto hi = static_cast<std::size_t>(
        std::upper_bound(traj.times.begin(), traj.times.end(), hi_t) - traj.times.begin());
    hi = hi == 0 ? 0 : hi - 1;
    windows.emplace_back(std::min(lo, ext[j].index), std::max(hi, ext[j].index));
  }

  const auto leading = ext.front().is_max ? Phase::kWindwardClimb : Phase::kLeewardDescent;
  add(leading, 0, windows.front().first);
  for (std::size_t j = 0; j < ext.size(); ++j) {
    add(ext[j].is_max ? Phase::kHighTurn : Phase::kLowTurn, windows[j].first, windows[j].second);
    const std::size_t gap_end = j + 1 < ext.size() ? windows[j + 1].first : n - 1;
    add(ext[j].is_max ? Phase::kLeewardDescent : Phase::kWindwardClimb, windows[j].second, gap_end);
  }

  for (std::size_t j = 0; j + 3 < out.segments.size(); ++j) {
    if (is_canonical_rotation(out.segments, j)) {
      out.full_cycle = true;
      out.cycle = std::make_pair(out.segments[j].first, out.segments[j + 3].last);
      break;
    }
  }
  return out;
}

double relative_energy_drift(const Trajectory& traj, std::size_t first, std::size_t last) {
  const double e0 = traj.total_energy.at(first);
  return std::abs(traj.total_energy.at(last) - e0) / std::abs(e0);
}

namespace {

double interpolate(const std::vector<double>& ts, const std::vector<double>& vs, double t) {
  const auto it = std::upper_bound(ts.begin(), ts.end(), t);
  if (it == ts.begin()) return vs.front();
  if (it == ts.end()) return vs.back();
  const auto i = static_cast<std::size_t>(it - ts.begin());
  const double w = (t - ts[i - 1]) / (ts[i] - ts[i - 1]);
  return (1.0 - w) * vs[i - 1] + w * vs[i];
}

}  // namespace

ComparisonReport compare_trajectories(const Trajectory& traj, const Trajectory& ref) {
  traj.validate();
  ref.validate();
  ComparisonReport rep;
  rep.overlap_begin = std::max(traj.times.front(), ref.times.front());
  rep.overlap_end = std::min(traj.times.back(), ref.times.back());
  if (!(rep.overlap_end > rep.overlap_begin)) {
    throw std::invalid_argument("compare: empty overlap between trajectory and reference");
  }

  std::array<std::vector<double>, kStateDim> ref_cols;
  std::array<bool, kStateDim> present{};
  for (int c = 0; c < kStateDim; ++c) {
    ref_cols[c].reserve(ref.size());
    present[c] = true;
    for (const FlightState& s : ref.states) {
      const double v = s.to_vector()[c];
      if (std::isnan(v)) present[c] = false;
      ref_cols[c].push_back(v);
    }
  }

  std::array<double, kStateDim> sq{};
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double t = traj.times[i];
    if (t < rep.overlap_begin || t > rep.overlap_end) continue;
    const StateVector<double> s = traj.states[i].to_vector();
    for (int c = 0; c < kStateDim; ++c) {
      if (!present[c]) continue;
      const double d = s[c] - interpolate(ref.times, ref_cols[c], t);
      sq[c] += d * d;
    }
    ++rep.samples;
  }
  if (rep.samples == 0) {
    throw std::invalid_argument("compare: empty overlap (no trajectory samples in common range)");
  }
  for (int c = 0; c < kStateDim; ++c) {
    if (present[c]) rep.rmse[c] = std::sqrt(sq[c] / static_cast<double>(rep.samples));
  }
  rep.trajectory_energy_drift = relative_energy_drift(traj, 0, traj.size() - 1);
  rep.reference_energy_drift = relative_energy_drift(ref, 0, ref.size() - 1);
  return rep;
}

}  // namespace dsoar
