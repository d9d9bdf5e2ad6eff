#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "dsoar/chen_fliess.hpp"
#include "dsoar/esc.hpp"
#include "dsoar/lie.hpp"
#include "dsoar/simulation.hpp"

namespace dsoar {

/// Column order of trajectory files.
inline constexpr const char* kTrajectoryHeader = "t,x,y,z,V,gamma,psi,phi,u,J,e,E";

/// printf("%.9g") of one value.
std::string format_number(double v);

void write_trajectory_csv(std::ostream& out, const Trajectory& traj);
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj);

/// Reads a trajectory with at least the columns t,x,y,z,V,gamma,psi in any
/// order; other columns are ignored except phi, u and J. Missing phi, u and
/// J become NaN. Energies are recomputed from z and V with `p`.
/// Throws std::invalid_argument with the file and line on bad input.
Trajectory read_trajectory_csv(std::istream& in, const BirdWindParams& p,
                               const std::string& source = "<csv>");
Trajectory read_trajectory_csv(const std::filesystem::path& path, const BirdWindParams& p);

void write_scalar_esc_csv(const std::filesystem::path& path, const ScalarEscTrace& trace);

/// Writes `j.dump(2)` plus a trailing newline.
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

nlohmann::json to_json(const PhaseSegmentation& seg, const Trajectory& traj);
nlohmann::json to_json(const ComparisonReport& rep);
nlohmann::json to_json(const LarcReport& rep);
nlohmann::json to_json(const BadBracketStatus& st);
nlohmann::json to_json(const NeutralizationStatus& st);
nlohmann::json to_json(const Eigen::VectorXd& v);

}  // namespace dsoar
