#pragma once

#include <iosfwd>
#include <string>

#include "socv/multipliers.hpp"
#include "socv/problem.hpp"
#include "socv/trajectory.hpp"

namespace socv {

/// Header `t,x1..xn,u1..ul,v1..vm`, one row per node, 17 significant digits.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);
void write_trajectory_csv(const std::string& path, const Trajectory& traj);

/// Reads a trajectory for problem p; the grid is recovered from the t column,
/// which must be uniform and start at 0.
Trajectory read_trajectory_csv(std::istream& is, const ProblemDef& p);
Trajectory read_trajectory_csv(const std::string& path, const ProblemDef& p);

/// Same layout as a trajectory with x holding the linearized state.
void write_direction_csv(std::ostream& os, const Grid& grid, const Direction& d);

/// Header `t,xi1..xin,u1..ul,y1..ym`.
void write_goh_direction_csv(std::ostream& os, const Grid& grid, const GohDirection& d);

/// `t,p1..pn` rows; alpha, beta and the normalization flag go to the sidecar.
void write_multiplier_csv(std::ostream& os, const Grid& grid, const Multiplier& m);
std::string multiplier_sidecar_json(const Multiplier& m);
void write_multiplier_files(const std::string& csv_path, const Grid& grid, const Multiplier& m);
Multiplier read_multiplier(std::istream& csv, const std::string& sidecar_json, int n);

}  // namespace socv
