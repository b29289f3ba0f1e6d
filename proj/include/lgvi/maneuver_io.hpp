#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lgvi/solver.hpp"
#include "lgvi/validate.hpp"

namespace lgvi {

/// Optional artifact destinations from a maneuver file's output block.
struct OutputPaths {
  std::optional<std::string> csv;
  std::optional<std::string> svg;
  std::optional<std::string> report;
};

/// Parsed maneuver file: boundary data plus solver and output options.
struct ManeuverFile {
  ManeuverSpec spec;
  SolverOptions solver;
  OutputPaths output;
};

/// Parse the flat key/value maneuver format ('#' comments, one key per
/// line). Required keys: inertia_diag or inertia_matrix, r0_matrix or
/// r0_axis_angle, rN_matrix or rN_axis_angle, omega0, omegaNm1, T, N.
/// Optional: solver_tolerance, solver_max_iterations, solver_derivative_mode,
/// output_csv, output_svg, output_report. Unknown or duplicate keys are
/// rejected with ParseError, as is anything that fails to produce a valid
/// ManeuverSpec.
ManeuverFile load_maneuver_file(const std::string& path);
ManeuverFile parse_maneuver_text(std::istream& in, const std::string& origin);

/// Trajectory CSV: header
///   k,t,R11,R12,R13,R21,R22,R23,R31,R32,R33,wx,wy,wz,tx,ty,tz
/// one row per k = 0..N, 17 significant digits (lossless for doubles).
/// Omega fields are empty at k = N; tau is written as explicit zeros at
/// k = 0 and k = N.
void write_trajectory_csv(std::ostream& out, const DiscreteTrajectory& traj);
DiscreteTrajectory read_trajectory_csv(std::istream& in);

/// Torque input for the simulate command: either a full trajectory CSV (the
/// tau columns are used) or a minimal "k,tx,ty,tz" file. Rows k = 1..N-1
/// must all be present; endpoint rows are ignored (tau_0 = tau_N = 0).
std::vector<Vec3d> read_torques_csv(const std::string& path, int n);

void write_solve_report(std::ostream& out, const ManeuverSpec& spec, const SolverOptions& opts,
                        const ManeuverSolution& solution);

void write_validation_report(std::ostream& out, const ValidationReport& report);

/// Minimal self-contained SVG with two line charts: Omega components vs t
/// and tau components vs t.
void write_trajectory_svg(std::ostream& out, const DiscreteTrajectory& traj);

std::string format_double(double v);  // %.17g

}  // namespace lgvi
