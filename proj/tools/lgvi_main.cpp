#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "lgvi/maneuver_io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitSimulation = 3;
constexpr int kExitNoConvergence = 4;
constexpr int kExitValidation = 5;

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw lgvi::ParseError(path + ": cannot open for writing");
  return out;
}

// CLI flag wins over the maneuver file's output block.
std::optional<std::string> pick_path(const std::string& flag,
                                     const std::optional<std::string>& from_file) {
  if (!flag.empty()) return flag;
  return from_file;
}

int run_simulate(const std::string& maneuver_path, const std::string& torques_path,
                 const std::string& out_flag) {
  const lgvi::ManeuverFile file = lgvi::load_maneuver_file(maneuver_path);
  const auto torques = lgvi::read_torques_csv(torques_path, file.spec.N);

  const auto out_path = pick_path(out_flag, file.output.csv);
  if (!out_path)
    throw lgvi::ParseError("simulate: no output path (use --out or output_csv in the file)");

  lgvi::DiscreteTrajectory traj;
  try {
    traj = lgvi::simulate(file.spec.inertia, file.spec.R0, file.spec.omega0, torques,
                          file.spec.h());
  } catch (const lgvi::ImplicitStepFailure& e) {
    std::cerr << "error: " << e.what() << " (last residual " << e.last_residual << ")\n";
    return kExitSimulation;
  }

  auto out = open_output(*out_path);
  lgvi::write_trajectory_csv(out, traj);
  return kExitOk;
}

int run_solve(const std::string& maneuver_path, const std::string& out_flag,
              const std::string& svg_flag, const std::string& report_flag) {
  const lgvi::ManeuverFile file = lgvi::load_maneuver_file(maneuver_path);
  const lgvi::ManeuverSolution solution = lgvi::solve_maneuver(file.spec, file.solver);

  if (const auto path = pick_path(out_flag, file.output.csv)) {
    auto out = open_output(*path);
    lgvi::write_trajectory_csv(out, solution.trajectory);
  }
  if (const auto path = pick_path(report_flag, file.output.report)) {
    auto out = open_output(*path);
    lgvi::write_solve_report(out, file.spec, file.solver, solution);
  }
  if (const auto path = pick_path(svg_flag, file.output.svg)) {
    auto out = open_output(*path);
    lgvi::write_trajectory_svg(out, solution.trajectory);
  }

  if (!solution.report.converged) {
    std::cerr << "error: solver did not converge (" << to_string(solution.report.status)
              << ", residual " << solution.report.final_residual
              << "); artifacts hold the best iterate\n";
    return kExitNoConvergence;
  }
  std::cout << "converged in " << solution.report.iterations << " iterations, residual "
            << solution.report.final_residual << ", cost " << solution.cost << "\n";
  return kExitOk;
}

int run_validate(const std::string& maneuver_path, const std::string& checks,
                 const std::string& report_flag) {
  const lgvi::ManeuverFile file = lgvi::load_maneuver_file(maneuver_path);
  const lgvi::ValidationSelection sel = lgvi::selection_from_list(checks);
  const lgvi::ValidationReport report = lgvi::run_validation(file.spec, sel, file.solver);

  lgvi::write_validation_report(std::cout, report);
  if (const auto path = pick_path(report_flag, file.output.report)) {
    auto out = open_output(*path);
    lgvi::write_validation_report(out, report);
  }
  return report.passed() ? kExitOk : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimum-torque rigid-body attitude maneuvers via a Lie group variational "
               "integrator"};
  app.require_subcommand(1);

  std::string maneuver_path, torques_path, out_path, svg_path, report_path;
  std::string checks = "all";

  auto* sim = app.add_subcommand("simulate", "Integrate the discrete dynamics forward");
  sim->add_option("maneuver", maneuver_path, "maneuver file")->required();
  sim->add_option("--torques", torques_path, "torque csv (trajectory or k,tx,ty,tz format)")
      ->required();
  sim->add_option("--out", out_path, "output trajectory csv");

  auto* solve = app.add_subcommand("solve", "Solve the minimum-torque maneuver");
  solve->add_option("maneuver", maneuver_path, "maneuver file")->required();
  solve->add_option("--out", out_path, "output trajectory csv");
  solve->add_option("--svg", svg_path, "write omega/tau line charts");
  solve->add_option("--report", report_path, "write a structured run report");

  auto* validate = app.add_subcommand("validate", "Run verification checks");
  validate->add_option("maneuver", maneuver_path, "maneuver file")->required();
  validate->add_option("--checks", checks,
                       "comma list of equivariance,refinement,oracle,continuous,multipliers");
  validate->add_option("--report", report_path, "write the validation report to a file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitInput;
  }

  try {
    if (sim->parsed()) return run_simulate(maneuver_path, torques_path, out_path);
    if (solve->parsed()) return run_solve(maneuver_path, out_path, svg_path, report_path);
    return run_validate(maneuver_path, checks, report_path);
  } catch (const lgvi::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const lgvi::ImplicitStepFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSimulation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
}
