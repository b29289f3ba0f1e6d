#include "lgvi/maneuver_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace lgvi {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::vector<double> parse_reals(const std::string& key, const std::vector<std::string>& tokens,
                                size_t expected) {
  if (tokens.size() != expected)
    throw ParseError(key + ": expected " + std::to_string(expected) + " values, got " +
                     std::to_string(tokens.size()));
  std::vector<double> vals(expected);
  for (size_t i = 0; i < expected; ++i) {
    size_t pos = 0;
    try {
      vals[i] = std::stod(tokens[i], &pos);
    } catch (const std::exception&) {
      throw ParseError(key + ": '" + tokens[i] + "' is not a number");
    }
    if (pos != tokens[i].size())
      throw ParseError(key + ": '" + tokens[i] + "' is not a number");
    if (!std::isfinite(vals[i])) throw ParseError(key + ": value must be finite");
  }
  return vals;
}

Mat3d matrix_from(const std::vector<double>& v) {
  Mat3d r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = v[3 * i + j];
  return r;
}

Mat3d rotation_from_axis_angle(const std::string& key, const std::vector<double>& v) {
  const Vec3d axis{v[0], v[1], v[2]};
  const double n = norm(axis);
  if (std::abs(n - 1.0) > 1e-3)
    throw ParseError(key + ": axis must be a unit vector (|axis| = " + std::to_string(n) + ")");
  return exp_so3((v[3] / n) * axis);
}

}  // namespace

ManeuverFile parse_maneuver_text(std::istream& in, const std::string& origin) {
  std::map<std::string, std::vector<std::string>> entries;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    std::vector<std::string> tokens;
    std::string tok;
    while (ls >> tok) tokens.push_back(tok);
    if (!entries.emplace(key, std::move(tokens)).second)
      throw ParseError(origin + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
  }

  static const char* known[] = {"inertia_diag",     "inertia_matrix",
                                "r0_matrix",        "r0_axis_angle",
                                "rN_matrix",        "rN_axis_angle",
                                "omega0",           "omegaNm1",
                                "T",                "N",
                                "solver_tolerance", "solver_max_iterations",
                                "solver_derivative_mode", "solver_parallel_jacobian",
                                "output_csv",       "output_svg",
                                "output_report"};
  for (const auto& entry : entries)
    if (std::find(std::begin(known), std::end(known), entry.first) == std::end(known))
      throw ParseError(origin + ": unknown key '" + entry.first + "'");

  auto take = [&](const std::string& key) -> const std::vector<std::string>* {
    auto it = entries.find(key);
    return it == entries.end() ? nullptr : &it->second;
  };
  auto require_one_of = [&](const std::string& a, const std::string& b) {
    const bool ha = entries.count(a), hb = entries.count(b);
    if (ha && hb) throw ParseError(origin + ": keys '" + a + "' and '" + b + "' conflict");
    if (!ha && !hb) throw ParseError(origin + ": one of '" + a + "' or '" + b + "' is required");
  };

  ManeuverFile file;
  try {
    require_one_of("inertia_diag", "inertia_matrix");
    Mat3d ib;
    if (const auto* t = take("inertia_diag")) {
      const auto v = parse_reals("inertia_diag", *t, 3);
      ib(0, 0) = v[0];
      ib(1, 1) = v[1];
      ib(2, 2) = v[2];
    } else {
      ib = matrix_from(parse_reals("inertia_matrix", *take("inertia_matrix"), 9));
    }
    file.spec.inertia = InertiaModel::from_body_inertia(ib);

    auto rotation = [&](const std::string& name) {
      require_one_of(name + "_matrix", name + "_axis_angle");
      if (const auto* t = take(name + "_matrix")) {
        const Mat3d r = matrix_from(parse_reals(name + "_matrix", *t, 9));
        require_rotation(r, 1e-9, (name + "_matrix").c_str());
        return r;
      }
      return rotation_from_axis_angle(name + "_axis_angle",
                                      parse_reals(name + "_axis_angle", *take(name + "_axis_angle"), 4));
    };
    file.spec.R0 = rotation("r0");
    file.spec.RN = rotation("rN");

    auto vec3_of = [&](const std::string& key) {
      const auto* t = take(key);
      if (!t) throw ParseError(origin + ": missing key '" + key + "'");
      const auto v = parse_reals(key, *t, 3);
      return Vec3d{v[0], v[1], v[2]};
    };
    file.spec.omega0 = vec3_of("omega0");
    file.spec.omegaNm1 = vec3_of("omegaNm1");

    const auto* t_entry = take("T");
    if (!t_entry) throw ParseError(origin + ": missing key 'T'");
    file.spec.T = parse_reals("T", *t_entry, 1)[0];

    const auto* n_entry = take("N");
    if (!n_entry) throw ParseError(origin + ": missing key 'N'");
    const double n_val = parse_reals("N", *n_entry, 1)[0];
    if (n_val != std::floor(n_val) || n_val < 3 || n_val > 1e6)
      throw ParseError(origin + ": N must be an integer >= 3");
    file.spec.N = static_cast<int>(n_val);

    if (const auto* t = take("solver_tolerance"))
      file.solver.residual_tolerance = parse_reals("solver_tolerance", *t, 1)[0];
    if (const auto* t = take("solver_max_iterations")) {
      const double v = parse_reals("solver_max_iterations", *t, 1)[0];
      if (v != std::floor(v) || v < 1) throw ParseError(origin + ": solver_max_iterations must be a positive integer");
      file.solver.max_newton_iterations = static_cast<int>(v);
    }
    if (const auto* t = take("solver_derivative_mode")) {
      if (t->size() != 1) throw ParseError(origin + ": solver_derivative_mode expects one token");
      file.solver.derivative_mode = derivative_mode_from_string((*t)[0]);
    }
    if (const auto* t = take("solver_parallel_jacobian")) {
      if (t->size() != 1 || ((*t)[0] != "true" && (*t)[0] != "false"))
        throw ParseError(origin + ": solver_parallel_jacobian expects true or false");
      file.solver.parallel_jacobian = (*t)[0] == "true";
    }

    auto path_of = [&](const std::string& key) -> std::optional<std::string> {
      const auto* t = take(key);
      if (!t) return std::nullopt;
      if (t->size() != 1) throw ParseError(origin + ": " + key + " expects one path");
      return (*t)[0];
    };
    file.output.csv = path_of("output_csv");
    file.output.svg = path_of("output_svg");
    file.output.report = path_of("output_report");

    file.spec.validate();
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError(origin + ": " + e.what());
  }
  return file;
}

ManeuverFile load_maneuver_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  return parse_maneuver_text(in, path);
}

void write_trajectory_csv(std::ostream& out, const DiscreteTrajectory& traj) {
  const int n = traj.steps();
  out << "k,t,R11,R12,R13,R21,R22,R23,R31,R32,R33,wx,wy,wz,tx,ty,tz\n";
  for (int k = 0; k <= n; ++k) {
    out << k << ',' << format_double(k * traj.h);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) out << ',' << format_double(traj.R[k](i, j));
    if (k < n)
      for (int c = 0; c < 3; ++c) out << ',' << format_double(traj.omega[k][c]);
    else
      out << ",,,";
    for (int c = 0; c < 3; ++c) out << ',' << format_double(traj.tau[k][c]);
    out << '\n';
  }
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(field);
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  fields.push_back(field);
  return fields;
}

double field_to_double(const std::string& s, const char* what) {
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(std::string(what) + ": bad numeric field '" + s + "'");
  }
}

}  // namespace

DiscreteTrajectory read_trajectory_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("trajectory csv: empty file");
  if (split_csv_line(line).size() != 17)
    throw ParseError("trajectory csv: unexpected header");

  DiscreteTrajectory traj;
  std::vector<double> times;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 17) throw ParseError("trajectory csv: row with wrong field count");
    times.push_back(field_to_double(fields[1], "t"));
    Mat3d r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r(i, j) = field_to_double(fields[2 + 3 * i + j], "R");
    traj.R.push_back(r);
    if (!fields[11].empty())
      traj.omega.push_back({field_to_double(fields[11], "wx"), field_to_double(fields[12], "wy"),
                            field_to_double(fields[13], "wz")});
    traj.tau.push_back({field_to_double(fields[14], "tx"), field_to_double(fields[15], "ty"),
                        field_to_double(fields[16], "tz")});
  }
  const int n = static_cast<int>(traj.R.size()) - 1;
  if (n < 1 || static_cast<int>(traj.omega.size()) != n)
    throw ParseError("trajectory csv: inconsistent row count");
  traj.h = n >= 1 ? times[1] - times[0] : 0.0;
  return traj;
}

std::vector<Vec3d> read_torques_csv(const std::string& path, int n) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path + ": empty file");
  const auto header = split_csv_line(line);

  int k_col = 0, t_col;
  if (header.size() == 17) {
    t_col = 14;  // trajectory format, tau starts at tx
  } else if (header.size() == 4) {
    t_col = 1;  // minimal k,tx,ty,tz format
  } else {
    throw ParseError(path + ": expected a trajectory csv or a k,tx,ty,tz csv");
  }

  std::vector<Vec3d> interior(n - 1);
  std::vector<bool> seen(n - 1, false);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size())
      throw ParseError(path + ": row with wrong field count");
    const double kd = field_to_double(fields[k_col], "k");
    if (kd != std::floor(kd)) throw ParseError(path + ": k must be an integer");
    const int k = static_cast<int>(kd);
    if (k <= 0 || k >= n) continue;  // endpoints are pinned to zero
    interior[k - 1] = {field_to_double(fields[t_col], "tx"),
                       field_to_double(fields[t_col + 1], "ty"),
                       field_to_double(fields[t_col + 2], "tz")};
    seen[k - 1] = true;
  }
  for (int k = 1; k <= n - 1; ++k)
    if (!seen[k - 1])
      throw ParseError(path + ": missing torque row for k = " + std::to_string(k));
  return interior;
}

void write_solve_report(std::ostream& out, const ManeuverSpec& spec, const SolverOptions& opts,
                        const ManeuverSolution& solution) {
  const SolveReport& r = solution.report;
  int backtracks = 0;
  for (int b : r.backtrack_counts) backtracks += b;
  out << "converged " << (r.converged ? "true" : "false") << '\n';
  out << "status " << to_string(r.status) << '\n';
  out << "iterations " << r.iterations << '\n';
  out << "final_residual " << format_double(r.final_residual) << '\n';
  out << "cost " << format_double(solution.cost) << '\n';
  out << "backtracks " << backtracks << '\n';
  out << "fallback_initialization " << (r.fallback_initialization ? "true" : "false") << '\n';
  out << "derivative_mode " << to_string(opts.derivative_mode) << '\n';
  out << "N " << spec.N << '\n';
  out << "T " << format_double(spec.T) << '\n';
  out << "residual_history";
  for (double v : r.residual_history) out << ' ' << format_double(v);
  out << '\n';
  // Wall time is the one nondeterministic line; it stays last so reports can
  // be compared byte for byte above it.
  out << "wall_time_s " << format_double(r.wall_time_s) << '\n';
}

void write_validation_report(std::ostream& out, const ValidationReport& report) {
  out << "passed " << (report.passed() ? "true" : "false") << '\n';
  for (const auto& [name, value] : report.metrics)
    out << name << ' ' << format_double(value) << '\n';
  for (const auto& note : report.notes) out << "note " << note << '\n';
  for (const auto& failure : report.failures) out << "failure " << failure << '\n';
}

// ---- SVG emission ----

namespace {

struct Panel {
  double x0, y0, width, height;  // plot area in pixels
  double tmin, tmax, vmin, vmax;

  double px(double t) const { return x0 + (t - tmin) / (tmax - tmin) * width; }
  double py(double v) const { return y0 + height - (v - vmin) / (vmax - vmin) * height; }
};

std::string fmt6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

void draw_series(std::ostream& out, const Panel& p, const std::vector<double>& t,
                 const std::vector<Vec3d>& series, const char* title,
                 const char* component_prefix) {
  static const char* colors[3] = {"#d62728", "#2ca02c", "#1f77b4"};
  static const char suffix[3] = {'x', 'y', 'z'};

  out << "<rect x=\"" << p.x0 << "\" y=\"" << p.y0 << "\" width=\"" << p.width << "\" height=\""
      << p.height << "\" fill=\"none\" stroke=\"#444\"/>\n";
  if (p.vmin < 0 && p.vmax > 0)
    out << "<line x1=\"" << p.x0 << "\" y1=\"" << fmt6(p.py(0)) << "\" x2=\"" << p.x0 + p.width
        << "\" y2=\"" << fmt6(p.py(0)) << "\" stroke=\"#bbb\" stroke-dasharray=\"4 3\"/>\n";

  for (int c = 0; c < 3; ++c) {
    out << "<polyline fill=\"none\" stroke=\"" << colors[c] << "\" stroke-width=\"1.5\" points=\"";
    for (size_t i = 0; i < series.size(); ++i) {
      if (i) out << ' ';
      out << fmt6(p.px(t[i])) << ',' << fmt6(p.py(series[i][c]));
    }
    out << "\"/>\n";
    out << "<text x=\"" << p.x0 + p.width + 8 << "\" y=\"" << p.y0 + 16 + 18 * c << "\" fill=\""
        << colors[c] << "\" font-size=\"13\" font-family=\"sans-serif\">" << component_prefix
        << suffix[c] << "</text>\n";
  }

  out << "<text x=\"" << p.x0 << "\" y=\"" << p.y0 - 8
      << "\" font-size=\"14\" font-family=\"sans-serif\">" << title << "</text>\n";
  // axis extremes
  out << "<text x=\"" << p.x0 - 6 << "\" y=\"" << p.py(p.vmax) + 4
      << "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">" << fmt6(p.vmax)
      << "</text>\n";
  out << "<text x=\"" << p.x0 - 6 << "\" y=\"" << p.py(p.vmin) + 4
      << "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">" << fmt6(p.vmin)
      << "</text>\n";
  out << "<text x=\"" << p.x0 << "\" y=\"" << p.y0 + p.height + 16
      << "\" font-size=\"11\" font-family=\"sans-serif\">t = " << fmt6(p.tmin) << "</text>\n";
  out << "<text x=\"" << p.x0 + p.width << "\" y=\"" << p.y0 + p.height + 16
      << "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">t = " << fmt6(p.tmax)
      << "</text>\n";
}

Panel panel_for(std::vector<Vec3d> const& series, const std::vector<double>& t, double y0) {
  double vmin = 0, vmax = 0;
  for (const Vec3d& v : series)
    for (int c = 0; c < 3; ++c) {
      vmin = std::min(vmin, v[c]);
      vmax = std::max(vmax, v[c]);
    }
  const double pad = 0.05 * std::max(vmax - vmin, 1e-12);
  return Panel{70, y0, 520, 220, t.front(), t.back(), vmin - pad, vmax + pad};
}

}  // namespace

void write_trajectory_svg(std::ostream& out, const DiscreteTrajectory& traj) {
  const int n = traj.steps();
  std::vector<double> t_omega(n), t_tau(n + 1);
  for (int k = 0; k < n; ++k) t_omega[k] = k * traj.h;
  for (int k = 0; k <= n; ++k) t_tau[k] = k * traj.h;

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"680\" height=\"620\" "
         "viewBox=\"0 0 680 620\">\n";
  out << "<rect width=\"680\" height=\"620\" fill=\"white\"/>\n";

  const Panel top = panel_for(traj.omega, t_omega, 40);
  draw_series(out, top, t_omega, traj.omega, "body angular velocity [rad/s]", "&#969;");

  const Panel bottom = panel_for(traj.tau, t_tau, 340);
  draw_series(out, bottom, t_tau, traj.tau, "control torque [N m]", "&#964;");

  out << "</svg>\n";
}

}  // namespace lgvi
