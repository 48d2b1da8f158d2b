#include "sdmortar/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "sdmortar/manufactured.hpp"

namespace sdm {

namespace fs = std::filesystem;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string normalize_key(std::string k) {
  std::replace(k.begin(), k.end(), '-', '_');
  return k;
}

int parse_int(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  int out = 0;
  try {
    out = std::stoi(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != v.size()) throw ConfigError(key + ": expected an integer, got '" + v + "'");
  return out;
}

double parse_double(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != v.size()) throw ConfigError(key + ": expected a number, got '" + v + "'");
  return out;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  return out;
}

void check_written(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

std::string sci(double v, int digits) {
  if (!std::isfinite(v)) return "";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*e", digits, v);
  return buf;
}

void write_coords(std::ostream& out, const char* name, const std::vector<double>& c) {
  out << name << "_COORDINATES " << c.size() << " double\n";
  for (std::size_t k = 0; k < c.size(); ++k) out << c[k] << (k + 1 == c.size() ? '\n' : ' ');
}

int count_unknowns(const CoupledProblem& prob, bool stokes) {
  return stokes ? prob.stokes.dofs.num_velocity + prob.stokes.dofs.num_pressure
                : prob.darcy.num_flux + prob.darcy.num_pressure();
}

}  // namespace

const char* const kConvergenceHeader = "level,e_pD,r_pD,e_uD,r_uD,e_pS,r_pS,e_uS,r_uS,e_lambda,r_lambda";

const char* to_string(CaseKind c) {
  switch (c) {
    case CaseKind::case1:
      return "case1";
    case CaseKind::case2:
      return "case2";
    case CaseKind::custom:
      return "custom";
  }
  return "?";
}

const char* to_string(SolverKind s) { return s == SolverKind::dd ? "dd" : "monolithic"; }

const char* to_string(NormSelection n) {
  switch (n) {
    case NormSelection::standard:
      return "standard";
    case NormSelection::midpoint:
      return "midpoint";
    case NormSelection::both:
      return "both";
  }
  return "?";
}

void apply_setting(RunConfig& cfg, const std::string& raw_key, const std::string& raw_value) {
  const std::string key = normalize_key(trim(raw_key));
  const std::string v = trim(raw_value);
  if (key == "case") {
    if (v == "case1")
      cfg.case_kind = CaseKind::case1;
    else if (v == "case2")
      cfg.case_kind = CaseKind::case2;
    else if (v == "custom")
      cfg.case_kind = CaseKind::custom;
    else
      throw ConfigError("case: expected case1, case2 or custom, got '" + v + "'");
  } else if (key == "refinements") {
    cfg.refinements = parse_int(key, v);
  } else if (key == "mortar") {
    if (v == "p0")
      cfg.mortar_degree = 0;
    else if (v == "p1")
      cfg.mortar_degree = 1;
    else
      throw ConfigError("mortar: expected p0 or p1, got '" + v + "'");
  } else if (key == "mortar_elements") {
    cfg.mortar_elements = parse_int(key, v);
  } else if (key == "solver") {
    if (v == "monolithic")
      cfg.solver = SolverKind::monolithic;
    else if (v == "dd")
      cfg.solver = SolverKind::dd;
    else
      throw ConfigError("solver: expected monolithic or dd, got '" + v + "'");
  } else if (key == "norms") {
    if (v == "standard")
      cfg.norms = NormSelection::standard;
    else if (v == "midpoint")
      cfg.norms = NormSelection::midpoint;
    else if (v == "both")
      cfg.norms = NormSelection::both;
    else
      throw ConfigError("norms: expected standard, midpoint or both, got '" + v + "'");
  } else if (key == "cg_tol") {
    cfg.cg_tol = parse_double(key, v);
  } else if (key == "cg_max_iter") {
    cfg.cg_max_iter = parse_int(key, v);
  } else if (key == "output_dir") {
    if (v.empty()) throw ConfigError("output_dir: empty path");
    cfg.output_dir = v;
  } else {
    throw ConfigError("unknown key '" + key + "'");
  }
}

RunConfig read_config_file(const std::string& path, RunConfig cfg) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    try {
      if (eq == std::string::npos) throw ConfigError("expected key = value");
      apply_setting(cfg, line.substr(0, eq), line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(path + ":" + std::to_string(n) + ": " + e.what());
    }
  }
  return cfg;
}

void validate(const RunConfig& cfg) {
  if (cfg.refinements < 0 || cfg.refinements > 7)
    throw ConfigError("refinements: must be in [0, 7], got " + std::to_string(cfg.refinements));
  if (!(cfg.cg_tol > 0.0 && cfg.cg_tol < 1.0)) throw ConfigError("cg_tol: must lie in (0, 1)");
  if (cfg.cg_max_iter < 1) throw ConfigError("cg_max_iter: must be positive");
  if (cfg.mortar_elements < 0) throw ConfigError("mortar_elements: must be non-negative");
  if (cfg.case_kind == CaseKind::custom && cfg.mortar_elements == 0)
    throw ConfigError("mortar_elements: required for case custom");
  if (cfg.case_kind == CaseKind::case2 && cfg.mortar_elements != 0)
    throw ConfigError("mortar_elements: case2 uses fixed per-segment counts");
  if (cfg.output_dir.empty()) throw ConfigError("output_dir: empty path");
}

void write_convergence_csv(const ConvergenceReport& report, const std::string& path, bool full_precision) {
  std::ofstream out = open_output(path);
  out << kConvergenceHeader << '\n';
  std::vector<std::vector<double>> rate_cols;
  for (int c = 0; c < 5; ++c) rate_cols.push_back(report.column_rates(c));
  const int digits = full_precision ? 16 : 2;
  for (std::size_t k = 0; k < report.errors.size(); ++k) {
    out << report.levels[k];
    const auto vals = report.errors[k].values();
    for (int c = 0; c < 5; ++c) {
      out << ',' << sci(vals[c], digits) << ',';
      if (k > 0) out << sci(rate_cols[c][k - 1], digits);
    }
    out << '\n';
  }
  check_written(out, path);
}

FieldFiles write_fields(const CoupledProblem& prob, const CoupledSolution& sol, const std::string& dir,
                        const std::string& stem) {
  FieldFiles files;
  files.darcy = (fs::path(dir) / (stem + "_darcy.vtk")).string();
  files.stokes = (fs::path(dir) / (stem + "_stokes.vtk")).string();
  files.mortar = (fs::path(dir) / (stem + "_mortar.vtk")).string();

  {
    const Rt0Space& sp = *prob.darcy_space;
    const TensorGrid& g = sp.grid();
    const auto edge = darcy_edge_values(prob, sol);
    std::ofstream out = open_output(files.darcy);
    out.precision(10);
    out << "# vtk DataFile Version 3.0\ndarcy\nASCII\nDATASET RECTILINEAR_GRID\n";
    out << "DIMENSIONS " << g.nx() + 1 << ' ' << g.ny() + 1 << " 1\n";
    write_coords(out, "X", g.x_coords());
    write_coords(out, "Y", g.y_coords());
    write_coords(out, "Z", {0.0});
    out << "CELL_DATA " << g.num_cells() << "\nSCALARS pressure double 1\nLOOKUP_TABLE default\n";
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i) {
        const int p = sp.p_dof()[g.cell_id(i, j)];
        out << (p >= 0 ? sol.p_d[p] : 0.0) << '\n';
      }
    out << "VECTORS velocity double\n";
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i) {
        if (!g.active(i, j)) {
          out << "0 0 0\n";
          continue;
        }
        const double u = 0.5 * (edge[sp.edge_index(Axis::x, i, j)] + edge[sp.edge_index(Axis::x, i + 1, j)]);
        const double v = 0.5 * (edge[sp.edge_index(Axis::y, i, j)] + edge[sp.edge_index(Axis::y, i, j + 1)]);
        out << u << ' ' << v << " 0\n";
      }
    check_written(out, files.darcy);
  }

  {
    const StaggeredGeometry& geom = *prob.stokes_geom;
    const TensorGrid& g = geom.primal();
    const MacField f = stokes_field(prob, sol);
    std::ofstream out = open_output(files.stokes);
    out.precision(10);
    out << "# vtk DataFile Version 3.0\nstokes\nASCII\nDATASET RECTILINEAR_GRID\n";
    out << "DIMENSIONS " << g.nx() + 1 << ' ' << g.ny() + 1 << " 1\n";
    write_coords(out, "X", g.x_coords());
    write_coords(out, "Y", g.y_coords());
    write_coords(out, "Z", {0.0});
    out << "CELL_DATA " << g.num_cells() << "\nSCALARS pressure double 1\nLOOKUP_TABLE default\n";
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i) {
        const double p = f.pressure[g.cell_id(i, j)];
        out << (std::isfinite(p) ? p : 0.0) << '\n';
      }
    out << "SCALARS active int 1\nLOOKUP_TABLE default\n";
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i) out << (g.active(i, j) ? 1 : 0) << '\n';
    out << "VECTORS velocity double\n";
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i) {
        if (!g.active(i, j)) {
          out << "0 0 0\n";
          continue;
        }
        const double u = 0.5 * (f.face[0][geom.face_index(Axis::x, i, j)] + f.face[0][geom.face_index(Axis::x, i + 1, j)]);
        const double v = 0.5 * (f.face[1][geom.face_index(Axis::y, i, j)] + f.face[1][geom.face_index(Axis::y, i, j + 1)]);
        out << u << ' ' << v << " 0\n";
      }
    check_written(out, files.stokes);
  }

  {
    const MortarSpace& m = *prob.mortar;
    std::vector<Point> pts;
    std::vector<std::pair<int, int>> lines;
    std::vector<double> values;
    for (int s = 0; s < m.num_segments(); ++s) {
      const auto& seg = prob.iface.segments[s];
      const auto& b = m.breaks(s);
      const int first = static_cast<int>(pts.size());
      for (double t : b) pts.push_back(seg.at(t));
      for (std::size_t k = 0; k + 1 < b.size(); ++k) {
        lines.emplace_back(first + static_cast<int>(k), first + static_cast<int>(k) + 1);
        values.push_back(m.evaluate(sol.lambda, s, 0.5 * (b[k] + b[k + 1])));
      }
    }
    std::ofstream out = open_output(files.mortar);
    out.precision(10);
    out << "# vtk DataFile Version 3.0\nmortar\nASCII\nDATASET POLYDATA\n";
    out << "POINTS " << pts.size() << " double\n";
    for (const Point& p : pts) out << p.x << ' ' << p.y << " 0\n";
    out << "LINES " << lines.size() << ' ' << 3 * lines.size() << '\n';
    for (const auto& [a, b] : lines) out << "2 " << a << ' ' << b << '\n';
    out << "CELL_DATA " << lines.size() << "\nSCALARS lambda double 1\nLOOKUP_TABLE default\n";
    for (double v : values) out << v << '\n';
    check_written(out, files.mortar);
  }
  return files;
}

RunResult run(const RunConfig& cfg, std::ostream* log) {
  validate(cfg);
  std::error_code ec;
  fs::create_directories(cfg.output_dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory '" + cfg.output_dir + "': " + ec.message());

  RunResult result;
  std::vector<NormVariant> variants;
  if (cfg.norms != NormSelection::midpoint) variants.push_back(NormVariant::standard);
  if (cfg.norms != NormSelection::standard) variants.push_back(NormVariant::midpoint);
  const bool has_exact = cfg.case_kind != CaseKind::case2;
  if (has_exact)
    for (NormVariant v : variants) {
      ConvergenceReport r;
      r.variant = v;
      result.reports.push_back(r);
    }
  const ExactSolution exact = case1_exact();

  const int first = has_exact ? 0 : cfg.refinements;
  for (int level = first; level <= cfg.refinements; ++level) {
    const auto t0 = std::chrono::steady_clock::now();
    const ProblemDefinition def = has_exact ? case1_problem(level, cfg.mortar_degree, cfg.mortar_elements)
                                            : case2_problem(level, cfg.mortar_degree);
    const CoupledProblem prob = assemble_problem(def);
    CoupledSolution sol;
    if (cfg.solver == SolverKind::dd) {
      SubdomainSolver sub(prob);
      CgOptions opts;
      opts.tol = cfg.cg_tol;
      opts.max_iter = cfg.cg_max_iter;
      sol = solve_dd(sub, opts);
    } else {
      sol = solve_monolithic(prob);
    }

    LevelRecord rec;
    rec.level = level;
    rec.stokes_unknowns = count_unknowns(prob, true);
    rec.darcy_unknowns = count_unknowns(prob, false);
    rec.mortar_unknowns = prob.mortar->num_dofs();
    rec.method = sol.method;
    rec.iterations = sol.iterations;
    rec.converged = sol.converged;
    rec.residual = sol.residual;
    rec.conservation = conservation_residuals(prob, sol);
    if (has_exact)
      for (auto& r : result.reports) r.add(level, case1_errors(prob, sol, exact, r.variant));
    if (level == cfg.refinements) {
      const FieldFiles f = write_fields(prob, sol, cfg.output_dir, std::string("fields_") + to_string(cfg.case_kind));
      result.files.insert(result.files.end(), {f.darcy, f.stokes, f.mortar});
    }
    rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (log) {
      *log << to_string(cfg.case_kind) << " level " << level << ": " << rec.stokes_unknowns << " Stokes + "
           << rec.darcy_unknowns << " Darcy + " << rec.mortar_unknowns << " mortar unknowns, " << rec.method;
      if (cfg.solver == SolverKind::dd) *log << ", " << rec.iterations << " CG iterations";
      *log << ", " << rec.seconds << " s\n";
    }
    if (!sol.converged) {
      result.levels.push_back(rec);
      throw std::runtime_error("interface CG did not converge at level " + std::to_string(level));
    }
    result.levels.push_back(rec);
  }

  const std::string mortar = cfg.mortar_degree == 0 ? "p0" : "p1";
  for (const auto& r : result.reports) {
    const std::string base = (fs::path(cfg.output_dir) / ("convergence_" + mortar + "_" + to_string(r.variant))).string();
    write_convergence_csv(r, base + ".csv", false);
    write_convergence_csv(r, base + "_full.csv", true);
    result.files.push_back(base + ".csv");
    result.files.push_back(base + "_full.csv");
  }

  const std::string summary = (fs::path(cfg.output_dir) / "summary.txt").string();
  std::ofstream out = open_output(summary);
  out << "case " << to_string(cfg.case_kind) << "\nmortar " << mortar << "\nsolver " << to_string(cfg.solver)
      << "\nnorms " << to_string(cfg.norms) << "\ncg_tol " << sci(cfg.cg_tol, 2) << "\n\n";
  out << "level stokes_unknowns darcy_unknowns mortar_unknowns method iterations converged residual "
         "max_mass_residual max_momentum_residual interface_flux_residual\n";
  for (const auto& r : result.levels) {
    const auto& c = r.conservation;
    out << r.level << ' ' << r.stokes_unknowns << ' ' << r.darcy_unknowns << ' ' << r.mortar_unknowns << ' '
        << r.method << ' ' << r.iterations << ' ' << (r.converged ? "yes" : "no") << ' ' << sci(r.residual, 3) << ' '
        << sci(std::max(c.stokes_mass, c.darcy_mass), 3) << ' '
        << sci(std::max(c.stokes_momentum, c.darcy_momentum), 3) << ' ' << sci(c.interface_flux, 3) << '\n';
  }
  check_written(out, summary);
  result.files.push_back(summary);
  return result;
}

}  // namespace sdm
