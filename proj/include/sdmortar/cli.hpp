#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "sdmortar/coupled_solver.hpp"
#include "sdmortar/norms.hpp"

namespace sdm {

enum class CaseKind { case1, case2, custom };
enum class SolverKind { monolithic, dd };
enum class NormSelection { standard, midpoint, both };

/// One run of the driver. `custom` is the Case 1 setup with a user-chosen
/// number of mortar elements on the coarsest level.
struct RunConfig {
  CaseKind case_kind = CaseKind::case1;
  int refinements = 2;
  int mortar_degree = 0;
  int mortar_elements = 0;  ///< 0: case default
  SolverKind solver = SolverKind::monolithic;
  NormSelection norms = NormSelection::standard;
  double cg_tol = 1e-10;
  int cg_max_iter = 500;
  std::string output_dir = "results";
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sets one field from its textual form. Keys are the long flag names with
/// '-' or '_' as separator: case, refinements, mortar, mortar_elements,
/// solver, norms, cg_tol, cg_max_iter, output_dir.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);

/// Reads `key = value` lines; '#' starts a comment. Errors carry "path:line:".
RunConfig read_config_file(const std::string& path, RunConfig base = {});

void validate(const RunConfig& cfg);

const char* to_string(CaseKind c);
const char* to_string(SolverKind s);
const char* to_string(NormSelection n);

struct LevelRecord {
  int level = 0;
  int stokes_unknowns = 0;
  int darcy_unknowns = 0;
  int mortar_unknowns = 0;
  std::string method;
  int iterations = 0;
  bool converged = true;
  double residual = 0.0;
  ConservationResiduals conservation;
  double seconds = 0.0;
};

struct RunResult {
  std::vector<ConvergenceReport> reports;  ///< empty for case2
  std::vector<LevelRecord> levels;
  std::vector<std::string> files;
};

/// Solves every level 0..refinements (case1/custom) or the finest level only
/// (case2) and writes the CSV tables, field files and summary.txt into
/// cfg.output_dir. Progress lines go to `log` when given.
RunResult run(const RunConfig& cfg, std::ostream* log = nullptr);

/// Header of the convergence tables.
extern const char* const kConvergenceHeader;

/// Errors in scientific notation with 3 significant digits, or full precision.
void write_convergence_csv(const ConvergenceReport& report, const std::string& path, bool full_precision);

struct FieldFiles {
  std::string darcy;
  std::string stokes;
  std::string mortar;
};

/// Legacy VTK (ASCII): rectilinear grids with cell pressure and cell-centered
/// velocity for both subdomains, and the mortar pressure as polylines.
FieldFiles write_fields(const CoupledProblem& prob, const CoupledSolution& sol, const std::string& dir,
                        const std::string& stem);

}  // namespace sdm
