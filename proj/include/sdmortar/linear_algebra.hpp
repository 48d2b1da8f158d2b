#pragma once

#include <Eigen/Sparse>
#include <Eigen/CholmodSupport>
#include <Eigen/UmfPackSupport>

#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace sdm {

using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

class LinearAlgebraError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Collects (row, col, value) contributions; duplicates are summed on build.
class TripletBuilder {
 public:
  TripletBuilder(int rows, int cols) : rows_(rows), cols_(cols) {}
  void add(int r, int c, double v);
  SparseMatrix build() const;
  int rows() const { return rows_; }
  int cols() const { return cols_; }

 private:
  int rows_;
  int cols_;
  std::vector<Triplet> entries_;
};

double max_abs(const SparseMatrix& m);
/// max |A - A^T| / max |A|, zero for an empty matrix.
double symmetry_defect(const SparseMatrix& m);

using LinearOperator = std::function<Vector(const Vector&)>;

struct CgResult {
  Vector x;
  int iterations = 0;
  bool converged = false;
  std::vector<double> residual_history;  ///< ||r_k|| / ||b||, starting at k = 0
};

struct CgOptions {
  double tol = 1e-10;
  int max_iter = 500;
  /// Optional inverse diagonal for Jacobi preconditioning. Empty = plain CG.
  Vector inverse_diagonal;
};

/// Conjugate gradients for a symmetric positive definite operator. Throws on
/// non-finite values or when p^T A p <= 0.
CgResult cg_solve(const LinearOperator& apply, const Vector& b, const CgOptions& opts = {});

/// Direct solver for the symmetric saddle point systems. Symmetric matrices
/// are factorized as LDL^T (CHOLMOD) after shifting the zero-diagonal
/// constraint rows by -regularization * max|diag|, which makes them
/// quasi-definite; iterative refinement against the unshifted matrix removes
/// the shift. Anything else, or a refinement that does not reach `tol`, goes
/// to a sparse LU (UMFPACK).
class SaddleSolver {
 public:
  explicit SaddleSolver(double tol = 1e-10, int max_refinement = 5, double regularization = 1e-10)
      : tol_(tol), max_refinement_(max_refinement), regularization_(regularization) {}
  SaddleSolver(const SaddleSolver&) = delete;
  SaddleSolver& operator=(const SaddleSolver&) = delete;

  void factorize(const SparseMatrix& m);
  Vector solve(const Vector& b);

  bool ready() const { return lu_ != nullptr || ldlt_ != nullptr; }
  bool using_ldlt() const { return ldlt_ != nullptr; }
  int size() const { return static_cast<int>(matrix_.rows()); }
  double last_residual() const { return last_residual_; }
  const SparseMatrix& matrix() const { return matrix_; }

 private:
  void factorize_lu();
  Vector refine(const Vector& b, int max_steps);

  double tol_;
  int max_refinement_;
  double regularization_;
  SparseMatrix matrix_;
  std::unique_ptr<Eigen::UmfPackLU<SparseMatrix>> lu_;
  std::unique_ptr<Eigen::CholmodSimplicialLDLT<SparseMatrix, Eigen::Lower>> ldlt_;
  double last_residual_ = 0.0;
};

/// Block layout of a symmetric multi-field system.
class BlockSystem {
 public:
  /// Registers a field block; returns its index.
  int add_field(std::string name, int size);
  int num_fields() const { return static_cast<int>(sizes_.size()); }
  int offset(int field) const { return offsets_[field]; }
  int size(int field) const { return sizes_[field]; }
  int total() const { return offsets_.empty() ? 0 : offsets_.back() + sizes_.back(); }
  const std::string& name(int field) const { return names_[field]; }

  /// Adds block M at (row field, col field) and, if `mirror`, M^T at the transposed position.
  void add_block(int row_field, int col_field, const SparseMatrix& m, bool mirror = false);
  SparseMatrix assemble() const;

  Vector gather(const std::vector<const Vector*>& parts) const;
  Vector segment(const Vector& x, int field) const { return x.segment(offset(field), size(field)); }

 private:
  std::vector<std::string> names_;
  std::vector<int> sizes_;
  std::vector<int> offsets_;
  std::vector<Triplet> entries_;
};

}  // namespace sdm
