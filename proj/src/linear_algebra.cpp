#include "sdmortar/linear_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sdm {

void TripletBuilder::add(int r, int c, double v) {
  if (v == 0.0) return;
  if (r < 0 || c < 0 || r >= rows_ || c >= cols_) {
    std::ostringstream os;
    os << "entry (" << r << ", " << c << ") outside a " << rows_ << "x" << cols_ << " matrix";
    throw LinearAlgebraError(os.str());
  }
  if (!std::isfinite(v)) throw LinearAlgebraError("non-finite matrix entry");
  entries_.emplace_back(r, c, v);
}

SparseMatrix TripletBuilder::build() const {
  SparseMatrix m(rows_, cols_);
  m.setFromTriplets(entries_.begin(), entries_.end());
  m.makeCompressed();
  return m;
}

double max_abs(const SparseMatrix& m) {
  double a = 0.0;
  for (int k = 0; k < m.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) a = std::max(a, std::abs(it.value()));
  return a;
}

double symmetry_defect(const SparseMatrix& m) {
  if (m.rows() != m.cols()) throw LinearAlgebraError("symmetry check needs a square matrix");
  const double scale = max_abs(m);
  if (scale == 0.0) return 0.0;
  SparseMatrix d = SparseMatrix(m.transpose()) - m;
  return max_abs(d) / scale;
}

CgResult cg_solve(const LinearOperator& apply, const Vector& b, const CgOptions& opts) {
  CgResult res;
  const Eigen::Index n = b.size();
  res.x = Vector::Zero(n);
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    res.converged = true;
    res.residual_history.push_back(0.0);
    return res;
  }
  const bool precond = opts.inverse_diagonal.size() == n;
  Vector r = b;
  Vector z = precond ? Vector(opts.inverse_diagonal.cwiseProduct(r)) : r;
  Vector p = z;
  double rz = r.dot(z);
  res.residual_history.push_back(1.0);
  for (int k = 1; k <= opts.max_iter; ++k) {
    const Vector ap = apply(p);
    const double pap = p.dot(ap);
    if (!std::isfinite(pap)) {
      std::ostringstream os;
      os << "non-finite value in conjugate gradients at iteration " << k;
      throw LinearAlgebraError(os.str());
    }
    if (pap <= 0.0) throw LinearAlgebraError("operator not SPD: p^T A p <= 0 in conjugate gradients");
    const double step = rz / pap;
    res.x += step * p;
    r -= step * ap;
    const double rel = r.norm() / bnorm;
    res.residual_history.push_back(rel);
    res.iterations = k;
    if (!std::isfinite(rel)) {
      std::ostringstream os;
      os << "non-finite residual in conjugate gradients at iteration " << k;
      throw LinearAlgebraError(os.str());
    }
    if (rel <= opts.tol) {
      res.converged = true;
      break;
    }
    z = precond ? Vector(opts.inverse_diagonal.cwiseProduct(r)) : r;
    const double rz_new = r.dot(z);
    p = z + (rz_new / rz) * p;
    rz = rz_new;
  }
  return res;
}

void SaddleSolver::factorize(const SparseMatrix& m) {
  if (m.rows() != m.cols()) throw LinearAlgebraError("saddle solver needs a square matrix");
  matrix_ = m;
  matrix_.makeCompressed();
  lu_.reset();
  ldlt_.reset();
  if (symmetry_defect(matrix_) <= 1e-14 * std::max(1.0, max_abs(matrix_))) {
    // constraint rows (zero diagonal) get a small negative shift so the matrix is quasi-definite
    const double eps = regularization_ * std::max(1.0, matrix_.diagonal().cwiseAbs().maxCoeff());
    std::vector<Triplet> shift;
    for (int k = 0; k < matrix_.rows(); ++k)
      if (matrix_.coeff(k, k) == 0.0) shift.emplace_back(k, k, -eps);
    SparseMatrix d(matrix_.rows(), matrix_.cols());
    d.setFromTriplets(shift.begin(), shift.end());
    auto ldlt = std::make_unique<Eigen::CholmodSimplicialLDLT<SparseMatrix, Eigen::Lower>>();
    ldlt->compute(SparseMatrix(matrix_ + d));
    if (ldlt->info() == Eigen::Success) {
      ldlt_ = std::move(ldlt);
      return;
    }
  }
  factorize_lu();
}

void SaddleSolver::factorize_lu() {
  ldlt_.reset();
  lu_ = std::make_unique<Eigen::UmfPackLU<SparseMatrix>>();
  lu_->compute(matrix_);
  if (lu_->info() != Eigen::Success) {
    const int status =
        lu_->info() == Eigen::NumericalIssue ? lu_->umfpackFactorizeReturncode() : UMFPACK_ERROR_invalid_matrix;
    lu_.reset();
    std::ostringstream os;
    os << "sparse factorization failed (UMFPACK status " << status << ")";
    if (status == UMFPACK_WARNING_singular_matrix) os << ": matrix is singular or numerically rank deficient";
    if (status == UMFPACK_ERROR_out_of_memory) os << ": out of memory";
    throw LinearAlgebraError(os.str());
  }
}

Vector SaddleSolver::refine(const Vector& b, int max_steps) {
  auto apply_inverse = [&](const Vector& r) -> Vector {
    if (ldlt_) return ldlt_->solve(r);
    Vector x = lu_->solve(r);
    if (lu_->info() != Eigen::Success) throw LinearAlgebraError("sparse triangular solve failed");
    return x;
  };
  const double bnorm = b.norm();
  Vector x = apply_inverse(b);
  if (bnorm == 0.0) {
    last_residual_ = 0.0;
    return x;
  }
  Vector r = b - matrix_ * x;
  last_residual_ = r.norm() / bnorm;
  for (int k = 0; k < max_steps && last_residual_ > tol_ && std::isfinite(last_residual_); ++k) {
    x += apply_inverse(r);
    r = b - matrix_ * x;
    last_residual_ = r.norm() / bnorm;
  }
  return x;
}

Vector SaddleSolver::solve(const Vector& b) {
  if (!ready()) throw LinearAlgebraError("saddle solver used before factorization");
  if (b.size() != matrix_.rows()) throw LinearAlgebraError("right-hand side size mismatch");
  Vector x = refine(b, ldlt_ ? 4 * max_refinement_ : max_refinement_);
  if (ldlt_ && !(last_residual_ <= tol_)) {
    // the shifted factorization is not a good enough preconditioner (or the matrix is singular)
    factorize_lu();
    x = refine(b, max_refinement_);
  }
  if (!std::isfinite(last_residual_)) throw LinearAlgebraError("saddle solve produced non-finite values (singular system?)");
  if (last_residual_ > tol_) {
    std::ostringstream os;
    os << "saddle solve stagnated at relative residual " << last_residual_;
    throw LinearAlgebraError(os.str());
  }
  return x;
}

int BlockSystem::add_field(std::string name, int size) {
  offsets_.push_back(total());
  sizes_.push_back(size);
  names_.push_back(std::move(name));
  return num_fields() - 1;
}

void BlockSystem::add_block(int row_field, int col_field, const SparseMatrix& m, bool mirror) {
  if (m.rows() != size(row_field) || m.cols() != size(col_field)) {
    std::ostringstream os;
    os << "block (" << name(row_field) << ", " << name(col_field) << ") has shape " << m.rows() << "x" << m.cols()
       << ", expected " << size(row_field) << "x" << size(col_field);
    throw LinearAlgebraError(os.str());
  }
  const int r0 = offset(row_field);
  const int c0 = offset(col_field);
  for (int k = 0; k < m.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) {
      entries_.emplace_back(r0 + static_cast<int>(it.row()), c0 + static_cast<int>(it.col()), it.value());
      if (mirror) entries_.emplace_back(c0 + static_cast<int>(it.col()), r0 + static_cast<int>(it.row()), it.value());
    }
}

SparseMatrix BlockSystem::assemble() const {
  SparseMatrix m(total(), total());
  m.setFromTriplets(entries_.begin(), entries_.end());
  m.makeCompressed();
  return m;
}

Vector BlockSystem::gather(const std::vector<const Vector*>& parts) const {
  if (static_cast<int>(parts.size()) != num_fields()) throw LinearAlgebraError("gather needs one part per field");
  Vector x = Vector::Zero(total());
  for (int f = 0; f < num_fields(); ++f) {
    if (!parts[f]) continue;
    if (parts[f]->size() != size(f)) throw LinearAlgebraError("gather: part size mismatch for " + name(f));
    x.segment(offset(f), size(f)) = *parts[f];
  }
  return x;
}

}  // namespace sdm
