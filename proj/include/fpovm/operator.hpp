#pragma once

// Dense complex operator calculus: Hermitian/PSD validation, Loewner bounds,
// square roots, supports, inverses and projections.

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "fpovm/error.hpp"
#include "fpovm/tolerances.hpp"

namespace fpovm {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline bool all_finite(const ComplexMatrix& a) {
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = 0; i < a.rows(); ++i) {
      if (!std::isfinite(a(i, j).real()) || !std::isfinite(a(i, j).imag())) return false;
    }
  }
  return true;
}

/// Largest singular value; 0 for an empty matrix.
inline double operator_norm(const ComplexMatrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<ComplexMatrix> svd(a);
  return svd.singularValues()(0);
}

inline double hermiticity_residual(const ComplexMatrix& a) {
  return (a - a.adjoint()).norm();
}

/// Multiplies each column by a unit phase so that its first entry with
/// modulus above `threshold` becomes real positive.
inline void fix_column_phases(ComplexMatrix& q, double threshold) {
  for (Index j = 0; j < q.cols(); ++j) {
    for (Index i = 0; i < q.rows(); ++i) {
      const double mag = std::abs(q(i, j));
      if (mag > threshold) {
        q.col(j) *= std::conj(q(i, j)) / mag;
        q(i, j) = Complex(std::abs(q(i, j)), 0.0);
        break;
      }
    }
  }
}

/// Eigenpairs of a Hermitian matrix, eigenvalues in descending order.
struct Eigenpairs {
  RealVector values;
  ComplexMatrix vectors;
};

inline Eigenpairs hermitian_eigen(const ComplexMatrix& a, double phase_threshold = 1e-10) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::numerical_failure, "Hermitian eigensolver did not converge");
  }
  const Index n = a.rows();
  Eigenpairs out{RealVector(n), ComplexMatrix(n, n)};
  for (Index k = 0; k < n; ++k) {
    out.values(k) = solver.eigenvalues()(n - 1 - k);
    out.vectors.col(k) = solver.eigenvectors().col(n - 1 - k);
  }
  fix_column_phases(out.vectors, phase_threshold);
  return out;
}

inline RealVector hermitian_eigenvalues(const ComplexMatrix& a) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::numerical_failure, "Hermitian eigensolver did not converge");
  }
  return solver.eigenvalues();
}

/// Hermitian positive-semidefinite operator on C^dim. Immutable once built.
class PositiveOperator {
 public:
  PositiveOperator() = default;

  /// Validates hermiticity and positivity; throws ErrorKind::validation naming
  /// the failed invariant.
  static PositiveOperator checked(ComplexMatrix m, const Tolerances& tol = {}) {
    require_square(m);
    const double scale_f = std::max(1.0, m.norm());
    if (hermiticity_residual(m) > tol.herm * scale_f) {
      throw Error(ErrorKind::validation, "hermiticity: operator is not Hermitian");
    }
    const RealVector ev = hermitian_eigenvalues(m);
    const double scale_2 = std::max(1.0, std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1))));
    if (ev(0) < -tol.psd * scale_2) {
      throw Error(ErrorKind::validation, "positivity: operator has a negative eigenvalue");
    }
    return PositiveOperator(std::move(m));
  }

  /// For operators that are PSD by construction (outer products, congruences).
  static PositiveOperator trusted(ComplexMatrix m) {
    require_square(m);
    return PositiveOperator(std::move(m));
  }

  static PositiveOperator zero(Index dim) { return PositiveOperator(ComplexMatrix::Zero(dim, dim)); }
  static PositiveOperator identity(Index dim) {
    return PositiveOperator(ComplexMatrix::Identity(dim, dim));
  }

  Index dim() const { return matrix_.rows(); }
  const ComplexMatrix& matrix() const { return matrix_; }

 private:
  explicit PositiveOperator(ComplexMatrix m) : matrix_(std::move(m)) {}

  static void require_square(const ComplexMatrix& m) {
    if (m.rows() < 1 || m.rows() != m.cols()) {
      throw Error(ErrorKind::dimension_mismatch, "operator must be square with dim >= 1");
    }
    if (!all_finite(m)) throw Error(ErrorKind::validation, "finite: operator has non-finite entries");
  }

  ComplexMatrix matrix_;
};

/// Orthogonal projection: Hermitian and idempotent within tolerance.
class Projection {
 public:
  static Projection checked(ComplexMatrix m, const Tolerances& tol = {}) {
    if (m.rows() < 1 || m.rows() != m.cols()) {
      throw Error(ErrorKind::dimension_mismatch, "projection must be square");
    }
    if (hermiticity_residual(m) > tol.herm * std::max(1.0, m.norm())) {
      throw Error(ErrorKind::validation, "hermiticity: projection is not Hermitian");
    }
    if (operator_norm(m * m - m) > tol.proj) {
      throw Error(ErrorKind::validation, "idempotency: projection is not idempotent");
    }
    return Projection(std::move(m));
  }

  Index dim() const { return matrix_.rows(); }
  const ComplexMatrix& matrix() const { return matrix_; }
  PositiveOperator as_positive() const { return PositiveOperator::trusted(matrix_); }

 private:
  explicit Projection(ComplexMatrix m) : matrix_(std::move(m)) {}
  ComplexMatrix matrix_;
};

struct LoewnerBounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// Extreme eigenvalues: lower * 1 <= A <= upper * 1.
inline LoewnerBounds loewner_bounds(const PositiveOperator& a) {
  const RealVector ev = hermitian_eigenvalues(a.matrix());
  return {ev(0), ev(ev.size() - 1)};
}

inline PositiveOperator psd_sqrt(const PositiveOperator& a) {
  const Eigenpairs e = hermitian_eigen(a.matrix());
  RealVector roots = e.values.unaryExpr([](double v) { return std::sqrt(std::max(v, 0.0)); });
  return PositiveOperator::trusted(e.vectors * roots.asDiagonal() * e.vectors.adjoint());
}

/// Number of eigenvalues strictly above tol.rank * lambda_max.
inline Index numerical_rank(const RealVector& descending, const Tolerances& tol) {
  if (descending.size() == 0 || descending(0) <= 0.0) return 0;
  const double cut = tol.rank * descending(0);
  Index r = 0;
  while (r < descending.size() && descending(r) > cut) ++r;
  return r;
}

inline Index numerical_rank(const PositiveOperator& a, const Tolerances& tol = {}) {
  RealVector ev = hermitian_eigenvalues(a.matrix()).reverse();
  return numerical_rank(ev, tol);
}

/// Orthonormal basis of range(A): eigenvectors sorted by descending
/// eigenvalue, phases fixed so the first nonzero entry of each column is
/// real positive. May have zero columns.
inline ComplexMatrix support_basis(const PositiveOperator& a, const Tolerances& tol = {}) {
  const Eigenpairs e = hermitian_eigen(a.matrix(), tol.rank);
  const Index r = numerical_rank(e.values, tol);
  return e.vectors.leftCols(r);
}

inline PositiveOperator invert_positive(const PositiveOperator& a, const Tolerances& tol = {}) {
  const Eigenpairs e = hermitian_eigen(a.matrix());
  const double lmax = e.values(0);
  const double lmin = e.values(e.values.size() - 1);
  if (!(lmax > 0.0) || lmin <= tol.inv * lmax) {
    throw Error(ErrorKind::not_invertible, "operator is singular within tolerance");
  }
  RealVector inv = e.values.cwiseInverse();
  return PositiveOperator::trusted(e.vectors * inv.asDiagonal() * e.vectors.adjoint());
}

/// Orthogonal projection onto the column span of `columns`.
inline Projection projector_from_columns(const ComplexMatrix& columns, const Tolerances& tol = {}) {
  if (columns.rows() < 1 || columns.cols() < 1) {
    throw Error(ErrorKind::degenerate_basis, "empty column set");
  }
  Eigen::JacobiSVD<ComplexMatrix> svd(columns, Eigen::ComputeThinU);
  const RealVector& s = svd.singularValues();
  if (!(s(0) > 0.0) || s(s.size() - 1) <= tol.rank * s(0)) {
    throw Error(ErrorKind::degenerate_basis, "columns are linearly dependent");
  }
  const ComplexMatrix u = svd.matrixU();
  return Projection::checked(u * u.adjoint(), tol);
}

inline bool has_orthonormal_columns(const ComplexMatrix& b, const Tolerances& tol = {}) {
  const ComplexMatrix gram = b.adjoint() * b;
  return operator_norm(gram - ComplexMatrix::Identity(b.cols(), b.cols())) <= tol.proj;
}

/// Modified Gram-Schmidt in column order.
inline ComplexMatrix orthonormalize_columns(const ComplexMatrix& b, const Tolerances& tol = {}) {
  if (b.cols() < 1) throw Error(ErrorKind::degenerate_basis, "empty column set");
  ComplexMatrix q = b;
  double scale = 0.0;
  for (Index j = 0; j < b.cols(); ++j) scale = std::max(scale, b.col(j).norm());
  for (Index j = 0; j < q.cols(); ++j) {
    for (Index i = 0; i < j; ++i) {
      const Complex c = q.col(i).dot(q.col(j));
      q.col(j) -= c * q.col(i);
    }
    const double n = q.col(j).norm();
    if (!(n > tol.rank * scale)) {
      throw Error(ErrorKind::degenerate_basis, "columns are linearly dependent");
    }
    q.col(j) /= n;
  }
  return q;
}

inline bool is_unitary(const ComplexMatrix& u, const Tolerances& tol = {}) {
  if (u.rows() != u.cols() || u.rows() < 1) return false;
  const ComplexMatrix id = ComplexMatrix::Identity(u.rows(), u.cols());
  return operator_norm(u.adjoint() * u - id) <= tol.proj && operator_norm(u * u.adjoint() - id) <= tol.proj;
}

/// Moore-Penrose pseudo-inverse with singular values below
/// tol.rank * sigma_max discarded.
inline ComplexMatrix pseudo_inverse(const ComplexMatrix& a, const Tolerances& tol = {}) {
  if (a.size() == 0) return ComplexMatrix::Zero(a.cols(), a.rows());
  Eigen::JacobiSVD<ComplexMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVector& s = svd.singularValues();
  RealVector inv = RealVector::Zero(s.size());
  for (Index k = 0; k < s.size(); ++k) {
    if (s(k) > tol.rank * s(0)) inv(k) = 1.0 / s(k);
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

}  // namespace fpovm
