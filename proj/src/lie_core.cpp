#include "toda/lie_core.hpp"

#include <cmath>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "toda/error.hpp"

namespace toda {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid_argument";
    case ErrorCode::ShapeMismatch: return "shape_mismatch";
    case ErrorCode::InvalidStructureMatrix: return "invalid_structure_matrix";
    case ErrorCode::SingularMatrix: return "singular_matrix";
    case ErrorCode::InvalidSpec: return "invalid_spec";
    case ErrorCode::ForbiddenBlock: return "forbidden_block";
    case ErrorCode::ConstraintViolation: return "constraint_violation";
    case ErrorCode::IncompatibleBlocks: return "incompatible_blocks";
    case ErrorCode::ResourceLimit: return "resource_limit";
    case ErrorCode::BlowUp: return "blow_up";
    case ErrorCode::CornerMismatch: return "corner_mismatch";
    case ErrorCode::Parse: return "parse";
  }
  return "unknown";
}

ComplexMatrix structure_matrix(StructureKind kind, int n) {
  if (n <= 0) throw Error(ErrorCode::InvalidArgument, "structure matrix size must be positive");
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  switch (kind) {
    case StructureKind::Identity:
      m.setIdentity();
      break;
    case StructureKind::J:
      for (int i = 0; i < n; ++i) m(i, n - 1 - i) = 1.0;
      break;
    case StructureKind::K: {
      if (n % 2 != 0) throw Error(ErrorCode::InvalidArgument, "K_n requires even n");
      const int h = n / 2;
      for (int i = 0; i < h; ++i) {
        m(i, n - 1 - i) = 1.0;
        m(h + i, h - 1 - i) = -1.0;
      }
      break;
    }
  }
  return m;
}

const char* to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::gl: return "gl";
    case FamilyKind::sl: return "sl";
    case FamilyKind::so: return "so";
    case FamilyKind::sp: return "sp";
  }
  return "?";
}

FamilyKind family_from_string(const std::string& name) {
  if (name == "gl") return FamilyKind::gl;
  if (name == "sl") return FamilyKind::sl;
  if (name == "so") return FamilyKind::so;
  if (name == "sp") return FamilyKind::sp;
  throw Error(ErrorCode::Parse, "unknown algebra family '" + name + "'");
}

const char* to_string(StructureKind kind) {
  switch (kind) {
    case StructureKind::Identity: return "I";
    case StructureKind::J: return "J";
    case StructureKind::K: return "K";
  }
  return "?";
}

AlgebraFamily::AlgebraFamily(FamilyKind kind, int n) : kind_(kind), n_(n) {
  if (n <= 0) throw Error(ErrorCode::InvalidArgument, "algebra size must be positive");
  if (kind == FamilyKind::so) structure_ = structure_matrix(StructureKind::J, n);
  if (kind == FamilyKind::sp) {
    if (n % 2 != 0) throw Error(ErrorCode::InvalidArgument, "sp requires even n");
    structure_ = structure_matrix(StructureKind::K, n);
  }
}

AlgebraFamily::AlgebraFamily(FamilyKind kind, int n, ComplexMatrix structure)
    : kind_(kind), n_(n), structure_(std::move(structure)) {
  if (kind != FamilyKind::so && kind != FamilyKind::sp)
    throw Error(ErrorCode::InvalidArgument, "only so/sp carry a structure matrix");
  if (structure_.rows() != n || structure_.cols() != n)
    throw Error(ErrorCode::ShapeMismatch, "structure matrix has wrong size");
}

ComplexMatrix AlgebraFamily::project(const ComplexMatrix& x) const {
  switch (kind_) {
    case FamilyKind::gl:
      return x;
    case FamilyKind::sl:
      return x - (x.trace() / static_cast<double>(n_)) *
                     ComplexMatrix::Identity(n_, n_);
    case FamilyKind::so:
    case FamilyKind::sp:
      return 0.5 * (x - b_transpose(x, structure_));
  }
  return x;
}

ComplexMatrix b_transpose(const ComplexMatrix& m, const ComplexMatrix& b) {
  if (b.rows() != b.cols() || m.rows() != b.rows() || m.cols() != b.rows())
    throw Error(ErrorCode::ShapeMismatch, "b_transpose: incompatible shapes");
  Eigen::FullPivLU<ComplexMatrix> lu(b);
  if (!lu.isInvertible())
    throw Error(ErrorCode::InvalidStructureMatrix, "b_transpose: singular structure matrix");
  return lu.solve(ComplexMatrix(m.transpose() * b));
}

ComplexMatrix j_transpose(const ComplexMatrix& m) {
  const Eigen::Index r = m.rows();
  const Eigen::Index c = m.cols();
  ComplexMatrix out(c, r);
  for (Eigen::Index i = 0; i < c; ++i)
    for (Eigen::Index j = 0; j < r; ++j) out(i, j) = m(r - 1 - j, c - 1 - i);
  return out;
}

bool is_in_algebra(const ComplexMatrix& x, const AlgebraFamily& fam, double tol) {
  if (x.rows() != fam.n() || x.cols() != fam.n())
    throw Error(ErrorCode::ShapeMismatch, "is_in_algebra: size mismatch");
  switch (fam.kind()) {
    case FamilyKind::gl:
      return true;
    case FamilyKind::sl:
      return std::abs(x.trace()) <= tol;
    case FamilyKind::so:
    case FamilyKind::sp:
      return max_abs(b_transpose(x, fam.structure()) + x) <= tol;
  }
  return false;
}

bool is_in_group(const ComplexMatrix& g, const AlgebraFamily& fam, double tol) {
  if (g.rows() != fam.n() || g.cols() != fam.n())
    throw Error(ErrorCode::ShapeMismatch, "is_in_group: size mismatch");
  Eigen::FullPivLU<ComplexMatrix> lu(g);
  if (!lu.isInvertible()) throw Error(ErrorCode::SingularMatrix, "is_in_group: singular element");
  switch (fam.kind()) {
    case FamilyKind::gl:
      return true;
    case FamilyKind::sl:
      return std::abs(determinant(g) - 1.0) <= tol;
    case FamilyKind::so:
    case FamilyKind::sp: {
      const ComplexMatrix defect =
          b_transpose(g, fam.structure()) * g - ComplexMatrix::Identity(fam.n(), fam.n());
      return max_abs(defect) <= tol;
    }
  }
  return false;
}

ComplexMatrix commutator(const ComplexMatrix& x, const ComplexMatrix& y) {
  if (x.rows() != x.cols() || x.rows() != y.rows() || x.cols() != y.cols())
    throw Error(ErrorCode::ShapeMismatch, "commutator: shape mismatch");
  return x * y - y * x;
}

Complex determinant(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::ShapeMismatch, "determinant of non-square matrix");
  if (m.rows() == 0) return 1.0;
  return Eigen::PartialPivLU<ComplexMatrix>(m).determinant();
}

ComplexMatrix checked_inverse(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::ShapeMismatch, "inverse of non-square matrix");
  if (m.rows() == 1) {
    if (m(0, 0) == Complex(0.0) || !std::isfinite(std::abs(m(0, 0))))
      throw Error(ErrorCode::SingularMatrix, "singular matrix");
    ComplexMatrix out(1, 1);
    out(0, 0) = 1.0 / m(0, 0);
    return out;
  }
  Eigen::FullPivLU<ComplexMatrix> lu(m);
  if (!lu.isInvertible()) throw Error(ErrorCode::SingularMatrix, "singular matrix");
  return lu.inverse();
}

ComplexMatrix matrix_exp(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::ShapeMismatch, "exp of non-square matrix");
  if (m.rows() == 1) {
    ComplexMatrix out(1, 1);
    out(0, 0) = std::exp(m(0, 0));
    return out;
  }
  return m.exp();
}

ComplexMatrix matrix_log(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::ShapeMismatch, "log of non-square matrix");
  if (m.rows() == 1) {
    ComplexMatrix out(1, 1);
    out(0, 0) = std::log(m(0, 0));
    return out;
  }
  return m.log();
}

double max_abs(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

bool all_finite(const ComplexMatrix& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const Complex v = m.data()[i];
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  }
  return true;
}

ComplexMatrix block_diagonal(const std::vector<ComplexMatrix>& blocks) {
  Eigen::Index n = 0;
  for (const auto& b : blocks) n += b.rows();
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  Eigen::Index off = 0;
  for (const auto& b : blocks) {
    if (b.rows() != b.cols()) throw Error(ErrorCode::ShapeMismatch, "block_diagonal: non-square block");
    out.block(off, off, b.rows(), b.cols()) = b;
    off += b.rows();
  }
  return out;
}

}  // namespace toda
