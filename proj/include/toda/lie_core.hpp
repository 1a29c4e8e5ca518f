#pragma once

// Dense complex matrix algebra for the classical Lie groups and algebras:
// the structure matrices I, J, K, the B-transpose, and membership tests.

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace toda {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

inline constexpr double kDefaultTolerance = 1e-10;

enum class StructureKind { Identity, J, K };

/// I_n, the skew-diagonal J_n, or K_n = [[0, J_{n/2}], [-J_{n/2}, 0]] (n even).
ComplexMatrix structure_matrix(StructureKind kind, int n);

enum class FamilyKind { gl, sl, so, sp };

const char* to_string(FamilyKind kind);
FamilyKind family_from_string(const std::string& name);
const char* to_string(StructureKind kind);

/// A classical matrix Lie algebra of size n. so and sp are realized as
/// {x : ^B x = -x}; B defaults to J_n (so) or K_n (sp) but any nonsingular
/// B with transpose(B) = +-B may be installed (block realizations).
class AlgebraFamily {
 public:
  AlgebraFamily(FamilyKind kind, int n);
  AlgebraFamily(FamilyKind kind, int n, ComplexMatrix structure);

  FamilyKind kind() const { return kind_; }
  int n() const { return n_; }
  /// Empty for gl and sl.
  const ComplexMatrix& structure() const { return structure_; }
  bool has_structure() const { return structure_.size() > 0; }

  /// Projects an arbitrary n x n matrix onto the algebra.
  ComplexMatrix project(const ComplexMatrix& x) const;

 private:
  FamilyKind kind_;
  int n_;
  ComplexMatrix structure_;
};

/// ^B m = B^{-1} transpose(m) B.
ComplexMatrix b_transpose(const ComplexMatrix& m, const ComplexMatrix& b);

/// Skew-diagonal transpose of a rectangular r x c matrix: J_c transpose(m) J_r.
/// Agrees with b_transpose(m, J) for square m.
ComplexMatrix j_transpose(const ComplexMatrix& m);

bool is_in_algebra(const ComplexMatrix& x, const AlgebraFamily& fam,
                   double tol = kDefaultTolerance);
bool is_in_group(const ComplexMatrix& g, const AlgebraFamily& fam,
                 double tol = kDefaultTolerance);

ComplexMatrix commutator(const ComplexMatrix& x, const ComplexMatrix& y);

/// LU with partial pivoting.
Complex determinant(const ComplexMatrix& m);

/// Throws SingularMatrix when m is not invertible.
ComplexMatrix checked_inverse(const ComplexMatrix& m);

/// Matrix exponential and principal logarithm (scaling and squaring / Schur-Parlett).
ComplexMatrix matrix_exp(const ComplexMatrix& m);
ComplexMatrix matrix_log(const ComplexMatrix& m);

double max_abs(const ComplexMatrix& m);
bool all_finite(const ComplexMatrix& m);

ComplexMatrix block_diagonal(const std::vector<ComplexMatrix>& blocks);

}  // namespace toda
