#pragma once

// Z_M-gradations of the classical Lie algebras given by block data
// (n_1..n_p, k_1..k_{p-1}) and the finite-order automorphism behind them.

#include <cstddef>
#include <string>
#include <vector>

#include "toda/lie_core.hpp"

namespace toda {

enum class GradationType { GlInner, SoSpTypeI, SoSpTypeII, GlOuterII, GlOuterIII };

const char* to_string(GradationType type);
GradationType gradation_type_from_string(const std::string& name);
bool is_outer(GradationType type);

/// p = n_list.size(). p = 1 encodes A = id for the inner types and the
/// outer case h = I, B = J for GlOuterII. For outer types M = 2N.
struct GradationSpec {
  FamilyKind family = FamilyKind::gl;
  int n = 1;
  GradationType type = GradationType::GlInner;
  int M = 1;
  std::vector<int> n_list{1};
  std::vector<int> k_list;
  double phase_offset = 0.0;  // 0 or 1/2

  int p() const { return static_cast<int>(n_list.size()); }
  int N() const { return M / 2; }
  /// Offset of block alpha (0-based) in the full matrix.
  int block_offset(int alpha) const;

  bool operator==(const GradationSpec&) const = default;
};

struct Violation {
  std::string constraint;
  std::string message;
};

std::vector<Violation> validate_spec(const GradationSpec& spec);

/// Throws InvalidSpec with the first violation.
void require_valid(const GradationSpec& spec);

/// m_1 > ... > m_p.
std::vector<int> compute_m(const GradationSpec& spec);

/// Diagonal h = diag(mu_a I_{n_a}), mu_a = exp(2 pi i (m_a + phase) / M).
ComplexMatrix build_h(const GradationSpec& spec);

/// The B matrix of the realization: block J/K for so/sp, the matrix entering
/// A(x) = -h ^B x h^{-1} for outer gl, empty for inner gl.
ComplexMatrix ambient_structure(const GradationSpec& spec);

/// The algebra being graded, with the realization's structure matrix installed.
AlgebraFamily spec_algebra(const GradationSpec& spec);

struct Automorphism {
  bool outer = false;
  ComplexMatrix h;
  ComplexMatrix h_inv;
  ComplexMatrix B;  // outer only
  int M = 1;
};

Automorphism build_automorphism(const GradationSpec& spec);
ComplexMatrix apply_automorphism(const Automorphism& aut, const ComplexMatrix& x);

/// P_k(x) = (1/M) sum_j exp(-2 pi i j k / M) A^j(x).
ComplexMatrix grading_component(const ComplexMatrix& x, int k, const Automorphism& aut);

/// Inner: residue [m_a - m_b]_M per block. Outer: block (a, b) carries
/// residue r = [m_a - m_b]_{2N} on its part with x_ab = -(^B x)_ab and
/// r + N on its part with x_ab = +(^B x)_ab.
struct GradingIndexTable {
  bool outer = false;
  int modulus = 1;
  int p = 1;
  std::vector<int> residue;  // row-major p x p

  int at(int alpha, int beta) const { return residue[static_cast<std::size_t>(alpha * p + beta)]; }
  /// Outer only: residue carried by the part with x_ab = sign * (^B x)_ab.
  int at_signed(int alpha, int beta, int sign) const;
  /// Whether block (a, b) has a nonzero component of grade k.
  bool carries(int alpha, int beta, int k) const;
};

GradingIndexTable block_index_table(const GradationSpec& spec);

/// dim g_[k], by projecting a spanning set of the algebra.
int grade_dimension(const GradationSpec& spec, int k);

/// Every valid spec of the family at size n and order M, sorted by
/// (p, n_list, k_list, type). Throws ResourceLimit past max_count.
std::vector<GradationSpec> enumerate_specs(FamilyKind family, int n, int M,
                                           std::size_t max_count = 100000);

}  // namespace toda
