#pragma once

// Toda systems d+(Gamma^{-1} d-Gamma) = [c-, Gamma^{-1} c+ Gamma] in block form.
// gamma = diag(Gamma_1..Gamma_p); c+ has C+a at block (a, a+1) and C+0 at
// (p, 1); c- has C-a at (a+1, a) and C-0 at (1, p). Arc indices are 0..p-1.

#include <optional>
#include <vector>

#include "toda/circle.hpp"
#include "toda/gradation.hpp"
#include "toda/lie_core.hpp"

namespace toda {

enum class EquationClass { GeneralLinear, EvenFold, OddFold, DoubleFixedFold, Simplest };

const char* to_string(EquationClass cls);
EquationClass equation_class_from_string(const std::string& name);

enum class SystemOrigin { Spec, Chain, Simplest, Fold };

const char* to_string(SystemOrigin origin);
SystemOrigin system_origin_from_string(const std::string& name);

/// ^kind C = epsilon C.
struct CRule {
  StructureKind kind = StructureKind::J;
  int epsilon = 1;
  bool operator==(const CRule&) const = default;
};

struct ConstraintSet {
  /// ^B Gamma_a = Gamma_a^{-1} with B of this kind.
  std::vector<std::optional<StructureKind>> gamma;
  std::vector<std::optional<CRule>> c_rule;
  bool det_product_one = false;
  bool operator==(const ConstraintSet&) const = default;
};

struct TodaSystem {
  SystemOrigin origin = SystemOrigin::Chain;
  std::optional<GradationSpec> spec;
  FamilyKind family = FamilyKind::gl;
  int L = 1;
  std::vector<int> n_list;
  EquationClass equation_class = EquationClass::GeneralLinear;
  std::vector<ComplexMatrix> c_plus;
  std::vector<ComplexMatrix> c_minus;
  ConstraintSet constraints;
  std::optional<FoldingMap> fold;

  int p() const { return static_cast<int>(n_list.size()); }
  int n() const;
  /// Number of independent Gamma's: p, or s for folded classes.
  int variables() const { return fold ? fold->s : p(); }
};

EquationClass fold_class(FoldPattern pattern);
/// so, sp, or gl for the outer families.
FamilyKind fold_algebra(FoldFamily family);
ConstraintSet fold_constraint_set(const FoldingMap& map);

/// Shape (rows, cols) of C+a; C-a is the transpose shape.
std::pair<int, int> c_plus_shape(const std::vector<int>& n_list, int arc);

/// Block position (row block, col block) of arc a in c+.
std::pair<int, int> c_plus_position(int p, int arc);

ComplexMatrix assemble_c_plus(const std::vector<int>& n_list, const std::vector<ComplexMatrix>& c);
ComplexMatrix assemble_c_minus(const std::vector<int>& n_list, const std::vector<ComplexMatrix>& c);
ComplexMatrix block(const ComplexMatrix& m, const std::vector<int>& n_list, int row, int col);

/// Empty c_plus/c_minus selects the grade +-L projection of the all-ones matrix.
TodaSystem build_system(const GradationSpec& spec, int L,
                        std::vector<ComplexMatrix> c_plus = {},
                        std::vector<ComplexMatrix> c_minus = {});

/// p = 1: gl (or sl) with any C, or the outer case h = I, B = J.
TodaSystem build_simplest(FamilyKind family, const ComplexMatrix& c_plus,
                          const ComplexMatrix& c_minus, bool outer = false);

/// n_a = r, C+-a = I_r (scaled by c_plus_scale / c_minus_scale).
TodaSystem build_periodic_chain(int p, int r, double c_plus_scale = 1.0,
                                double c_minus_scale = 1.0, FamilyKind family = FamilyKind::gl);

ComplexMatrix rhs_full(const ComplexMatrix& gamma, const ComplexMatrix& c_minus,
                       const ComplexMatrix& c_plus);

/// The general linear chain evaluated on all p blocks.
std::vector<ComplexMatrix> rhs_chain(const std::vector<ComplexMatrix>& gammas,
                                     const std::vector<ComplexMatrix>& c_plus,
                                     const std::vector<ComplexMatrix>& c_minus);

/// Gamma's of all p nodes from the independent ones.
std::vector<ComplexMatrix> expand_state(const TodaSystem& system,
                                        const std::vector<ComplexMatrix>& independent);

/// Algebra-valued counterpart: W_{sigma a} = -(^B diag(W))_{sigma a}.
std::vector<ComplexMatrix> expand_algebra(const TodaSystem& system,
                                          const std::vector<ComplexMatrix>& independent);

/// Largest violation of the node constraints by a full p-tuple.
double state_violation(const TodaSystem& system, const std::vector<ComplexMatrix>& gammas);

/// Right-hand sides of the system's own equations, one per independent
/// variable. Takes the independent Gamma's.
std::vector<ComplexMatrix> rhs_blocks(const TodaSystem& system,
                                      const std::vector<ComplexMatrix>& independent,
                                      const std::vector<ComplexMatrix>& c_plus,
                                      const std::vector<ComplexMatrix>& c_minus);
std::vector<ComplexMatrix> rhs_blocks(const TodaSystem& system,
                                      const std::vector<ComplexMatrix>& independent);

/// Same, taking a full constrained p-tuple; throws ConstraintViolation past tol.
std::vector<ComplexMatrix> rhs_blocks_checked(const TodaSystem& system,
                                              const std::vector<ComplexMatrix>& gammas,
                                              double tol = 1e-8);

/// max |blocks of rhs_full - expanded rhs_blocks| for a full p-tuple.
double rhs_blocks_vs_full(const TodaSystem& system, const std::vector<ComplexMatrix>& gammas);

}  // namespace toda
