#pragma once

// Folding the general linear chain onto the orthogonal, symplectic and
// outer classes, and numerical checks that the reductions are consistent.

#include <cstdint>
#include <vector>

#include "toda/circle.hpp"
#include "toda/toda_builder.hpp"

namespace toda {

/// Restricts a general linear system to the fixed set of the fold. The C
/// blocks must already satisfy ^B c = eta c for the fold's ambient B.
TodaSystem fold_constraints(const FoldingMap& map, const TodaSystem& unfolded, double tol = 1e-9);

/// Largest failure of C blocks to satisfy the fold (paired and fixed arcs).
double fold_c_violation(const FoldingMap& map, const std::vector<int>& n_list,
                        const std::vector<ComplexMatrix>& c_plus,
                        const std::vector<ComplexMatrix>& c_minus);

/// Projects arbitrary C blocks onto the fold: c -> (c + eta ^B c) / 2 arc by arc.
void symmetrize_c(const FoldingMap& map, const std::vector<int>& n_list,
                  std::vector<ComplexMatrix>& c_plus, std::vector<ComplexMatrix>& c_minus);

/// Gamma_a with W_a = Gamma_a^{-1} d-Gamma_a on every node.
struct ChainState {
  std::vector<ComplexMatrix> gammas;
  std::vector<ComplexMatrix> ws;
};

/// Random point of the fixed set of a folded system (exp of scale * random).
ChainState random_constrained_state(const TodaSystem& folded, std::uint64_t seed, double scale);

/// max over nodes of the Gamma and W fold residuals.
double fold_violation(const TodaSystem& folded, const ChainState& state);

/// Advances the unfolded chain G' = G W, W' = rhs(G) by `steps` classical
/// Runge-Kutta steps of size dt starting from `state`, and returns the
/// largest fold violation seen (the start included).
double verify_fold_invariance(const FoldingMap& map, const TodaSystem& unfolded,
                              const ChainState& state, int steps, double dt);

/// log2 of the violation ratio between step sizes dt and dt/2 (same step count).
double fold_invariance_order(const FoldingMap& map, const TodaSystem& unfolded,
                             const ChainState& state, int steps, double dt);

/// Maps data of the odd fold with node s fixed onto the variant with node 1
/// fixed: Gamma'_a = ^J(Gamma_{s-a+1}^{-1}), C'_a = ^J C_{s-a}. Returns the
/// largest mismatch between the transformed right-hand sides.
/// `system` must be an odd fold with node s fixed; gammas are its s independent blocks.
double odd_fold_equivalence(const TodaSystem& system, const std::vector<ComplexMatrix>& gammas);

/// Index map of the substitution on the labels 1..s (for involution checks).
int odd_fold_relabel(int s, int alpha);

}  // namespace toda
