#pragma once

// Reference computations written directly from the definitions, kept
// separate from the library code paths they are compared against.

#include <cstdint>
#include <random>
#include <vector>

#include "toda/circle.hpp"
#include "toda/folding.hpp"
#include "toda/gradation.hpp"
#include "toda/toda_builder.hpp"

namespace oracle {

using toda::Complex;
using toda::ComplexMatrix;

ComplexMatrix random_matrix(std::mt19937_64& rng, int rows, int cols);
ComplexMatrix random_real(std::mt19937_64& rng, int rows, int cols);

/// Skew-diagonal J_n and K_n = [[0, J], [-J, 0]] written out entrywise.
ComplexMatrix J(int n);
ComplexMatrix K(int n);

/// x -> h x h^-1, or x -> -h B^-1 x^t B h^-1 for the outer case.
ComplexMatrix act(const toda::Automorphism& aut, const ComplexMatrix& x);

/// (1/M) sum_j w^(-jk) A^j x with w = exp(2 pi i / M), A^j built by repeated act().
std::vector<ComplexMatrix> dft_components(const toda::Automorphism& aut, const ComplexMatrix& x);

/// Grade of block (a, b) from the k-list alone: the sum k_a + ... + k_{b-1}
/// above the diagonal, its negative below, reduced mod `modulus`.
int block_grade(const std::vector<int>& k_list, int a, int b, int modulus);

/// Dimension of gl/sl/so/sp of size n.
int algebra_dimension(toda::FamilyKind family, int n);

/// [c-, Gamma^-1 c+ Gamma] built from explicit block placement.
ComplexMatrix full_rhs(const std::vector<int>& n_list, const std::vector<ComplexMatrix>& gammas,
                       const std::vector<ComplexMatrix>& c_plus,
                       const std::vector<ComplexMatrix>& c_minus);

/// Largest block of full_rhs off the diagonal, and the largest mismatch of its
/// diagonal against rhs_blocks of the system on the independent nodes.
struct RhsComparison {
  double off_diagonal = 0.0;
  double diagonal = 0.0;
};
RhsComparison compare_rhs(const toda::TodaSystem& system, const std::vector<ComplexMatrix>& gammas);

/// General linear chain with the given block sizes and random C blocks.
toda::TodaSystem random_chain(std::mt19937_64& rng, const std::vector<int>& n_list);

/// Chain carrying the same blocks and C as a folded system, unconstrained.
toda::TodaSystem unfolded_of(const toda::TodaSystem& folded);

/// Pattern and family expected for a spec with all k = 1, from its type and p.
toda::FoldPattern expected_pattern(const toda::GradationSpec& spec);
toda::FoldFamily expected_family(const toda::GradationSpec& spec);

/// Node a -> (j - a) mod p; fixed nodes and arcs counted directly.
struct Reflection {
  int fixed_nodes = 0;
  int fixed_arcs = 0;
};
Reflection reflect(int p, int j);

double kink(double zm, double zp, double a);

/// Every valid spec with n <= n_max and M <= M_max for the given families.
std::vector<toda::GradationSpec> all_specs(const std::vector<toda::FamilyKind>& families, int n_max, int M_max);

}  // namespace oracle
