#pragma once

// Circle diagrams of the periodic chain and their reflections (foldings).
// Nodes 1..p carry Gamma_a; arc a joins nodes a and a+1, arc 0 joins p and 1.
// Indices in this header are 0-based: node a here is Gamma_{a+1}.

#include <optional>
#include <string>
#include <vector>

#include "toda/lie_core.hpp"

namespace toda {

enum class FoldPattern { EvenArcFixed, EvenNodeFixed, OddMixed };

/// Which realization supplies the fixed-point decorations.
enum class FoldFamily { Orthogonal, Symplectic, OuterII, OuterIII };

const char* to_string(FoldPattern pattern);
const char* to_string(FoldFamily family);
FoldPattern fold_pattern_from_string(const std::string& name);
FoldFamily fold_family_from_string(const std::string& name);

/// A run of consecutive nodes on which the ambient form is a single J or K.
struct AmbientPart {
  int first = 0;
  int last = 0;
  StructureKind kind = StructureKind::J;
  bool operator==(const AmbientPart&) const = default;
};

struct FoldingMap {
  FoldPattern pattern = FoldPattern::EvenArcFixed;
  FoldFamily family = FoldFamily::Orthogonal;
  int p = 2;
  int s = 1;
  std::vector<int> node_pairing;  // sigma
  std::vector<int> arc_pairing;
  /// Fixed nodes carry ^B Gamma = Gamma^{-1} with this B.
  std::vector<std::optional<StructureKind>> node_structure;
  /// Fixed arcs carry ^J C = epsilon C; 0 on paired arcs.
  std::vector<int> arc_epsilon;
  /// ^B c = eta c on each arc of the ambient matrix.
  std::vector<int> arc_eta;
  std::vector<AmbientPart> parts;

  /// Independent nodes are 0..s-1.
  bool fixed_node(int a) const { return node_structure[static_cast<std::size_t>(a)].has_value(); }
  bool fixed_arc(int a) const { return arc_pairing[static_cast<std::size_t>(a)] == a; }
  /// Second odd variant: node 0 and arc s fixed instead of node s-1 and arc 0.
  bool node_one_fixed() const { return node_pairing.front() == 0; }

  bool operator==(const FoldingMap&) const = default;
};

/// Arc index joining nodes a and b (adjacent on the circle).
int arc_between(int p, int a, int b);

/// Arc pairing induced by a node involution.
std::vector<int> induced_arc_pairing(const std::vector<int>& node_pairing);

/// The canonical fold of the circle with p nodes. OuterIII selects the
/// variant with node 1 fixed for odd p; the other families fix node s.
FoldingMap make_fold(int p, FoldPattern pattern, FoldFamily family);

/// Ambient B assembled from the parts for the given block sizes.
ComplexMatrix fold_ambient(const FoldingMap& map, const std::vector<int>& n_list);

/// A reflection of the circle: node a -> (j - a) mod p.
struct AxisReflection {
  int p = 0;
  int j = 0;
  std::vector<int> node_pairing;
  std::vector<int> arc_pairing;
  int fixed_nodes = 0;
  int fixed_arcs = 0;
};

std::vector<AxisReflection> enumerate_fold_axes(int p);

/// Pattern of a reflection, from its fixed-point counts.
std::optional<FoldPattern> classify_reflection(const AxisReflection& r);

/// Rotation t with sigma_canonical(a) = r^{-1}(sigma(r(a))), r(a) = a + t; nullopt if none.
std::optional<int> rotation_to(const std::vector<int>& node_pairing,
                               const std::vector<int>& canonical);

}  // namespace toda
