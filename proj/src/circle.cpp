#include "toda/circle.hpp"

#include "toda/error.hpp"

namespace toda {

namespace {

int mod(int a, int m) {
  const int r = a % m;
  return r < 0 ? r + m : r;
}

}  // namespace

const char* to_string(FoldPattern pattern) {
  switch (pattern) {
    case FoldPattern::EvenArcFixed: return "even_arc_fixed";
    case FoldPattern::EvenNodeFixed: return "even_node_fixed";
    case FoldPattern::OddMixed: return "odd_mixed";
  }
  return "?";
}

const char* to_string(FoldFamily family) {
  switch (family) {
    case FoldFamily::Orthogonal: return "orthogonal";
    case FoldFamily::Symplectic: return "symplectic";
    case FoldFamily::OuterII: return "outer_II";
    case FoldFamily::OuterIII: return "outer_III";
  }
  return "?";
}

FoldPattern fold_pattern_from_string(const std::string& name) {
  if (name == "even_arc_fixed") return FoldPattern::EvenArcFixed;
  if (name == "even_node_fixed") return FoldPattern::EvenNodeFixed;
  if (name == "odd_mixed") return FoldPattern::OddMixed;
  throw Error(ErrorCode::Parse, "unknown fold pattern '" + name + "'");
}

FoldFamily fold_family_from_string(const std::string& name) {
  if (name == "orthogonal") return FoldFamily::Orthogonal;
  if (name == "symplectic") return FoldFamily::Symplectic;
  if (name == "outer_II") return FoldFamily::OuterII;
  if (name == "outer_III") return FoldFamily::OuterIII;
  throw Error(ErrorCode::Parse, "unknown fold family '" + name + "'");
}

int arc_between(int p, int a, int b) {
  if (mod(b - a, p) == 1) return mod(b, p);
  if (mod(a - b, p) == 1) return mod(a, p);
  throw Error(ErrorCode::InvalidArgument, "nodes are not adjacent");
}

std::vector<int> induced_arc_pairing(const std::vector<int>& node_pairing) {
  // A reflection a -> j - a sends the arc sitting at a - 1/2 to j - a + 1/2.
  const int p = static_cast<int>(node_pairing.size());
  const int j = node_pairing.front();
  std::vector<int> arcs(static_cast<std::size_t>(p));
  for (int a = 0; a < p; ++a) arcs[static_cast<std::size_t>(a)] = mod(j + 1 - a, p);
  return arcs;
}

FoldingMap make_fold(int p, FoldPattern pattern, FoldFamily family) {
  if (p < 2) throw Error(ErrorCode::InvalidArgument, "folding needs p >= 2");
  const bool even = p % 2 == 0;
  if ((pattern == FoldPattern::OddMixed) == even)
    throw Error(ErrorCode::InvalidArgument,
                std::string("pattern ") + to_string(pattern) + " does not match the parity of p");
  if (family == FoldFamily::OuterII && pattern == FoldPattern::EvenNodeFixed)
    throw Error(ErrorCode::InvalidArgument, "outer type II folds have no fixed node pair");
  if (family == FoldFamily::OuterIII && pattern == FoldPattern::EvenArcFixed)
    throw Error(ErrorCode::InvalidArgument, "outer type III folds always fix node 1");

  FoldingMap m;
  m.pattern = pattern;
  m.family = family;
  m.p = p;
  const bool node_one = pattern == FoldPattern::EvenNodeFixed ||
                        (pattern == FoldPattern::OddMixed && family == FoldFamily::OuterIII);
  switch (pattern) {
    case FoldPattern::EvenArcFixed: m.s = p / 2; break;
    case FoldPattern::EvenNodeFixed: m.s = (p + 2) / 2; break;
    case FoldPattern::OddMixed: m.s = (p + 1) / 2; break;
  }
  const int j = node_one ? 0 : p - 1;
  m.node_pairing.resize(static_cast<std::size_t>(p));
  for (int a = 0; a < p; ++a) m.node_pairing[static_cast<std::size_t>(a)] = mod(j - a, p);
  m.arc_pairing = induced_arc_pairing(m.node_pairing);

  const StructureKind whole =
      family == FoldFamily::Orthogonal ? StructureKind::J : StructureKind::K;
  if (node_one) {
    const StructureKind first = family == FoldFamily::Symplectic ? StructureKind::K : StructureKind::J;
    m.parts = {{0, 0, first}, {1, p - 1, whole}};
  } else {
    m.parts = {{0, p - 1, whole}};
  }
  auto part_of = [&m](int node) -> const AmbientPart& {
    for (const auto& part : m.parts)
      if (node >= part.first && node <= part.last) return part;
    throw Error(ErrorCode::InvalidArgument, "node outside every part");
  };

  m.node_structure.assign(static_cast<std::size_t>(p), std::nullopt);
  for (int a = 0; a < p; ++a)
    if (m.node_pairing[static_cast<std::size_t>(a)] == a)
      m.node_structure[static_cast<std::size_t>(a)] = part_of(a).kind;

  const bool outer = family == FoldFamily::OuterII || family == FoldFamily::OuterIII;
  m.arc_eta.assign(static_cast<std::size_t>(p), -1);
  if (outer) m.arc_eta[0] = 1;
  m.arc_epsilon.assign(static_cast<std::size_t>(p), 0);
  for (int a = 0; a < p; ++a) {
    if (m.arc_pairing[static_cast<std::size_t>(a)] != a) continue;
    // A fixed arc straddles the centre of its part; under K that costs a sign.
    const int node = a == 0 ? p - 1 : a;
    const int kappa = part_of(node).kind == StructureKind::K ? -1 : 1;
    m.arc_epsilon[static_cast<std::size_t>(a)] = m.arc_eta[static_cast<std::size_t>(a)] * kappa;
  }
  return m;
}

ComplexMatrix fold_ambient(const FoldingMap& map, const std::vector<int>& n_list) {
  if (static_cast<int>(n_list.size()) != map.p)
    throw Error(ErrorCode::ShapeMismatch, "block count does not match the diagram");
  std::vector<ComplexMatrix> blocks;
  for (const auto& part : map.parts) {
    int size = 0;
    for (int a = part.first; a <= part.last; ++a) size += n_list[static_cast<std::size_t>(a)];
    if (part.kind == StructureKind::K && size % 2 != 0)
      throw Error(ErrorCode::IncompatibleBlocks, "a K part must have even size");
    blocks.push_back(structure_matrix(part.kind, size));
  }
  return block_diagonal(blocks);
}

std::vector<AxisReflection> enumerate_fold_axes(int p) {
  std::vector<AxisReflection> out;
  for (int j = 0; j < p; ++j) {
    AxisReflection r;
    r.p = p;
    r.j = j;
    r.node_pairing.resize(static_cast<std::size_t>(p));
    for (int a = 0; a < p; ++a) {
      r.node_pairing[static_cast<std::size_t>(a)] = mod(j - a, p);
      if (mod(j - a, p) == a) ++r.fixed_nodes;
    }
    r.arc_pairing = induced_arc_pairing(r.node_pairing);
    for (int a = 0; a < p; ++a)
      if (r.arc_pairing[static_cast<std::size_t>(a)] == a) ++r.fixed_arcs;
    out.push_back(std::move(r));
  }
  return out;
}

std::optional<FoldPattern> classify_reflection(const AxisReflection& r) {
  if (r.fixed_nodes == 0 && r.fixed_arcs == 2) return FoldPattern::EvenArcFixed;
  if (r.fixed_nodes == 2 && r.fixed_arcs == 0) return FoldPattern::EvenNodeFixed;
  if (r.fixed_nodes == 1 && r.fixed_arcs == 1) return FoldPattern::OddMixed;
  return std::nullopt;
}

std::optional<int> rotation_to(const std::vector<int>& node_pairing,
                               const std::vector<int>& canonical) {
  const int p = static_cast<int>(node_pairing.size());
  if (static_cast<int>(canonical.size()) != p) return std::nullopt;
  for (int t = 0; t < p; ++t) {
    bool ok = true;
    for (int a = 0; a < p && ok; ++a)
      ok = canonical[static_cast<std::size_t>(a)] ==
           mod(node_pairing[static_cast<std::size_t>(mod(a + t, p))] - t, p);
    if (ok) return t;
  }
  return std::nullopt;
}

}  // namespace toda
