#include "toda/toda_builder.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "toda/error.hpp"

namespace toda {

namespace {

std::size_t idx(int a) { return static_cast<std::size_t>(a); }

int offset(const std::vector<int>& n_list, int a) {
  return std::accumulate(n_list.begin(), n_list.begin() + a, 0);
}

ComplexMatrix assemble(const std::vector<int>& n_list, const std::vector<ComplexMatrix>& c,
                       bool transpose_position) {
  const int p = static_cast<int>(n_list.size());
  if (static_cast<int>(c.size()) != p)
    throw Error(ErrorCode::ShapeMismatch, "expected one C block per arc");
  const int n = std::accumulate(n_list.begin(), n_list.end(), 0);
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  for (int a = 0; a < p; ++a) {
    auto [r, col] = c_plus_position(p, a);
    if (transpose_position) std::swap(r, col);
    const auto& blk = c[idx(a)];
    if (blk.rows() != n_list[idx(r)] || blk.cols() != n_list[idx(col)])
      throw Error(ErrorCode::ShapeMismatch, "C block " + std::to_string(a) + " has the wrong shape");
    out.block(offset(n_list, r), offset(n_list, col), blk.rows(), blk.cols()) += blk;
  }
  return out;
}

ComplexMatrix structure_for(StructureKind kind, Eigen::Index n) {
  return structure_matrix(kind, static_cast<int>(n));
}

ComplexMatrix b_of(const ComplexMatrix& x, StructureKind kind) {
  return b_transpose(x, structure_for(kind, x.rows()));
}

// Kind of a square block, if it equals J or K of its size.
std::optional<StructureKind> recognise(const ComplexMatrix& b) {
  const int n = static_cast<int>(b.rows());
  if (max_abs(b - structure_matrix(StructureKind::J, n)) < 1e-12) return StructureKind::J;
  if (n % 2 == 0 && max_abs(b - structure_matrix(StructureKind::K, n)) < 1e-12) return StructureKind::K;
  return std::nullopt;
}

// The fold realized by a spec, read off from its ambient form and automorphism.
FoldingMap derive_fold(const GradationSpec& spec, int L) {
  const int p = spec.p();
  FoldingMap m;
  m.p = p;
  const bool sp = spec.family == FamilyKind::sp;
  switch (spec.type) {
    case GradationType::SoSpTypeI:
      m.family = sp ? FoldFamily::Symplectic : FoldFamily::Orthogonal;
      m.pattern = p % 2 == 0 ? FoldPattern::EvenArcFixed : FoldPattern::OddMixed;
      m.parts = {{0, p - 1, sp ? StructureKind::K : StructureKind::J}};
      break;
    case GradationType::SoSpTypeII:
      m.family = sp ? FoldFamily::Symplectic : FoldFamily::Orthogonal;
      m.pattern = FoldPattern::EvenNodeFixed;
      m.parts = {{0, 0, sp ? StructureKind::K : StructureKind::J},
                 {1, p - 1, sp ? StructureKind::K : StructureKind::J}};
      break;
    case GradationType::GlOuterII:
      m.family = FoldFamily::OuterII;
      m.pattern = p % 2 == 0 ? FoldPattern::EvenArcFixed : FoldPattern::OddMixed;
      m.parts = {{0, p - 1, StructureKind::K}};
      break;
    case GradationType::GlOuterIII:
      m.family = FoldFamily::OuterIII;
      m.pattern = p % 2 == 0 ? FoldPattern::EvenNodeFixed : FoldPattern::OddMixed;
      m.parts = {{0, 0, StructureKind::J}, {1, p - 1, StructureKind::K}};
      break;
    case GradationType::GlInner:
      throw Error(ErrorCode::InvalidArgument, "inner gl gradations are not folded");
  }

  const ComplexMatrix B = ambient_structure(spec);
  const auto& nl = spec.n_list;
  m.node_pairing.assign(idx(p), -1);
  m.node_structure.assign(idx(p), std::nullopt);
  for (int a = 0; a < p; ++a)
    for (int b = 0; b < p; ++b) {
      const ComplexMatrix blk = block(B, nl, a, b);
      if (max_abs(blk) == 0.0) continue;
      m.node_pairing[idx(a)] = b;
      if (a == b) {
        m.node_structure[idx(a)] = recognise(blk);
        if (!m.node_structure[idx(a)])
          throw Error(ErrorCode::InvalidStructureMatrix, "fixed node carries neither J nor K");
      }
    }
  m.arc_pairing = induced_arc_pairing(m.node_pairing);
  int fixed = 0;
  for (int a = 0; a < p; ++a) fixed += m.node_pairing[idx(a)] == a;
  m.s = (p + fixed) / 2;

  // eta: ^B c+ = eta c+ blockwise. For so/sp this is algebra membership; for
  // outer gl it is the grade condition -h ^B c h^{-1} = exp(2 pi i L / M) c.
  m.arc_eta.assign(idx(p), -1);
  if (is_outer(spec.type)) {
    const ComplexMatrix h = build_h(spec);
    const double t = 2.0 * std::numbers::pi * L / spec.M;
    const Complex lambda(std::cos(t), std::sin(t));
    for (int a = 0; a < p; ++a) {
      const auto [r, c] = c_plus_position(p, a);
      const Complex eta =
          -lambda * h(offset(nl, c), offset(nl, c)) / h(offset(nl, r), offset(nl, r));
      m.arc_eta[idx(a)] = std::abs(eta - 1.0) < 1e-9 ? 1 : (std::abs(eta + 1.0) < 1e-9 ? -1 : 0);
    }
  }

  // epsilon on fixed arcs: compare the ^B image of an arc block with its ^J.
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  m.arc_epsilon.assign(idx(p), 0);
  for (int a = 0; a < p; ++a) {
    if (m.arc_pairing[idx(a)] != a) continue;
    const auto [rows, cols] = c_plus_shape(nl, a);
    ComplexMatrix x(rows, cols);
    for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = Complex(g(rng), g(rng));
    std::vector<ComplexMatrix> arcs;
    for (int b = 0; b < p; ++b) {
      const auto [rb, cb] = c_plus_shape(nl, b);
      arcs.push_back(b == a ? x : ComplexMatrix::Zero(rb, cb));
    }
    const ComplexMatrix image = b_transpose(assemble_c_plus(nl, arcs), B);
    const auto [r, c] = c_plus_position(p, a);
    const ComplexMatrix img = block(image, nl, r, c);
    const ComplexMatrix jx = j_transpose(x);
    int kappa = 0;
    if (max_abs(img - jx) < 1e-12) kappa = 1;
    if (max_abs(img + jx) < 1e-12) kappa = -1;
    if (kappa == 0) throw Error(ErrorCode::InvalidStructureMatrix, "fixed arc is not of ^J type");
    m.arc_epsilon[idx(a)] = m.arc_eta[idx(a)] * kappa;
  }
  return m;
}

std::vector<ComplexMatrix> inverses(const std::vector<ComplexMatrix>& gs) {
  std::vector<ComplexMatrix> out;
  out.reserve(gs.size());
  for (const auto& g : gs) out.push_back(checked_inverse(g));
  return out;
}

}  // namespace

FamilyKind fold_algebra(FoldFamily f) {
  switch (f) {
    case FoldFamily::Orthogonal: return FamilyKind::so;
    case FoldFamily::Symplectic: return FamilyKind::sp;
    default: return FamilyKind::gl;
  }
}

EquationClass fold_class(FoldPattern pattern) {
  switch (pattern) {
    case FoldPattern::EvenArcFixed: return EquationClass::EvenFold;
    case FoldPattern::EvenNodeFixed: return EquationClass::DoubleFixedFold;
    case FoldPattern::OddMixed: return EquationClass::OddFold;
  }
  return EquationClass::GeneralLinear;
}

ConstraintSet fold_constraint_set(const FoldingMap& map) {
  ConstraintSet cs;
  cs.gamma = map.node_structure;
  cs.c_rule.assign(idx(map.p), std::nullopt);
  for (int a = 0; a < map.p; ++a)
    if (map.fixed_arc(a)) cs.c_rule[idx(a)] = CRule{StructureKind::J, map.arc_epsilon[idx(a)]};
  return cs;
}

const char* to_string(EquationClass cls) {
  switch (cls) {
    case EquationClass::GeneralLinear: return "general_linear";
    case EquationClass::EvenFold: return "even_fold";
    case EquationClass::OddFold: return "odd_fold";
    case EquationClass::DoubleFixedFold: return "double_fixed_fold";
    case EquationClass::Simplest: return "simplest";
  }
  return "?";
}

EquationClass equation_class_from_string(const std::string& name) {
  if (name == "general_linear") return EquationClass::GeneralLinear;
  if (name == "even_fold") return EquationClass::EvenFold;
  if (name == "odd_fold") return EquationClass::OddFold;
  if (name == "double_fixed_fold") return EquationClass::DoubleFixedFold;
  if (name == "simplest") return EquationClass::Simplest;
  throw Error(ErrorCode::Parse, "unknown equation class '" + name + "'");
}

const char* to_string(SystemOrigin origin) {
  switch (origin) {
    case SystemOrigin::Spec: return "spec";
    case SystemOrigin::Chain: return "chain";
    case SystemOrigin::Simplest: return "simplest";
    case SystemOrigin::Fold: return "fold";
  }
  return "?";
}

SystemOrigin system_origin_from_string(const std::string& name) {
  if (name == "spec") return SystemOrigin::Spec;
  if (name == "chain") return SystemOrigin::Chain;
  if (name == "simplest") return SystemOrigin::Simplest;
  if (name == "fold") return SystemOrigin::Fold;
  throw Error(ErrorCode::Parse, "unknown system origin '" + name + "'");
}

int TodaSystem::n() const { return std::accumulate(n_list.begin(), n_list.end(), 0); }

std::pair<int, int> c_plus_position(int p, int arc) {
  if (arc < 0 || arc >= p) throw Error(ErrorCode::InvalidArgument, "arc index out of range");
  if (arc == 0) return {p - 1, 0};
  return {arc - 1, arc};
}

std::pair<int, int> c_plus_shape(const std::vector<int>& n_list, int arc) {
  const auto [r, c] = c_plus_position(static_cast<int>(n_list.size()), arc);
  return {n_list[idx(r)], n_list[idx(c)]};
}

ComplexMatrix assemble_c_plus(const std::vector<int>& n_list, const std::vector<ComplexMatrix>& c) {
  return assemble(n_list, c, false);
}

ComplexMatrix assemble_c_minus(const std::vector<int>& n_list, const std::vector<ComplexMatrix>& c) {
  return assemble(n_list, c, true);
}

ComplexMatrix block(const ComplexMatrix& m, const std::vector<int>& n_list, int row, int col) {
  return m.block(offset(n_list, row), offset(n_list, col), n_list[idx(row)], n_list[idx(col)]);
}

TodaSystem build_system(const GradationSpec& spec, int L, std::vector<ComplexMatrix> c_plus,
                        std::vector<ComplexMatrix> c_minus) {
  require_valid(spec);
  if (L < 1) throw Error(ErrorCode::InvalidArgument, "L must be positive");
  const int p = spec.p();
  const auto& nl = spec.n_list;
  const auto table = block_index_table(spec);
  const auto aut = build_automorphism(spec);
  const auto fam = spec_algebra(spec);

  auto default_blocks = [&](int grade, bool minus) {
    const ComplexMatrix ones = ComplexMatrix::Ones(spec.n, spec.n);
    const ComplexMatrix full = grading_component(fam.project(ones), grade, aut);
    std::vector<ComplexMatrix> out;
    for (int a = 0; a < p; ++a) {
      auto [r, c] = c_plus_position(p, a);
      if (minus) std::swap(r, c);
      ComplexMatrix blk = block(full, nl, r, c);
      for (Eigen::Index i = 0; i < blk.size(); ++i)
        if (std::abs(blk.data()[i]) < 1e-13) blk.data()[i] = 0.0;
      out.push_back(std::move(blk));
    }
    return out;
  };
  if (c_plus.empty()) c_plus = default_blocks(L, false);
  if (c_minus.empty()) c_minus = default_blocks(-L, true);

  const ComplexMatrix cp = assemble_c_plus(nl, c_plus);
  const ComplexMatrix cm = assemble_c_minus(nl, c_minus);
  const double scale = std::max({1.0, max_abs(cp), max_abs(cm)});
  const double tol = 1e-9 * scale;
  for (int a = 0; a < p; ++a) {
    const auto [r, c] = c_plus_position(p, a);
    if (max_abs(c_plus[idx(a)]) > tol && !table.carries(r, c, L))
      throw Error(ErrorCode::ForbiddenBlock,
                  "C+" + std::to_string(a) + " sits at a grade other than L");
    if (max_abs(c_minus[idx(a)]) > tol && !table.carries(c, r, -L))
      throw Error(ErrorCode::ForbiddenBlock,
                  "C-" + std::to_string(a) + " sits at a grade other than -L");
  }
  const double t = 2.0 * std::numbers::pi * L / spec.M;
  const Complex lambda(std::cos(t), std::sin(t));
  if (!is_in_algebra(cp, fam, tol) || !is_in_algebra(cm, fam, tol))
    throw Error(ErrorCode::ConstraintViolation, "c+- are not in the algebra");
  if (max_abs(apply_automorphism(aut, cp) - lambda * cp) > tol)
    throw Error(ErrorCode::ConstraintViolation, "c+ is not of grade L");
  if (max_abs(apply_automorphism(aut, cm) - std::conj(lambda) * cm) > tol)
    throw Error(ErrorCode::ConstraintViolation, "c- is not of grade -L");

  TodaSystem sys;
  sys.origin = SystemOrigin::Spec;
  sys.spec = spec;
  sys.family = spec.family;
  sys.L = L;
  sys.n_list = nl;
  sys.c_plus = std::move(c_plus);
  sys.c_minus = std::move(c_minus);
  sys.constraints.gamma.assign(idx(p), std::nullopt);
  sys.constraints.c_rule.assign(idx(p), std::nullopt);
  sys.constraints.det_product_one = spec.family == FamilyKind::sl;

  if (p == 1) {
    sys.equation_class = EquationClass::Simplest;
    if (spec.type == GradationType::SoSpTypeI) {
      const auto kind = spec.family == FamilyKind::sp ? StructureKind::K : StructureKind::J;
      sys.constraints.gamma[0] = kind;
      sys.constraints.c_rule[0] = CRule{kind, -1};
    } else if (spec.type == GradationType::GlOuterII) {
      sys.constraints.gamma[0] = StructureKind::J;
      sys.constraints.c_rule[0] = CRule{StructureKind::J, (L % spec.M) == spec.N() ? 1 : -1};
    }
    return sys;
  }
  if (spec.type == GradationType::GlInner) {
    sys.equation_class = EquationClass::GeneralLinear;
    return sys;
  }
  sys.fold = derive_fold(spec, L);
  sys.equation_class = fold_class(sys.fold->pattern);
  const bool det = sys.constraints.det_product_one;
  sys.constraints = fold_constraint_set(*sys.fold);
  sys.constraints.det_product_one = det;
  return sys;
}

TodaSystem build_simplest(FamilyKind family, const ComplexMatrix& c_plus,
                          const ComplexMatrix& c_minus, bool outer) {
  if (family != FamilyKind::gl && family != FamilyKind::sl)
    throw Error(ErrorCode::InvalidArgument, "the simplest system is built for gl or sl");
  if (c_plus.rows() != c_plus.cols() || c_plus.rows() != c_minus.rows() ||
      c_minus.rows() != c_minus.cols() || c_plus.rows() == 0)
    throw Error(ErrorCode::ShapeMismatch, "C+- must be square of equal size");
  const int n = static_cast<int>(c_plus.rows());
  if (family == FamilyKind::sl) {
    const double tol = 1e-9 * std::max({1.0, max_abs(c_plus), max_abs(c_minus)});
    if (std::abs(c_plus.trace()) > tol || std::abs(c_minus.trace()) > tol)
      throw Error(ErrorCode::ConstraintViolation, "sl requires traceless C+-");
  }
  TodaSystem sys;
  sys.origin = SystemOrigin::Simplest;
  sys.family = family;
  sys.n_list = {n};
  sys.equation_class = EquationClass::Simplest;
  sys.c_plus = {c_plus};
  sys.c_minus = {c_minus};
  sys.constraints.gamma = {std::nullopt};
  sys.constraints.c_rule = {std::nullopt};
  sys.constraints.det_product_one = family == FamilyKind::sl;
  if (outer) {
    const double tol = 1e-9 * std::max({1.0, max_abs(c_plus), max_abs(c_minus)});
    if (max_abs(j_transpose(c_plus) - c_plus) > tol || max_abs(j_transpose(c_minus) - c_minus) > tol)
      throw Error(ErrorCode::ConstraintViolation, "the outer simplest case requires ^J C = C");
    sys.constraints.gamma[0] = StructureKind::J;
    sys.constraints.c_rule[0] = CRule{StructureKind::J, 1};
    GradationSpec spec;
    spec.family = family;
    spec.n = n;
    spec.type = GradationType::GlOuterII;
    spec.M = 2;
    spec.n_list = {n};
    spec.phase_offset = 0.5;
    sys.spec = spec;
  }
  return sys;
}

TodaSystem build_periodic_chain(int p, int r, double c_plus_scale, double c_minus_scale,
                                FamilyKind family) {
  if (p < 2 || r < 1) throw Error(ErrorCode::InvalidArgument, "the chain needs p >= 2 and r >= 1");
  if (family != FamilyKind::gl && family != FamilyKind::sl)
    throw Error(ErrorCode::InvalidArgument, "the chain is a gl or sl system");
  TodaSystem sys;
  sys.origin = SystemOrigin::Chain;
  sys.family = family;
  sys.n_list.assign(idx(p), r);
  sys.equation_class = EquationClass::GeneralLinear;
  for (int a = 0; a < p; ++a) {
    sys.c_plus.push_back(c_plus_scale * ComplexMatrix::Identity(r, r));
    sys.c_minus.push_back(c_minus_scale * ComplexMatrix::Identity(r, r));
  }
  sys.constraints.gamma.assign(idx(p), std::nullopt);
  sys.constraints.c_rule.assign(idx(p), std::nullopt);
  sys.constraints.det_product_one = family == FamilyKind::sl;
  GradationSpec spec;
  spec.family = family;
  spec.n = p * r;
  spec.type = GradationType::GlInner;
  spec.M = p;
  spec.n_list = sys.n_list;
  spec.k_list.assign(idx(p - 1), 1);
  sys.spec = spec;
  return sys;
}

ComplexMatrix rhs_full(const ComplexMatrix& gamma, const ComplexMatrix& c_minus,
                       const ComplexMatrix& c_plus) {
  const ComplexMatrix gi = checked_inverse(gamma);
  return commutator(c_minus, gi * c_plus * gamma);
}

std::vector<ComplexMatrix> rhs_chain(const std::vector<ComplexMatrix>& gammas,
                                     const std::vector<ComplexMatrix>& c_plus,
                                     const std::vector<ComplexMatrix>& c_minus) {
  const int p = static_cast<int>(gammas.size());
  if (static_cast<int>(c_plus.size()) != p || static_cast<int>(c_minus.size()) != p)
    throw Error(ErrorCode::ShapeMismatch, "expected p C blocks");
  const auto inv = inverses(gammas);
  std::vector<ComplexMatrix> out;
  out.reserve(idx(p));
  for (int a = 0; a < p; ++a) {
    const int next = (a + 1) % p;
    const int prev = (a + p - 1) % p;
    const int out_arc = next;
    const int in_arc = a;
    out.push_back(-inv[idx(a)] * c_plus[idx(out_arc)] * gammas[idx(next)] * c_minus[idx(out_arc)] +
                  c_minus[idx(in_arc)] * inv[idx(prev)] * c_plus[idx(in_arc)] * gammas[idx(a)]);
  }
  return out;
}

namespace {

// Places blocks of the independent nodes on a block diagonal, zero elsewhere.
ComplexMatrix partial_diagonal(const TodaSystem& sys, const std::vector<ComplexMatrix>& blocks) {
  std::vector<ComplexMatrix> diag;
  for (int a = 0; a < sys.p(); ++a)
    diag.push_back(a < static_cast<int>(blocks.size())
                       ? blocks[idx(a)]
                       : ComplexMatrix::Zero(sys.n_list[idx(a)], sys.n_list[idx(a)]));
  return block_diagonal(diag);
}

void require_independent(const TodaSystem& sys, const std::vector<ComplexMatrix>& v) {
  if (static_cast<int>(v.size()) != sys.variables())
    throw Error(ErrorCode::ShapeMismatch, "expected " + std::to_string(sys.variables()) +
                                              " independent blocks, got " + std::to_string(v.size()));
  for (std::size_t a = 0; a < v.size(); ++a)
    if (v[a].rows() != sys.n_list[a] || v[a].cols() != sys.n_list[a])
      throw Error(ErrorCode::ShapeMismatch, "block " + std::to_string(a) + " has the wrong size");
}

}  // namespace

std::vector<ComplexMatrix> expand_state(const TodaSystem& sys,
                                        const std::vector<ComplexMatrix>& independent) {
  require_independent(sys, independent);
  if (!sys.fold) return independent;
  const auto& map = *sys.fold;
  const ComplexMatrix B = fold_ambient(map, sys.n_list);
  const ComplexMatrix image = b_transpose(partial_diagonal(sys, inverses(independent)), B);
  std::vector<ComplexMatrix> out(idx(sys.p()));
  for (int a = 0; a < map.s; ++a) {
    out[idx(a)] = independent[idx(a)];
    const int b = map.node_pairing[idx(a)];
    if (b != a) out[idx(b)] = block(image, sys.n_list, b, b);
  }
  return out;
}

std::vector<ComplexMatrix> expand_algebra(const TodaSystem& sys,
                                          const std::vector<ComplexMatrix>& independent) {
  require_independent(sys, independent);
  if (!sys.fold) return independent;
  const auto& map = *sys.fold;
  const ComplexMatrix B = fold_ambient(map, sys.n_list);
  const ComplexMatrix image = b_transpose(partial_diagonal(sys, independent), B);
  std::vector<ComplexMatrix> out(idx(sys.p()));
  for (int a = 0; a < map.s; ++a) {
    out[idx(a)] = independent[idx(a)];
    const int b = map.node_pairing[idx(a)];
    if (b != a) out[idx(b)] = -block(image, sys.n_list, b, b);
  }
  return out;
}

double state_violation(const TodaSystem& sys, const std::vector<ComplexMatrix>& gammas) {
  if (static_cast<int>(gammas.size()) != sys.p())
    throw Error(ErrorCode::ShapeMismatch, "expected a full p-tuple");
  double worst = 0.0;
  for (int a = 0; a < sys.p(); ++a) {
    const auto& kind = sys.constraints.gamma[idx(a)];
    if (!kind) continue;
    const auto& g = gammas[idx(a)];
    worst = std::max(worst, max_abs(b_of(g, *kind) * g - ComplexMatrix::Identity(g.rows(), g.cols())));
  }
  if (sys.fold) {
    std::vector<ComplexMatrix> ind(gammas.begin(), gammas.begin() + sys.fold->s);
    const auto expanded = expand_state(sys, ind);
    for (int a = 0; a < sys.p(); ++a) worst = std::max(worst, max_abs(expanded[idx(a)] - gammas[idx(a)]));
  }
  if (sys.constraints.det_product_one) {
    Complex prod = 1.0;
    for (const auto& g : gammas) prod *= determinant(g);
    worst = std::max(worst, std::abs(prod - 1.0));
  }
  return worst;
}

std::vector<ComplexMatrix> rhs_blocks(const TodaSystem& sys,
                                      const std::vector<ComplexMatrix>& independent) {
  return rhs_blocks(sys, independent, sys.c_plus, sys.c_minus);
}

std::vector<ComplexMatrix> rhs_blocks(const TodaSystem& sys,
                                      const std::vector<ComplexMatrix>& g,
                                      const std::vector<ComplexMatrix>& cp,
                                      const std::vector<ComplexMatrix>& cm) {
  require_independent(sys, g);
  if (!sys.fold) return rhs_chain(g, cp, cm);

  const auto& map = *sys.fold;
  const int s = map.s;
  const auto inv = inverses(g);
  auto C = [](const std::vector<ComplexMatrix>& c, int a) -> const ComplexMatrix& { return c[idx(a)]; };
  // Outgoing term of line a towards node a+1, with the node given explicitly.
  auto out_term = [&](int a, const ComplexMatrix& next) {
    return ComplexMatrix(-inv[idx(a)] * C(cp, a + 1) * next * C(cm, a + 1));
  };
  // Incoming term of line a from node a-1, with Gamma_{a-1}^{-1} given explicitly.
  auto in_term = [&](int a, const ComplexMatrix& prev_inv) {
    return ComplexMatrix(C(cm, a) * prev_inv * C(cp, a) * g[idx(a)]);
  };
  auto plain_line = [&](int a) { return ComplexMatrix(out_term(a, g[idx(a + 1)]) + in_term(a, inv[idx(a - 1)])); };
  auto fixed_kind = [&](int a) { return *map.node_structure[idx(a)]; };
  // -X + ^B X with X = Gamma_1^{-1} C+1 Gamma_2 C-1.
  auto first_fixed_line = [&] {
    const ComplexMatrix x = inv[0] * C(cp, 1) * g[1] * C(cm, 1);
    return ComplexMatrix(-x + b_of(x, fixed_kind(0)));
  };
  // -^B Y + Y with Y = C-(s-1) Gamma_{s-1}^{-1} C+(s-1) Gamma_s.
  auto last_fixed_line = [&] {
    const ComplexMatrix y = C(cm, s - 1) * inv[idx(s - 2)] * C(cp, s - 1) * g[idx(s - 1)];
    return ComplexMatrix(-b_of(y, fixed_kind(s - 1)) + y);
  };
  // Line s of the arc-fixed end: -Gamma_s^{-1} C+s ^J(Gamma_s^{-1}) C-s + incoming.
  auto last_arc_line = [&](const ComplexMatrix& prev_inv) {
    return ComplexMatrix(out_term(s - 1, j_transpose(inv[idx(s - 1)])) + in_term(s - 1, prev_inv));
  };

  std::vector<ComplexMatrix> rhs(idx(s));
  switch (map.pattern) {
    case FoldPattern::EvenArcFixed: {
      // Gamma_p^{-1} = ^J Gamma_1 on the wrap arc.
      const ComplexMatrix wrap_inv = j_transpose(g[0]);
      if (s == 1) {
        rhs[0] = last_arc_line(wrap_inv);
        break;
      }
      rhs[0] = out_term(0, g[1]) + in_term(0, wrap_inv);
      for (int a = 1; a < s - 1; ++a) rhs[idx(a)] = plain_line(a);
      rhs[idx(s - 1)] = last_arc_line(inv[idx(s - 2)]);
      break;
    }
    case FoldPattern::OddMixed:
      if (!map.node_one_fixed()) {
        rhs[0] = out_term(0, g[1]) + in_term(0, j_transpose(g[0]));
        for (int a = 1; a < s - 1; ++a) rhs[idx(a)] = plain_line(a);
        rhs[idx(s - 1)] = last_fixed_line();
      } else {
        rhs[0] = first_fixed_line();
        for (int a = 1; a < s - 1; ++a) rhs[idx(a)] = plain_line(a);
        rhs[idx(s - 1)] = last_arc_line(inv[idx(s - 2)]);
      }
      break;
    case FoldPattern::EvenNodeFixed:
      rhs[0] = first_fixed_line();
      for (int a = 1; a < s - 1; ++a) rhs[idx(a)] = plain_line(a);
      rhs[idx(s - 1)] = last_fixed_line();
      break;
  }
  return rhs;
}

std::vector<ComplexMatrix> rhs_blocks_checked(const TodaSystem& sys,
                                              const std::vector<ComplexMatrix>& gammas, double tol) {
  const double v = state_violation(sys, gammas);
  if (v > tol)
    throw Error(ErrorCode::ConstraintViolation, "state violates the system constraints by " + std::to_string(v));
  std::vector<ComplexMatrix> ind(gammas.begin(), gammas.begin() + sys.variables());
  return rhs_blocks(sys, ind);
}

double rhs_blocks_vs_full(const TodaSystem& sys, const std::vector<ComplexMatrix>& gammas) {
  if (static_cast<int>(gammas.size()) != sys.p())
    throw Error(ErrorCode::ShapeMismatch, "expected a full p-tuple");
  const ComplexMatrix full = rhs_full(block_diagonal(gammas), assemble_c_minus(sys.n_list, sys.c_minus),
                                      assemble_c_plus(sys.n_list, sys.c_plus));
  std::vector<ComplexMatrix> ind(gammas.begin(), gammas.begin() + sys.variables());
  const auto expected = expand_algebra(sys, rhs_blocks(sys, ind));
  double worst = 0.0;
  for (int a = 0; a < sys.p(); ++a)
    for (int b = 0; b < sys.p(); ++b) {
      const ComplexMatrix blk = block(full, sys.n_list, a, b);
      worst = std::max(worst, a == b ? max_abs(blk - expected[idx(a)]) : max_abs(blk));
    }
  return worst;
}

}  // namespace toda
