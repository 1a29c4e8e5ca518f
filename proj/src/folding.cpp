#include "toda/folding.hpp"

#include <cmath>
#include <random>

#include "toda/error.hpp"

namespace toda {

namespace {

std::size_t idx(int a) { return static_cast<std::size_t>(a); }

using Blocks = std::vector<ComplexMatrix>;

ComplexMatrix random_matrix(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c) {
  std::normal_distribution<double> g;
  ComplexMatrix m(r, c);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = Complex(g(rng), g(rng));
  return m;
}

ComplexMatrix b_of(const ComplexMatrix& x, StructureKind kind) {
  return b_transpose(x, structure_matrix(kind, static_cast<int>(x.rows())));
}

// The arc of a pair that stays independent after folding.
bool independent_arc(const FoldingMap& map, int a) {
  const int b = map.arc_pairing[idx(a)];
  if (a == b) return true;
  if (a == 0) return false;
  if (b == 0) return true;
  return a < b;
}

// (^B c)_{arc a} for c+ (or c- when minus) built from the given arc blocks.
Blocks b_image(const FoldingMap& map, const std::vector<int>& n_list, const Blocks& c, bool minus) {
  const ComplexMatrix B = fold_ambient(map, n_list);
  const ComplexMatrix full = minus ? assemble_c_minus(n_list, c) : assemble_c_plus(n_list, c);
  const ComplexMatrix img = b_transpose(full, B);
  Blocks out;
  for (int a = 0; a < map.p; ++a) {
    auto [r, col] = c_plus_position(map.p, a);
    if (minus) std::swap(r, col);
    out.push_back(block(img, n_list, r, col));
  }
  return out;
}

Blocks add(const Blocks& x, const Blocks& y, double t) {
  Blocks out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + t * y[i];
  return out;
}

Blocks mul(const Blocks& x, const Blocks& y) {
  Blocks out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] * y[i];
  return out;
}

}  // namespace

double fold_c_violation(const FoldingMap& map, const std::vector<int>& n_list, const Blocks& c_plus,
                        const Blocks& c_minus) {
  double worst = 0.0;
  for (bool minus : {false, true}) {
    const Blocks& c = minus ? c_minus : c_plus;
    const Blocks img = b_image(map, n_list, c, minus);
    for (int a = 0; a < map.p; ++a)
      worst = std::max(worst, max_abs(img[idx(a)] - static_cast<double>(map.arc_eta[idx(a)]) * c[idx(a)]));
  }
  return worst;
}

void symmetrize_c(const FoldingMap& map, const std::vector<int>& n_list, Blocks& c_plus, Blocks& c_minus) {
  for (bool minus : {false, true}) {
    Blocks& c = minus ? c_minus : c_plus;
    for (int a = 0; a < map.p; ++a)
      if (!independent_arc(map, a)) c[idx(a)].setZero();
    // Fixed arcs: average with their own image.
    Blocks img = b_image(map, n_list, c, minus);
    for (int a = 0; a < map.p; ++a)
      if (map.fixed_arc(a))
        c[idx(a)] = 0.5 * (c[idx(a)] + static_cast<double>(map.arc_eta[idx(a)]) * img[idx(a)]);
    // Paired arcs: the dependent partner is the image of the independent one.
    img = b_image(map, n_list, c, minus);
    for (int a = 0; a < map.p; ++a)
      if (!independent_arc(map, a)) c[idx(a)] = static_cast<double>(map.arc_eta[idx(a)]) * img[idx(a)];
  }
}

TodaSystem fold_constraints(const FoldingMap& map, const TodaSystem& unfolded, double tol) {
  if (unfolded.equation_class != EquationClass::GeneralLinear)
    throw Error(ErrorCode::InvalidArgument, "only the general linear chain can be folded");
  if (unfolded.p() != map.p)
    throw Error(ErrorCode::IncompatibleBlocks, "the diagram and the system have different p");
  const auto& nl = unfolded.n_list;
  for (int a = 0; a < map.p; ++a) {
    const int b = map.node_pairing[idx(a)];
    if (nl[idx(a)] != nl[idx(b)])
      throw Error(ErrorCode::IncompatibleBlocks, "paired nodes have different sizes");
    const auto& kind = map.node_structure[idx(a)];
    if (kind == StructureKind::K && nl[idx(a)] % 2 != 0)
      throw Error(ErrorCode::IncompatibleBlocks, "a node fixed with K must have even size");
  }
  fold_ambient(map, nl);
  const double scale = 1.0 + [&] {
    double m = 0.0;
    for (const auto& c : unfolded.c_plus) m = std::max(m, max_abs(c));
    for (const auto& c : unfolded.c_minus) m = std::max(m, max_abs(c));
    return m;
  }();
  const double v = fold_c_violation(map, nl, unfolded.c_plus, unfolded.c_minus);
  if (v > tol * scale)
    throw Error(ErrorCode::IncompatibleBlocks,
                "C blocks are not symmetric under the fold (violation " + std::to_string(v) + ")");

  TodaSystem out;
  out.origin = SystemOrigin::Fold;
  out.family = fold_algebra(map.family);
  if (out.family == FamilyKind::gl && unfolded.family == FamilyKind::sl) out.family = FamilyKind::sl;
  out.L = unfolded.L;
  out.n_list = nl;
  out.equation_class = fold_class(map.pattern);
  out.c_plus = unfolded.c_plus;
  out.c_minus = unfolded.c_minus;
  out.constraints = fold_constraint_set(map);
  out.constraints.det_product_one = out.family == FamilyKind::sl;
  out.fold = map;
  return out;
}

ChainState random_constrained_state(const TodaSystem& folded, std::uint64_t seed, double scale) {
  std::mt19937_64 rng(seed);
  Blocks g, w;
  for (int a = 0; a < folded.variables(); ++a) {
    const int n = folded.n_list[idx(a)];
    ComplexMatrix x = random_matrix(rng, n, n);
    ComplexMatrix y = random_matrix(rng, n, n);
    if (const auto& kind = folded.constraints.gamma[idx(a)]) {
      x = 0.5 * (x - b_of(x, *kind));
      y = 0.5 * (y - b_of(y, *kind));
    }
    g.push_back(matrix_exp(scale * x));
    w.push_back(scale * y);
  }
  return {expand_state(folded, g), expand_algebra(folded, w)};
}

double fold_violation(const TodaSystem& folded, const ChainState& state) {
  const int s = folded.variables();
  Blocks g(state.gammas.begin(), state.gammas.begin() + s);
  Blocks w(state.ws.begin(), state.ws.begin() + s);
  const Blocks ge = expand_state(folded, g);
  const Blocks we = expand_algebra(folded, w);
  double worst = 0.0;
  for (int a = 0; a < folded.p(); ++a) {
    worst = std::max(worst, max_abs(ge[idx(a)] - state.gammas[idx(a)]));
    worst = std::max(worst, max_abs(we[idx(a)] - state.ws[idx(a)]));
    if (const auto& kind = folded.constraints.gamma[idx(a)]) {
      const auto& ga = state.gammas[idx(a)];
      const auto& wa = state.ws[idx(a)];
      worst = std::max(worst, max_abs(b_of(ga, *kind) * ga - ComplexMatrix::Identity(ga.rows(), ga.cols())));
      worst = std::max(worst, max_abs(b_of(wa, *kind) + wa));
    }
  }
  return worst;
}

double verify_fold_invariance(const FoldingMap& map, const TodaSystem& unfolded, const ChainState& state,
                              int steps, double dt) {
  const TodaSystem folded = fold_constraints(map, unfolded);
  auto field = [&](const ChainState& st) {
    return ChainState{mul(st.gammas, st.ws), rhs_chain(st.gammas, unfolded.c_plus, unfolded.c_minus)};
  };
  auto shift = [](const ChainState& st, const ChainState& k, double t) {
    return ChainState{add(st.gammas, k.gammas, t), add(st.ws, k.ws, t)};
  };
  ChainState st = state;
  double worst = fold_violation(folded, st);
  for (int i = 0; i < steps; ++i) {
    const ChainState k1 = field(st);
    const ChainState k2 = field(shift(st, k1, dt / 2));
    const ChainState k3 = field(shift(st, k2, dt / 2));
    const ChainState k4 = field(shift(st, k3, dt));
    st = shift(st, k1, dt / 6);
    st = shift(st, k2, dt / 3);
    st = shift(st, k3, dt / 3);
    st = shift(st, k4, dt / 6);
    worst = std::max(worst, fold_violation(folded, st));
  }
  return worst;
}

double fold_invariance_order(const FoldingMap& map, const TodaSystem& unfolded, const ChainState& state,
                             int steps, double dt) {
  const double coarse = verify_fold_invariance(map, unfolded, state, steps, dt);
  const double fine = verify_fold_invariance(map, unfolded, state, steps, dt / 2);
  return std::log2(coarse / fine);
}

int odd_fold_relabel(int s, int alpha) { return s - alpha + 1; }

double odd_fold_equivalence(const TodaSystem& sys, const Blocks& gammas) {
  if (!sys.fold || sys.fold->pattern != FoldPattern::OddMixed || sys.fold->node_one_fixed())
    throw Error(ErrorCode::InvalidArgument, "expected an odd fold with node s fixed");
  const auto& map = *sys.fold;
  const int s = map.s;
  const int p = map.p;
  if (static_cast<int>(gammas.size()) != s) throw Error(ErrorCode::ShapeMismatch, "expected s blocks");
  const StructureKind bs = *map.node_structure[idx(s - 1)];

  // Variant with node 1 fixed; labels 1-based in the comments, 0-based in code.
  FoldingMap mb = make_fold(p, FoldPattern::OddMixed, FoldFamily::OuterIII);
  mb.node_structure[0] = bs;
  TodaSystem other;
  other.origin = SystemOrigin::Fold;
  other.family = sys.family;
  other.equation_class = EquationClass::OddFold;
  other.n_list.assign(idx(p), 0);
  for (int a = 1; a <= s; ++a) {
    const int n = sys.n_list[idx(odd_fold_relabel(s, a) - 1)];
    other.n_list[idx(a - 1)] = n;
    other.n_list[idx(mb.node_pairing[idx(a - 1)])] = n;
  }
  other.fold = mb;
  other.constraints = fold_constraint_set(mb);

  // Gamma'_a = ^J(Gamma_{s-a+1}^{-1}). On the fixed node ^J(Gamma_s^{-1}) still
  // satisfies the K constraint; ^K would leave a stray diag(-1, 1) against the C's.
  Blocks g2;
  for (int a = 1; a <= s; ++a)
    g2.push_back(j_transpose(checked_inverse(gammas[idx(odd_fold_relabel(s, a) - 1)])));
  // C'_a = ^J C_{s-a} for a = 1..s; the remaining arcs are dependent and unused.
  Blocks cp2, cm2;
  for (int a = 0; a < p; ++a) {
    if (a >= 1 && a <= s) {
      cp2.push_back(j_transpose(sys.c_plus[idx(s - a)]));
      cm2.push_back(j_transpose(sys.c_minus[idx(s - a)]));
    } else {
      const auto [r, c] = c_plus_shape(other.n_list, a);
      cp2.push_back(ComplexMatrix::Zero(r, c));
      cm2.push_back(ComplexMatrix::Zero(c, r));
    }
  }
  const Blocks ra = rhs_blocks(sys, gammas);
  const Blocks rb = rhs_blocks(other, g2, cp2, cm2);
  double worst = 0.0;
  for (int a = 1; a <= s; ++a) {
    const ComplexMatrix& src = ra[idx(odd_fold_relabel(s, a) - 1)];
    worst = std::max(worst, max_abs(rb[idx(a - 1)] + j_transpose(src)));
  }
  return worst;
}

}  // namespace toda
