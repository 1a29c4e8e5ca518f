#include "doctest.h"

#include "oracles.hpp"
#include "toda/error.hpp"
#include "toda/folding.hpp"

using namespace toda;

namespace {

const FoldFamily kFamilies[] = {FoldFamily::Orthogonal, FoldFamily::Symplectic, FoldFamily::OuterII,
                                FoldFamily::OuterIII};

// Outer II has no node-fixed fold and outer III no arc-fixed one.
bool admissible(FoldPattern pattern, FoldFamily family) {
  if (family == FoldFamily::OuterII) return pattern != FoldPattern::EvenNodeFixed;
  if (family == FoldFamily::OuterIII) return pattern != FoldPattern::EvenArcFixed;
  return true;
}

std::vector<FoldPattern> patterns_for(int p) {
  if (p % 2 == 1) return {FoldPattern::OddMixed};
  return {FoldPattern::EvenArcFixed, FoldPattern::EvenNodeFixed};
}

// Folded system over a random chain with all blocks of size r.
TodaSystem folded_chain(const FoldingMap& map, int r, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  TodaSystem chain = oracle::random_chain(rng, std::vector<int>(static_cast<std::size_t>(map.p), r));
  symmetrize_c(map, chain.n_list, chain.c_plus, chain.c_minus);
  return fold_constraints(map, chain);
}

}  // namespace

TEST_SUITE("folding") {

TEST_CASE("canonical folds are involutions with the expected fixed points") {
  for (int p = 2; p <= 8; ++p)
    for (auto pattern : patterns_for(p))
      for (auto family : kFamilies) {
        if (!admissible(pattern, family)) continue;
        const FoldingMap f = make_fold(p, pattern, family);
        int fixed_nodes = 0, fixed_arcs = 0;
        for (int a = 0; a < p; ++a) {
          REQUIRE(f.node_pairing[f.node_pairing[a]] == a);
          REQUIRE(f.arc_pairing[f.arc_pairing[a]] == a);
          fixed_nodes += f.node_pairing[a] == a;
          fixed_arcs += f.fixed_arc(a);
          REQUIRE(f.fixed_node(a) == (f.node_pairing[a] == a));
          REQUIRE((f.arc_epsilon[a] != 0) == f.fixed_arc(a));
        }
        CHECK(f.arc_pairing == induced_arc_pairing(f.node_pairing));
        switch (pattern) {
          case FoldPattern::EvenArcFixed:
            CHECK(f.s == p / 2);
            CHECK(fixed_nodes == 0);
            CHECK(fixed_arcs == 2);
            break;
          case FoldPattern::EvenNodeFixed:
            CHECK(f.s == (p + 2) / 2);
            CHECK(fixed_nodes == 2);
            CHECK(fixed_arcs == 0);
            break;
          case FoldPattern::OddMixed:
            CHECK(f.s == (p + 1) / 2);
            CHECK(fixed_nodes == 1);
            CHECK(fixed_arcs == 1);
            CHECK(f.node_one_fixed() == (family == FoldFamily::OuterIII));
            break;
        }
        // Independent nodes 0..s-1 reach every orbit.
        std::vector<bool> hit(static_cast<std::size_t>(p), false);
        for (int a = 0; a < f.s; ++a) hit[a] = hit[f.node_pairing[a]] = true;
        CHECK(std::count(hit.begin(), hit.end(), true) == p);
      }
  CHECK_THROWS_AS(make_fold(3, FoldPattern::EvenArcFixed, FoldFamily::Orthogonal), Error);
  CHECK_THROWS_AS(make_fold(4, FoldPattern::EvenArcFixed, FoldFamily::OuterIII), Error);
  CHECK_THROWS_AS(make_fold(4, FoldPattern::EvenNodeFixed, FoldFamily::OuterII), Error);
}

TEST_CASE("fold axes of the circle") {
  for (int p = 2; p <= 8; ++p) {
    const auto axes = enumerate_fold_axes(p);
    REQUIRE(axes.size() == static_cast<std::size_t>(p));
    for (const auto& ax : axes) {
      const auto ref = oracle::reflect(p, ax.j);
      CHECK(ax.fixed_nodes == ref.fixed_nodes);
      CHECK(ax.fixed_arcs == ref.fixed_arcs);
      const auto pattern = classify_reflection(ax);
      REQUIRE(pattern.has_value());
      const FoldingMap canonical = make_fold(p, *pattern, FoldFamily::Orthogonal);
      CHECK(rotation_to(ax.node_pairing, canonical.node_pairing).has_value());
    }
  }
}

TEST_CASE("arc between adjacent nodes") {
  CHECK(arc_between(5, 0, 1) == 1);
  CHECK(arc_between(5, 1, 0) == 1);
  CHECK(arc_between(5, 4, 0) == 0);
  CHECK_THROWS_AS(arc_between(5, 0, 2), Error);
}

TEST_CASE("symmetrized C satisfies the fold and unsymmetrized C is refused") {
  std::mt19937_64 rng(3);
  for (int p = 2; p <= 6; ++p)
    for (auto pattern : patterns_for(p))
      for (auto family : kFamilies) {
        if (!admissible(pattern, family)) continue;
        const FoldingMap f = make_fold(p, pattern, family);
        TodaSystem chain = oracle::random_chain(rng, std::vector<int>(static_cast<std::size_t>(p), 2));
        CHECK(fold_c_violation(f, chain.n_list, chain.c_plus, chain.c_minus) > 1e-3);
        CHECK_THROWS_AS(fold_constraints(f, chain), Error);
        symmetrize_c(f, chain.n_list, chain.c_plus, chain.c_minus);
        CHECK(fold_c_violation(f, chain.n_list, chain.c_plus, chain.c_minus) < 1e-14);
        const TodaSystem folded = fold_constraints(f, chain);
        CHECK(folded.origin == SystemOrigin::Fold);
        CHECK(folded.equation_class == fold_class(pattern));
        CHECK(folded.family == fold_algebra(family));
        CHECK(folded.variables() == f.s);
      }
}

TEST_CASE("fold ambient is built from the parts") {
  const FoldingMap f = make_fold(4, FoldPattern::EvenNodeFixed, FoldFamily::Symplectic);
  const ComplexMatrix b = fold_ambient(f, {2, 2, 2, 2});
  CHECK(b.rows() == 8);
  CHECK(max_abs(b * b.inverse() - ComplexMatrix::Identity(8, 8)) < 1e-14);
  CHECK(std::min(max_abs(b.transpose() - b), max_abs(b.transpose() + b)) == 0.0);
}

TEST_CASE("constrained states sit on the fold and the flow stays there") {
  for (int p = 2; p <= 6; ++p)
    for (auto pattern : patterns_for(p))
      for (auto family : kFamilies) {
        if (!admissible(pattern, family)) continue;
        const FoldingMap f = make_fold(p, pattern, family);
        const TodaSystem folded = folded_chain(f, 2, 40 + p);
        const ChainState st = random_constrained_state(folded, 5, 0.3);
        CHECK(fold_violation(folded, st) < 1e-12);
        CHECK(state_violation(folded, st.gammas) < 1e-12);
        const TodaSystem chain = oracle::unfolded_of(folded);
        const double coarse = verify_fold_invariance(f, chain, st, 20, 0.02);
        if (coarse > 1e-12) CHECK(fold_invariance_order(f, chain, st, 20, 0.02) >= 1.9);
      }
}

TEST_CASE("fold violation detects a state off the fold") {
  const FoldingMap f = make_fold(4, FoldPattern::EvenArcFixed, FoldFamily::Orthogonal);
  const TodaSystem folded = folded_chain(f, 2, 7);
  ChainState st = random_constrained_state(folded, 1, 0.3);
  st.gammas[3] = st.gammas[3] * 1.1;
  CHECK(fold_violation(folded, st) > 1e-3);
}

TEST_CASE("the two odd folds are equivalent") {
  for (int p = 3; p <= 7; p += 2) {
    const int s = (p + 1) / 2;
    for (int a = 1; a <= s; ++a) CHECK(odd_fold_relabel(s, odd_fold_relabel(s, a)) == a);
    for (auto family : {FoldFamily::Orthogonal, FoldFamily::Symplectic}) {
      const TodaSystem folded = folded_chain(make_fold(p, FoldPattern::OddMixed, family), 2, 90 + p);
      const ChainState st = random_constrained_state(folded, 3, 0.3);
      const std::vector<ComplexMatrix> indep(st.gammas.begin(), st.gammas.begin() + s);
      CHECK(odd_fold_equivalence(folded, indep) <= 1e-12);
    }
  }
}

TEST_CASE("spec-derived folds are the canonical ones") {
  for (const auto& spec : oracle::all_specs({FamilyKind::gl, FamilyKind::so, FamilyKind::sp}, 6, 6)) {
    if (std::any_of(spec.k_list.begin(), spec.k_list.end(), [](int k) { return k != 1; })) continue;
    if (spec.type == GradationType::GlInner || spec.p() < 2) continue;
    if (spec.type == GradationType::GlOuterII && spec.p() != spec.N()) continue;
    const TodaSystem sys = build_system(spec, 1);
    REQUIRE(sys.fold.has_value());
    CHECK(*sys.fold == make_fold(spec.p(), oracle::expected_pattern(spec), oracle::expected_family(spec)));
  }
}

TEST_CASE("pattern and family names round trip") {
  for (auto p : {FoldPattern::EvenArcFixed, FoldPattern::EvenNodeFixed, FoldPattern::OddMixed})
    CHECK(fold_pattern_from_string(to_string(p)) == p);
  for (auto f : kFamilies) CHECK(fold_family_from_string(to_string(f)) == f);
}

}
