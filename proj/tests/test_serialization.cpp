#include "doctest.h"

#include <fstream>
#include <sstream>

#include "oracles.hpp"
#include "toda/error.hpp"
#include "toda/serialization.hpp"

using namespace toda;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::InvalidArgument;
}

bool same_system(const TodaSystem& a, const TodaSystem& b) {
  if (a.n_list != b.n_list || a.family != b.family || a.L != b.L || a.equation_class != b.equation_class ||
      a.constraints != b.constraints || a.fold != b.fold || a.spec != b.spec || a.origin != b.origin)
    return false;
  for (std::size_t i = 0; i < a.c_plus.size(); ++i)
    if (max_abs(a.c_plus[i] - b.c_plus[i]) > 0.0 || max_abs(a.c_minus[i] - b.c_minus[i]) > 0.0) return false;
  return true;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE("serialization") {

TEST_CASE("specs round trip") {
  for (const auto& s : oracle::all_specs({FamilyKind::gl, FamilyKind::sl, FamilyKind::so, FamilyKind::sp}, 4, 6))
    REQUIRE(spec_from_json(json::parse(to_json(s).dump())) == s);
}

TEST_CASE("malformed specs are parse errors") {
  CHECK(code_of([] { parse_json("{\"n\": "); }) == ErrorCode::Parse);
  CHECK(code_of([] { spec_from_json(json{{"family", "gl"}}); }) == ErrorCode::Parse);
  CHECK(code_of([] { spec_from_json(json{{"family", "xx"}, {"n", 1}, {"type", "gl_inner"}, {"M", 1},
                                         {"n_list", {1}}, {"k_list", json::array()}}); }) == ErrorCode::Parse);
}

TEST_CASE("matrices accept real entries") {
  const ComplexMatrix m = matrix_from_json(json::parse("[[1, 2], [[0, 1], 3]]"));
  CHECK(m(0, 1) == Complex(2.0, 0.0));
  CHECK(m(1, 0) == Complex(0.0, 1.0));
  CHECK(max_abs(matrix_from_json(to_json(m)) - m) == 0.0);
  CHECK(code_of([] { matrix_from_json(json::parse("[[1, 2], [3]]")); }) == ErrorCode::Parse);
}

TEST_CASE("systems round trip") {
  std::vector<TodaSystem> systems{build_periodic_chain(3, 2, 1.0, 0.5, FamilyKind::sl), scalar_reduction_system(),
                                  build_simplest(FamilyKind::gl, ComplexMatrix::Identity(2, 2),
                                                 2.0 * ComplexMatrix::Identity(2, 2))};
  for (const auto& s : oracle::all_specs({FamilyKind::gl, FamilyKind::so, FamilyKind::sp}, 4, 4)) {
    try {
      systems.push_back(build_system(s, 1));
    } catch (const Error&) {
    }
  }
  REQUIRE(systems.size() > 20);
  for (const auto& sys : systems) {
    const TodaSystem back = system_from_json(json::parse(to_json(sys).dump()));
    CAPTURE(to_json(sys).dump());
    CHECK(same_system(sys, back));
  }
}

TEST_CASE("system shorthands") {
  const TodaSystem chain = system_from_json(json::parse(R"({"chain": {"p": 3, "r": 2, "family": "sl"}})"));
  CHECK(chain.p() == 3);
  CHECK(chain.constraints.det_product_one);
  const TodaSystem from_spec = system_from_json(json::parse(
      R"({"spec": {"family": "gl", "n": 3, "type": "gl_inner", "M": 3, "n_list": [1, 1, 1], "k_list": [1, 1]}, "L": 1})"));
  CHECK(from_spec.origin == SystemOrigin::Spec);
  CHECK(from_spec.variables() == 3);
}

TEST_CASE("folds round trip") {
  for (int p = 2; p <= 7; ++p)
    for (auto pattern : {FoldPattern::EvenArcFixed, FoldPattern::EvenNodeFixed, FoldPattern::OddMixed}) {
      if ((pattern == FoldPattern::OddMixed) != (p % 2 == 1)) continue;
      for (auto family : {FoldFamily::Orthogonal, FoldFamily::Symplectic, FoldFamily::OuterII, FoldFamily::OuterIII}) {
        if (family == FoldFamily::OuterIII && pattern == FoldPattern::EvenArcFixed) continue;
        if (family == FoldFamily::OuterII && pattern == FoldPattern::EvenNodeFixed) continue;
        const FoldingMap f = make_fold(p, pattern, family);
        CHECK(fold_from_json(json::parse(to_json(f).dump())) == f);
      }
    }
}

TEST_CASE("grids and configs") {
  const Grid g = parse_grid("-5,5,0,1,0.5,0.25");
  CHECK(g.zm_min == -5.0);
  CHECK(g.zp_max == 1.0);
  CHECK(g.h_plus == 0.25);
  CHECK(code_of([] { parse_grid("0,1,0,1"); }) == ErrorCode::Parse);
  CHECK(code_of([] { parse_grid("0,1,0,1,a,0.1"); }) == ErrorCode::Parse);
  const Grid back = grid_from_json(to_json(g));
  CHECK(back.zm_min == g.zm_min);
  CHECK(back.h_minus == g.h_minus);
  SolverConfig c;
  c.scheme = Scheme::Euler;
  c.checkpoint_stride = 3;
  const SolverConfig cb = config_from_json(to_json(c));
  CHECK(cb.scheme == Scheme::Euler);
  CHECK(cb.checkpoint_stride == 3);
  CHECK(cb.tol_invertibility == c.tol_invertibility);
}

TEST_CASE("manifests round trip") {
  RunManifest m;
  m.command = "simulate";
  m.spec_reference = "preset:sine-gordon-kink";
  m.spec = nullptr;
  m.grid = Grid::square(-5, 5, 8);
  m.outputs = {"out/field.csv", "out/manifest.json"};
  m.exit_status = 4;
  m.message = "halted";
  m.summary = {{"residual", 1e-3}, {"rows_completed", 3}};
  CHECK(manifest_from_json(json::parse(to_json(m).dump())) == m);
}

TEST_CASE("field CSV layout") {
  const Grid grid{0.0, 0.4, 0.0, 0.2, 0.1, 0.1};
  const TodaSystem sys = build_periodic_chain(2, 2, 0.0, 1.0);
  const Blocks id(2, ComplexMatrix::Identity(2, 2)), zero(2, ComplexMatrix::Zero(2, 2));
  const FieldHistory h = integrate(sys, generator_data(grid, id, zero, zero), grid);
  std::ostringstream os;
  write_field_csv(os, h);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "z_minus,z_plus,alpha,block_row,block_col,re,im");
  int rows = 0, max_alpha = -1;
  while (std::getline(in, line)) {
    ++rows;
    int commas = 0;
    for (char c : line) commas += c == ',';
    REQUIRE(commas == 6);
    std::istringstream f(line);
    std::string cell;
    for (int k = 0; k < 3; ++k) std::getline(f, cell, ',');
    max_alpha = std::max(max_alpha, std::stoi(cell));
  }
  CHECK(rows == 5 * 3 * 2 * 4);
  CHECK(max_alpha == 1);
  std::ostringstream thin;
  write_field_csv(thin, h, 2);
  const std::string text = thin.str();
  CHECK(std::count(text.begin(), text.end(), '\n') == 1 + 3 * 2 * 2 * 4);
}

TEST_CASE("index tables in LaTeX") {
  std::string all;
  const auto specs = enumerate_specs(FamilyKind::gl, 3, 3);
  for (std::size_t i = 0; i < specs.size(); ++i) all += (i ? "\n" : "") + table_to_latex(specs[i]);
  CHECK(all == slurp(std::string(TODA_TEST_DATA) + "/enumerate_gl_3_3.tex"));
}

TEST_CASE("system equations in LaTeX") {
  const std::string tex = system_to_latex(build_periodic_chain(3, 1));
  CHECK(tex.find("\\begin{align*}") != std::string::npos);
  CHECK(tex.find("\\partial_+(\\Gamma_{1}^{-1}\\partial_-\\Gamma_{1})") != std::string::npos);
  CHECK(tex.find("C_{-0}\\Gamma_{3}^{-1}C_{+0}\\Gamma_{1}") != std::string::npos);
}

}
