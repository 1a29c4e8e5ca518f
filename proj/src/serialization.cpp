#include "toda/serialization.hpp"

#include <cstdio>
#include <ostream>
#include <sstream>

#include "toda/error.hpp"
#include "toda/folding.hpp"

namespace toda {

namespace {

std::size_t idx(int a) { return static_cast<std::size_t>(a); }

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::Parse, what); }

const json& field(const json& j, const char* key) {
  if (!j.is_object()) bad("expected a JSON object");
  auto it = j.find(key);
  if (it == j.end()) bad(std::string("missing field '") + key + "'");
  return *it;
}

int get_int(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number_integer()) bad(std::string("field '") + key + "' must be an integer");
  return v.get<int>();
}

double get_double(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number()) bad(std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

double get_double_or(const json& j, const char* key, double fallback) {
  return j.contains(key) ? get_double(j, key) : fallback;
}

std::string get_string(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_string()) bad(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

std::vector<int> get_ints(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_array()) bad(std::string("field '") + key + "' must be an array");
  std::vector<int> out;
  for (const auto& e : v) {
    if (!e.is_number_integer()) bad(std::string("field '") + key + "' must hold integers");
    out.push_back(e.get<int>());
  }
  return out;
}

// Enum parsers throw InvalidArgument on unknown names; in documents that is a parse error.
template <class F>
auto parse_name(F f, const std::string& name) {
  try {
    return f(name);
  } catch (const Error& e) {
    bad(e.what());
  }
}

StructureKind structure_from_string(const std::string& s) {
  if (s == "I") return StructureKind::Identity;
  if (s == "J") return StructureKind::J;
  if (s == "K") return StructureKind::K;
  bad("unknown structure matrix '" + s + "'");
}

json blocks_to_json(const std::vector<ComplexMatrix>& blocks) {
  json out = json::array();
  for (const auto& b : blocks) out.push_back(to_json(b));
  return out;
}

std::vector<ComplexMatrix> blocks_from_json(const json& j) {
  if (!j.is_array()) bad("expected an array of blocks");
  std::vector<ComplexMatrix> out;
  for (const auto& b : j) out.push_back(matrix_from_json(b));
  return out;
}

json optional_kind(const std::optional<StructureKind>& k) { return k ? json(to_string(*k)) : json(nullptr); }

std::optional<StructureKind> optional_kind_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  if (!j.is_string()) bad("structure must be null or a string");
  return structure_from_string(j.get<std::string>());
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    bad(std::string("malformed JSON: ") + e.what());
  }
}

json to_json(const GradationSpec& s) {
  json j;
  j["family"] = to_string(s.family);
  j["n"] = s.n;
  j["type"] = to_string(s.type);
  j["M"] = s.M;
  j["n_list"] = s.n_list;
  j["k_list"] = s.k_list;
  if (s.phase_offset == 0.0) j["phase_offset"] = 0;
  else j["phase_offset"] = s.phase_offset;
  return j;
}

GradationSpec spec_from_json(const json& j) {
  GradationSpec s;
  s.family = parse_name(family_from_string, get_string(j, "family"));
  s.n = get_int(j, "n");
  s.type = parse_name(gradation_type_from_string, get_string(j, "type"));
  s.M = get_int(j, "M");
  s.n_list = get_ints(j, "n_list");
  s.k_list = j.contains("k_list") ? get_ints(j, "k_list") : std::vector<int>{};
  s.phase_offset = get_double_or(j, "phase_offset", 0.0);
  return s;
}

json to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(row);
  }
  return rows;
}

ComplexMatrix matrix_from_json(const json& j) {
  if (!j.is_array()) bad("a matrix is an array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  Eigen::Index cols = -1;
  for (const auto& row : j) {
    if (!row.is_array()) bad("a matrix row must be an array");
    if (cols < 0) cols = static_cast<Eigen::Index>(row.size());
    if (static_cast<Eigen::Index>(row.size()) != cols) bad("ragged matrix");
  }
  ComplexMatrix m(rows, std::max<Eigen::Index>(cols, 0));
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      const json& e = j[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
      if (e.is_number()) {
        m(r, c) = Complex(e.get<double>(), 0.0);
      } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
        m(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
      } else {
        bad("matrix entries are [re, im] pairs or reals");
      }
    }
  }
  return m;
}

json to_json(const FoldingMap& map) {
  json j;
  j["p"] = map.p;
  j["s"] = map.s;
  j["pattern"] = to_string(map.pattern);
  j["family"] = to_string(map.family);
  j["nodes"] = json::array();
  for (int a = 0; a < map.p; ++a)
    j["nodes"].push_back({{"index", a},
                          {"pair", map.node_pairing[idx(a)]},
                          {"structure", optional_kind(map.node_structure[idx(a)])}});
  j["arcs"] = json::array();
  for (int a = 0; a < map.p; ++a)
    j["arcs"].push_back({{"index", a},
                         {"pair", map.arc_pairing[idx(a)]},
                         {"epsilon", map.arc_epsilon[idx(a)]},
                         {"eta", map.arc_eta[idx(a)]}});
  j["parts"] = json::array();
  for (const auto& part : map.parts)
    j["parts"].push_back({{"first", part.first}, {"last", part.last}, {"kind", to_string(part.kind)}});
  return j;
}

FoldingMap fold_from_json(const json& j) {
  FoldingMap m;
  m.p = get_int(j, "p");
  m.s = get_int(j, "s");
  m.pattern = parse_name(fold_pattern_from_string, get_string(j, "pattern"));
  m.family = parse_name(fold_family_from_string, get_string(j, "family"));
  const json& nodes = field(j, "nodes");
  const json& arcs = field(j, "arcs");
  if (m.p < 2 || !nodes.is_array() || !arcs.is_array() || static_cast<int>(nodes.size()) != m.p ||
      static_cast<int>(arcs.size()) != m.p)
    bad("a fold needs p >= 2 nodes and arcs");
  m.node_pairing.assign(idx(m.p), 0);
  m.node_structure.assign(idx(m.p), std::nullopt);
  m.arc_pairing.assign(idx(m.p), 0);
  m.arc_epsilon.assign(idx(m.p), 0);
  m.arc_eta.assign(idx(m.p), 0);
  for (const auto& n : nodes) {
    const int a = get_int(n, "index");
    if (a < 0 || a >= m.p) bad("node index out of range");
    m.node_pairing[idx(a)] = get_int(n, "pair");
    m.node_structure[idx(a)] = optional_kind_from(field(n, "structure"));
  }
  for (const auto& n : arcs) {
    const int a = get_int(n, "index");
    if (a < 0 || a >= m.p) bad("arc index out of range");
    m.arc_pairing[idx(a)] = get_int(n, "pair");
    m.arc_epsilon[idx(a)] = get_int(n, "epsilon");
    m.arc_eta[idx(a)] = get_int(n, "eta");
  }
  for (const auto& pairing : {m.node_pairing, m.arc_pairing})
    for (int a = 0; a < m.p; ++a) {
      const int b = pairing[idx(a)];
      if (b < 0 || b >= m.p || pairing[idx(b)] != a) bad("pairings must be involutions of 0..p-1");
    }
  if (m.arc_pairing != induced_arc_pairing(m.node_pairing)) bad("arc pairing does not match the node pairing");
  for (const auto& part : field(j, "parts"))
    m.parts.push_back({get_int(part, "first"), get_int(part, "last"), structure_from_string(get_string(part, "kind"))});
  return m;
}

json to_json(const TodaSystem& sys) {
  json j;
  j["origin"] = to_string(sys.origin);
  j["spec"] = sys.spec ? to_json(*sys.spec) : json(nullptr);
  j["family"] = to_string(sys.family);
  j["L"] = sys.L;
  j["n_list"] = sys.n_list;
  j["class"] = to_string(sys.equation_class);
  json gamma = json::array();
  for (const auto& k : sys.constraints.gamma) gamma.push_back(optional_kind(k));
  json rules = json::array();
  for (const auto& r : sys.constraints.c_rule)
    rules.push_back(r ? json{{"kind", to_string(r->kind)}, {"epsilon", r->epsilon}} : json(nullptr));
  j["constraints"] = {{"gamma", gamma}, {"c_rule", rules}, {"det_product_one", sys.constraints.det_product_one}};
  j["c_plus"] = blocks_to_json(sys.c_plus);
  j["c_minus"] = blocks_to_json(sys.c_minus);
  j["fold"] = sys.fold ? to_json(*sys.fold) : json(nullptr);
  return j;
}

namespace {

TodaSystem chain_from_json(const json& c) {
  const FamilyKind fam = c.contains("family") ? parse_name(family_from_string, get_string(c, "family")) : FamilyKind::gl;
  return build_periodic_chain(get_int(c, "p"), get_int(c, "r"), get_double_or(c, "c_plus_scale", 1.0),
                              get_double_or(c, "c_minus_scale", 1.0), fam);
}

// The general linear chain carrying the given C blocks.
TodaSystem unfolded_chain(FamilyKind family, const std::vector<int>& n_list, std::vector<ComplexMatrix> cp,
                          std::vector<ComplexMatrix> cm) {
  TodaSystem sys;
  sys.origin = SystemOrigin::Chain;
  sys.family = family == FamilyKind::sl ? FamilyKind::sl : FamilyKind::gl;
  sys.n_list = n_list;
  sys.equation_class = EquationClass::GeneralLinear;
  sys.c_plus = std::move(cp);
  sys.c_minus = std::move(cm);
  sys.constraints.gamma.assign(n_list.size(), std::nullopt);
  sys.constraints.c_rule.assign(n_list.size(), std::nullopt);
  return sys;
}

void check_c_shapes(const std::vector<int>& n_list, const std::vector<ComplexMatrix>& cp,
                    const std::vector<ComplexMatrix>& cm) {
  const int p = static_cast<int>(n_list.size());
  if (static_cast<int>(cp.size()) != p || static_cast<int>(cm.size()) != p)
    throw Error(ErrorCode::ShapeMismatch, "expected one C+ and one C- block per arc");
  for (int a = 0; a < p; ++a) {
    const auto [r, c] = c_plus_shape(n_list, a);
    if (cp[idx(a)].rows() != r || cp[idx(a)].cols() != c || cm[idx(a)].rows() != c || cm[idx(a)].cols() != r)
      throw Error(ErrorCode::ShapeMismatch, "C block " + std::to_string(a) + " has the wrong shape");
  }
}

}  // namespace

TodaSystem system_from_json(const json& j) {
  if (!j.is_object()) bad("a system is a JSON object");
  if (j.contains("chain")) return chain_from_json(j["chain"]);
  if (j.contains("simplest")) {
    const json& s = j["simplest"];
    const FamilyKind fam = parse_name(family_from_string, get_string(s, "family"));
    const bool outer = s.contains("outer") && s["outer"].is_boolean() && s["outer"].get<bool>();
    return build_simplest(fam, matrix_from_json(field(s, "c_plus")), matrix_from_json(field(s, "c_minus")), outer);
  }
  std::vector<ComplexMatrix> cp, cm;
  if (j.contains("c_plus")) cp = blocks_from_json(j["c_plus"]);
  if (j.contains("c_minus")) cm = blocks_from_json(j["c_minus"]);
  if (cp.empty() != cm.empty()) bad("give both c_plus and c_minus or neither");

  const std::string origin = j.contains("origin") ? get_string(j, "origin") : "spec";
  const SystemOrigin o = parse_name(system_origin_from_string, origin);
  const int L = j.contains("L") ? get_int(j, "L") : 1;
  switch (o) {
    case SystemOrigin::Spec: {
      const json& spec = field(j, "spec");
      if (spec.is_null()) bad("a spec system needs its spec");
      return build_system(spec_from_json(spec), L, cp, cm);
    }
    case SystemOrigin::Chain: {
      const FamilyKind fam = parse_name(family_from_string, get_string(j, "family"));
      const auto n_list = get_ints(j, "n_list");
      if (n_list.size() < 2) bad("a chain needs at least two nodes");
      for (int n : n_list)
        if (n < 1) bad("block sizes must be positive");
      check_c_shapes(n_list, cp, cm);
      TodaSystem sys = unfolded_chain(fam, n_list, cp, cm);
      sys.L = L;
      sys.constraints.det_product_one = fam == FamilyKind::sl;
      if (j.contains("spec") && !j["spec"].is_null()) sys.spec = spec_from_json(j["spec"]);
      return sys;
    }
    case SystemOrigin::Simplest: {
      const FamilyKind fam = parse_name(family_from_string, get_string(j, "family"));
      if (cp.size() != 1 || cm.size() != 1) bad("the simplest system has one C+ and one C- block");
      bool outer = false;
      if (j.contains("constraints")) {
        const json& g = field(j["constraints"], "gamma");
        outer = g.is_array() && g.size() == 1 && !g[0].is_null();
      }
      TodaSystem sys = build_simplest(fam, cp[0], cm[0], outer);
      sys.L = L;
      return sys;
    }
    case SystemOrigin::Fold: {
      const FamilyKind fam = parse_name(family_from_string, get_string(j, "family"));
      const FoldingMap map = fold_from_json(field(j, "fold"));
      const auto n_list = get_ints(j, "n_list");
      if (static_cast<int>(n_list.size()) != map.p) bad("the fold and n_list disagree on p");
      check_c_shapes(n_list, cp, cm);
      TodaSystem sys = fold_constraints(map, unfolded_chain(fam, n_list, cp, cm));
      sys.L = L;
      if (j.contains("spec") && !j["spec"].is_null()) sys.spec = spec_from_json(j["spec"]);
      return sys;
    }
  }
  bad("unknown system origin");
}

json to_json(const Grid& g) {
  return {{"z_minus", {g.zm_min, g.zm_max}}, {"z_plus", {g.zp_min, g.zp_max}},
          {"h_minus", g.h_minus}, {"h_plus", g.h_plus}};
}

Grid grid_from_json(const json& j) {
  const json& zm = field(j, "z_minus");
  const json& zp = field(j, "z_plus");
  if (!zm.is_array() || zm.size() != 2 || !zp.is_array() || zp.size() != 2) bad("grid ranges are [lo, hi] pairs");
  for (const json* r : {&zm, &zp})
    if (!(*r)[0].is_number() || !(*r)[1].is_number()) bad("grid ranges must be numbers");
  Grid g{zm[0].get<double>(), zm[1].get<double>(), zp[0].get<double>(), zp[1].get<double>(),
         get_double(j, "h_minus"), get_double(j, "h_plus")};
  g.intervals_minus();
  g.intervals_plus();
  return g;
}

Grid parse_grid(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) bad("bad number '" + item + "' in grid");
    } catch (const std::logic_error&) {
      bad("bad number '" + item + "' in grid");
    }
  }
  if (v.size() != 6) bad("grid needs six comma-separated numbers");
  Grid g{v[0], v[1], v[2], v[3], v[4], v[5]};
  g.intervals_minus();
  g.intervals_plus();
  return g;
}

json to_json(const SolverConfig& c) {
  return {{"scheme", c.scheme == Scheme::Midpoint ? "midpoint" : "euler"},
          {"tol_constraint", c.tol_constraint},
          {"tol_invertibility", c.tol_invertibility},
          {"tol_corner", c.tol_corner},
          {"checkpoint_stride", c.checkpoint_stride}};
}

SolverConfig config_from_json(const json& j) {
  SolverConfig c;
  if (!j.is_object()) bad("config must be an object");
  if (j.contains("scheme")) {
    const std::string s = get_string(j, "scheme");
    if (s == "midpoint") c.scheme = Scheme::Midpoint;
    else if (s == "euler") c.scheme = Scheme::Euler;
    else bad("unknown scheme '" + s + "'");
  }
  c.tol_constraint = get_double_or(j, "tol_constraint", c.tol_constraint);
  c.tol_invertibility = get_double_or(j, "tol_invertibility", c.tol_invertibility);
  c.tol_corner = get_double_or(j, "tol_corner", c.tol_corner);
  if (j.contains("checkpoint_stride")) c.checkpoint_stride = get_int(j, "checkpoint_stride");
  if (!(c.tol_constraint > 0) || !(c.tol_invertibility > 0) || !(c.tol_corner > 0) || c.checkpoint_stride < 1)
    throw Error(ErrorCode::InvalidArgument, "tolerances and stride must be positive");
  return c;
}

GoursatData initial_from_json(const json& j, const TodaSystem& system, const Grid& grid) {
  const auto corner = blocks_from_json(field(j, "corner"));
  const int s = system.variables();
  if (static_cast<int>(corner.size()) != s)
    throw Error(ErrorCode::ShapeMismatch, "initial data needs " + std::to_string(s) + " Gamma blocks");
  auto generators = [&](const char* key) {
    if (!j.contains(key)) {
      std::vector<ComplexMatrix> zero;
      for (const auto& c : corner) zero.push_back(ComplexMatrix::Zero(c.rows(), c.cols()));
      return zero;
    }
    return blocks_from_json(j[key]);
  };
  const DataCorner at = j.contains("data_corner") ? parse_name(data_corner_from_string, get_string(j, "data_corner"))
                                                  : DataCorner::LowLow;
  return generator_data(grid, corner, generators("minus_generator"), generators("plus_generator"), at);
}

RealForm real_form_from_string(const std::string& name) {
  if (name == "none") return RealForm::None;
  if (name == "real_split") return RealForm::RealSplit;
  if (name == "compact") return RealForm::Compact;
  bad("unknown real form '" + name + "'");
}

const char* to_string(RealForm form) {
  switch (form) {
    case RealForm::None: return "none";
    case RealForm::RealSplit: return "real_split";
    case RealForm::Compact: return "compact";
  }
  return "none";
}

bool RunManifest::operator==(const RunManifest& o) const {
  return to_json(*this) == to_json(o);
}

json to_json(const RunManifest& m) {
  json j;
  j["command"] = m.command;
  j["spec_reference"] = m.spec_reference;
  j["spec"] = m.spec;
  j["grid"] = to_json(m.grid);
  j["config"] = to_json(m.config);
  j["outputs"] = m.outputs;
  j["exit_status"] = m.exit_status;
  j["message"] = m.message;
  j["summary"] = m.summary;
  return j;
}

RunManifest manifest_from_json(const json& j) {
  RunManifest m;
  m.command = get_string(j, "command");
  m.spec_reference = get_string(j, "spec_reference");
  m.spec = field(j, "spec");
  m.grid = grid_from_json(field(j, "grid"));
  m.config = config_from_json(field(j, "config"));
  for (const auto& o : field(j, "outputs")) {
    if (!o.is_string()) bad("outputs are paths");
    m.outputs.push_back(o.get<std::string>());
  }
  m.exit_status = get_int(j, "exit_status");
  m.message = get_string(j, "message");
  const json& s = field(j, "summary");
  if (!s.is_object()) bad("summary is an object");
  for (auto it = s.begin(); it != s.end(); ++it) {
    if (!it.value().is_number()) bad("summary values are numbers");
    m.summary[it.key()] = it.value().get<double>();
  }
  return m;
}

void write_field_csv(std::ostream& out, const FieldHistory& h, int stride) {
  if (stride < 1) throw Error(ErrorCode::InvalidArgument, "stride must be positive");
  out << "z_minus,z_plus,alpha,block_row,block_col,re,im\n";
  std::string line;
  for (int j = 0; j < h.points_plus; j += stride) {
    for (int i = 0; i < h.points_minus; i += stride) {
      const std::string zm = fmt(h.grid.z_minus(i));
      const std::string zp = fmt(h.grid.z_plus(j));
      for (int a = 0; a < static_cast<int>(h.sizes.size()); ++a) {
        const ComplexMatrix g = h.at(i, j, a);
        for (Eigen::Index r = 0; r < g.rows(); ++r)
          for (Eigen::Index c = 0; c < g.cols(); ++c)
            out << zm << ',' << zp << ',' << a << ',' << r << ',' << c << ',' << fmt(g(r, c).real()) << ','
                << fmt(g(r, c).imag()) << '\n';
      }
    }
  }
}

// LaTeX ------------------------------------------------------------------

namespace {

std::string gam(int node) { return "\\Gamma_{" + std::to_string(node + 1) + "}"; }
std::string gam_inv(int node) { return gam(node) + "^{-1}"; }
std::string cplus(int arc) { return "C_{+" + std::to_string(arc) + "}"; }
std::string cminus(int arc) { return "C_{-" + std::to_string(arc) + "}"; }
std::string btr(StructureKind k, const std::string& x) { return "{}^{" + std::string(to_string(k)) + "}" + x; }

struct LatexLines {
  int p;
  std::string out(int a, const std::string& next) const {
    const int arc = (a + 1) % p;
    return "-" + gam_inv(a) + cplus(arc) + next + cminus(arc);
  }
  std::string in(int a, const std::string& prev_inv) const {
    return cminus(a) + prev_inv + cplus(a) + gam(a);
  }
};

std::string rhs_latex(const TodaSystem& sys, int a) {
  const int p = sys.p();
  const LatexLines l{p};
  if (!sys.fold) return l.out(a, gam((a + 1) % p)) + " + " + l.in(a, gam_inv((a + p - 1) % p));
  const auto& map = *sys.fold;
  const int s = map.s;
  auto plain = [&] { return l.out(a, gam(a + 1)) + " + " + l.in(a, gam_inv(a - 1)); };
  auto first_fixed = [&] {
    const std::string x = gam_inv(0) + cplus(1) + gam(1) + cminus(1);
    return "-" + x + " + " + btr(*map.node_structure[0], "(" + x + ")");
  };
  auto last_fixed = [&] {
    const std::string y = cminus(s - 1) + gam_inv(s - 2) + cplus(s - 1) + gam(s - 1);
    return "-" + btr(*map.node_structure[idx(s - 1)], "(" + y + ")") + " + " + y;
  };
  auto last_arc = [&](const std::string& prev_inv) {
    return l.out(s - 1, btr(StructureKind::J, "(" + gam_inv(s - 1) + ")")) + " + " + l.in(s - 1, prev_inv);
  };
  const std::string wrap = btr(StructureKind::J, gam(0));
  switch (map.pattern) {
    case FoldPattern::EvenArcFixed:
      if (a == s - 1) return last_arc(s == 1 ? wrap : gam_inv(s - 2));
      if (a == 0) return l.out(0, gam(1)) + " + " + l.in(0, wrap);
      return plain();
    case FoldPattern::OddMixed:
      if (!map.node_one_fixed()) {
        if (a == 0) return l.out(0, gam(1)) + " + " + l.in(0, wrap);
        if (a == s - 1) return last_fixed();
        return plain();
      }
      if (a == 0) return first_fixed();
      if (a == s - 1) return last_arc(gam_inv(s - 2));
      return plain();
    case FoldPattern::EvenNodeFixed:
      if (a == 0) return first_fixed();
      if (a == s - 1) return last_fixed();
      return plain();
  }
  return {};
}

std::string list_text(const std::vector<int>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + ")";
}

}  // namespace

std::string system_to_latex(const TodaSystem& sys) {
  std::ostringstream os;
  os << "% " << to_string(sys.equation_class) << ", " << to_string(sys.family) << ", n = " << list_text(sys.n_list)
     << ", L = " << sys.L << "\n";
  os << "\\begin{align*}\n";
  const int vars = sys.variables();
  for (int a = 0; a < vars; ++a) {
    os << "  \\partial_+(" << gam_inv(a) << "\\partial_-" << gam(a) << ") &= " << rhs_latex(sys, a);
    os << (a + 1 < vars ? " \\\\\n" : "\n");
  }
  os << "\\end{align*}\n";

  std::vector<std::string> cons;
  for (int a = 0; a < vars; ++a)
    if (const auto& k = sys.constraints.gamma[idx(a)]) cons.push_back(btr(*k, gam(a)) + " = " + gam_inv(a));
  for (int a = 0; a < sys.p(); ++a)
    if (const auto& r = sys.constraints.c_rule[idx(a)])
      cons.push_back(btr(r->kind, "C_{\\pm " + std::to_string(a) + "}") + " = " + (r->epsilon < 0 ? "-" : "") +
                     "C_{\\pm " + std::to_string(a) + "}");
  if (sys.fold) {
    for (int a = vars; a < sys.p(); ++a) {
      const int b = sys.fold->node_pairing[idx(a)];
      cons.push_back(gam(a) + " = {}^{J}(" + gam_inv(b) + ")");
    }
  }
  if (sys.constraints.det_product_one) {
    std::string prod;
    for (int a = 0; a < sys.p(); ++a) prod += "\\det " + gam(a) + (a + 1 < sys.p() ? "\\," : "");
    cons.push_back(prod + " = 1");
  }
  if (!cons.empty()) {
    os << "\\[\n";
    for (std::size_t k = 0; k < cons.size(); ++k) os << "  " << cons[k] << (k + 1 < cons.size() ? ", \\quad\n" : "\n");
    os << "\\]\n";
  }
  return os.str();
}

std::string table_to_latex(const GradationSpec& spec) {
  const GradingIndexTable t = block_index_table(spec);
  std::ostringstream os;
  os << "% " << to_string(spec.family) << " " << to_string(spec.type) << ", n = " << spec.n << ", M = " << spec.M
     << ", n_list = " << list_text(spec.n_list) << ", k_list = " << list_text(spec.k_list);
  if (spec.phase_offset != 0.0) os << ", phase 1/2";
  os << "\n\\[\n  \\left(\\begin{array}{" << std::string(idx(t.p), 'c') << "}\n";
  for (int a = 0; a < t.p; ++a) {
    os << "    ";
    for (int b = 0; b < t.p; ++b) {
      if (b) os << " & ";
      if (t.outer) os << t.at_signed(a, b, -1) << "^{-}/" << t.at_signed(a, b, 1) << "^{+}";
      else os << t.at(a, b);
    }
    os << (a + 1 < t.p ? " \\\\\n" : "\n");
  }
  os << "  \\end{array}\\right)\n\\]\n";
  return os.str();
}

}  // namespace toda
