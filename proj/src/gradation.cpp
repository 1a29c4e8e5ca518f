#include "toda/gradation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>
#include <tuple>

#include "toda/error.hpp"

namespace toda {

namespace {

int mod(int a, int m) {
  const int r = a % m;
  return r < 0 ? r + m : r;
}

int sum(const std::vector<int>& v) { return std::accumulate(v.begin(), v.end(), 0); }

Complex root_of_unity(double numerator, int denominator) {
  const double t = 2.0 * std::numbers::pi * numerator / denominator;
  return {std::cos(t), std::sin(t)};
}

bool is_so_sp(FamilyKind f) { return f == FamilyKind::so || f == FamilyKind::sp; }

}  // namespace

const char* to_string(GradationType type) {
  switch (type) {
    case GradationType::GlInner: return "gl_inner";
    case GradationType::SoSpTypeI: return "sosp_I";
    case GradationType::SoSpTypeII: return "sosp_II";
    case GradationType::GlOuterII: return "gl_outer_II";
    case GradationType::GlOuterIII: return "gl_outer_III";
  }
  return "?";
}

GradationType gradation_type_from_string(const std::string& name) {
  if (name == "gl_inner") return GradationType::GlInner;
  if (name == "sosp_I") return GradationType::SoSpTypeI;
  if (name == "sosp_II") return GradationType::SoSpTypeII;
  if (name == "gl_outer_II") return GradationType::GlOuterII;
  if (name == "gl_outer_III") return GradationType::GlOuterIII;
  throw Error(ErrorCode::Parse, "unknown gradation type '" + name + "'");
}

bool is_outer(GradationType type) {
  return type == GradationType::GlOuterII || type == GradationType::GlOuterIII;
}

int GradationSpec::block_offset(int alpha) const {
  int off = 0;
  for (int a = 0; a < alpha; ++a) off += n_list[static_cast<std::size_t>(a)];
  return off;
}

std::vector<Violation> validate_spec(const GradationSpec& spec) {
  std::vector<Violation> out;
  auto add = [&out](const char* name, std::string msg) { out.push_back({name, std::move(msg)}); };

  const int p = spec.p();
  if (spec.n <= 0) add("positive_n", "n must be positive");
  if (spec.M <= 0) add("positive_M", "M must be positive");
  if (p < 1) add("n_list_size", "n_list must be nonempty");
  if (p >= 1 && static_cast<int>(spec.k_list.size()) != p - 1)
    add("k_list_size", "k_list must have p - 1 entries");
  for (int v : spec.n_list)
    if (v <= 0) add("positive_n", "block sizes must be positive");
  for (int v : spec.k_list)
    if (v <= 0) add("positive_k", "k_alpha must be positive");
  if (spec.phase_offset != 0.0 && spec.phase_offset != 0.5)
    add("phase_value", "phase_offset must be 0 or 0.5");
  if (p >= 1 && sum(spec.n_list) != spec.n) add("n_sum", "block sizes must sum to n");
  const bool gl_type = spec.type == GradationType::GlInner || is_outer(spec.type);
  if (gl_type == is_so_sp(spec.family))
    add("family_type", std::string("type ") + to_string(spec.type) + " does not apply to " +
                           to_string(spec.family));
  if (spec.family == FamilyKind::sp && spec.n % 2 != 0) add("sp_even_n", "sp requires even n");
  if (!out.empty()) return out;

  const auto& n = spec.n_list;
  const auto& k = spec.k_list;
  const int ksum = sum(k);
  auto nn = [&n](int alpha) { return n[static_cast<std::size_t>(alpha - 1)]; };
  auto kk = [&k](int alpha) { return k[static_cast<std::size_t>(alpha - 1)]; };

  auto check_palindromes = [&] {
    for (int a = 1; a <= p; ++a)
      if (nn(p - a + 1) != nn(a)) {
        add("n_palindrome", "n_{p-a+1} = n_a fails at a = " + std::to_string(a));
        break;
      }
    for (int a = 1; a <= p - 1; ++a)
      if (kk(p - a) != kk(a)) {
        add("k_palindrome", "k_{p-a} = k_a fails at a = " + std::to_string(a));
        break;
      }
  };
  auto check_tail_palindromes = [&] {
    for (int a = 2; a <= p; ++a)
      if (nn(p - a + 2) != nn(a)) {
        add("n_palindrome_tail", "n_{p-a+2} = n_a fails at a = " + std::to_string(a));
        break;
      }
    for (int a = 2; a <= p - 1; ++a)
      if (kk(p - a + 1) != kk(a)) {
        add("k_palindrome_tail", "k_{p-a+1} = k_a fails at a = " + std::to_string(a));
        break;
      }
  };
  auto check_phase = [&](int base) {
    const double expected = (base % 2 == 0) ? 0.0 : 0.5;
    if (spec.phase_offset != expected)
      add("phase_parity", "phase_offset must be " + std::string(expected == 0.0 ? "0" : "0.5") +
                              " when the residual " + std::to_string(base) + " is " +
                              (base % 2 == 0 ? "even" : "odd"));
  };
  auto check_phase_zero = [&] {
    if (spec.phase_offset != 0.0) add("phase_parity", "phase_offset must be 0 for this type");
  };

  switch (spec.type) {
    case GradationType::GlInner:
      if (ksum >= spec.M) add("k_sum_lt_M", "sum of k_alpha must be below M");
      check_phase_zero();
      break;

    case GradationType::SoSpTypeI:
      if (ksum >= spec.M) add("k_sum_lt_M", "sum of k_alpha must be below M");
      check_palindromes();
      if (ksum < spec.M) check_phase(spec.M - ksum);
      if (spec.family == FamilyKind::sp && p % 2 == 1 && nn((p + 1) / 2) % 2 != 0)
        add("sp_middle_even", "the middle block of an sp gradation must be even");
      break;

    case GradationType::SoSpTypeII:
      if (p % 2 != 0 || p < 2) {
        add("p_even", "type II requires an even number of blocks");
        break;
      }
      check_tail_palindromes();
      if (ksum + kk(1) != spec.M) add("k_sum_plus_k1_eq_M", "sum of k_alpha plus k_1 must equal M");
      check_phase_zero();
      if (spec.family == FamilyKind::sp && (nn(1) % 2 != 0 || nn(p / 2 + 1) % 2 != 0))
        add("sp_fixed_even", "both self-paired blocks of an sp gradation must be even");
      break;

    case GradationType::GlOuterII:
      if (spec.M % 2 != 0) {
        add("M_even", "outer gradations require even M = 2N");
        break;
      }
      if (ksum >= spec.N()) add("k_sum_lt_N", "sum of k_alpha must be below N = M/2");
      check_palindromes();
      if (ksum < spec.N()) check_phase(spec.N() - ksum);
      if (p >= 2 && spec.n % 2 != 0) add("n_even", "outer type II with p >= 2 requires even n");
      break;

    case GradationType::GlOuterIII:
      if (spec.M % 2 != 0) {
        add("M_even", "outer gradations require even M = 2N");
        break;
      }
      if (p < 2) {
        add("p_min", "outer type III requires p >= 2");
        break;
      }
      check_tail_palindromes();
      if (ksum + kk(1) != spec.N())
        add("k_sum_plus_k1_eq_N", "sum of k_alpha plus k_1 must equal N = M/2");
      if ((spec.n - nn(1)) % 2 != 0) add("n_minus_n1_even", "n - n_1 must be even");
      check_phase_zero();
      break;
  }
  return out;
}

void require_valid(const GradationSpec& spec) {
  const auto v = validate_spec(spec);
  if (!v.empty()) throw Error(ErrorCode::InvalidSpec, v.front().constraint + ": " + v.front().message);
}

std::vector<int> compute_m(const GradationSpec& spec) {
  require_valid(spec);
  const int p = spec.p();
  const int ksum = sum(spec.k_list);
  int mp = 1;
  switch (spec.type) {
    case GradationType::GlInner:
      mp = 1;
      break;
    case GradationType::SoSpTypeI:
      mp = (spec.M - ksum + 1) / 2;
      break;
    case GradationType::GlOuterII:
      mp = (spec.N() - ksum + 1) / 2;
      break;
    case GradationType::SoSpTypeII:
    case GradationType::GlOuterIII:
      mp = spec.k_list.front();
      break;
  }
  std::vector<int> m(static_cast<std::size_t>(p));
  m[static_cast<std::size_t>(p - 1)] = mp;
  for (int a = p - 2; a >= 0; --a)
    m[static_cast<std::size_t>(a)] = m[static_cast<std::size_t>(a + 1)] + spec.k_list[static_cast<std::size_t>(a)];
  return m;
}

ComplexMatrix build_h(const GradationSpec& spec) {
  const auto m = compute_m(spec);
  if (spec.type == GradationType::GlOuterII && spec.p() == 1)
    return ComplexMatrix::Identity(spec.n, spec.n);
  ComplexMatrix h = ComplexMatrix::Zero(spec.n, spec.n);
  int off = 0;
  for (int a = 0; a < spec.p(); ++a) {
    const Complex mu = root_of_unity(m[static_cast<std::size_t>(a)] + spec.phase_offset, spec.M);
    for (int i = 0; i < spec.n_list[static_cast<std::size_t>(a)]; ++i) h(off + i, off + i) = mu;
    off += spec.n_list[static_cast<std::size_t>(a)];
  }
  return h;
}

ComplexMatrix ambient_structure(const GradationSpec& spec) {
  require_valid(spec);
  const int n = spec.n;
  const int n1 = spec.n_list.front();
  const StructureKind sk = spec.family == FamilyKind::sp ? StructureKind::K : StructureKind::J;
  switch (spec.type) {
    case GradationType::GlInner:
      return {};
    case GradationType::SoSpTypeI:
      return structure_matrix(sk, n);
    case GradationType::SoSpTypeII:
      return block_diagonal({structure_matrix(sk, n1), structure_matrix(sk, n - n1)});
    case GradationType::GlOuterII:
      return structure_matrix(spec.p() == 1 ? StructureKind::J : StructureKind::K, n);
    case GradationType::GlOuterIII:
      return block_diagonal({structure_matrix(StructureKind::J, n1),
                             structure_matrix(StructureKind::K, n - n1)});
  }
  return {};
}

AlgebraFamily spec_algebra(const GradationSpec& spec) {
  if (is_so_sp(spec.family)) return AlgebraFamily(spec.family, spec.n, ambient_structure(spec));
  return AlgebraFamily(spec.family, spec.n);
}

Automorphism build_automorphism(const GradationSpec& spec) {
  Automorphism aut;
  aut.outer = is_outer(spec.type);
  aut.h = build_h(spec);
  aut.h_inv = aut.h.diagonal().cwiseInverse().asDiagonal();
  if (aut.outer) aut.B = ambient_structure(spec);
  aut.M = spec.M;
  return aut;
}

ComplexMatrix apply_automorphism(const Automorphism& aut, const ComplexMatrix& x) {
  if (x.rows() != aut.h.rows() || x.cols() != aut.h.cols())
    throw Error(ErrorCode::ShapeMismatch, "apply_automorphism: size mismatch");
  if (aut.outer) return -(aut.h * b_transpose(x, aut.B) * aut.h_inv);
  return aut.h * x * aut.h_inv;
}

ComplexMatrix grading_component(const ComplexMatrix& x, int k, const Automorphism& aut) {
  ComplexMatrix acc = ComplexMatrix::Zero(x.rows(), x.cols());
  ComplexMatrix ajx = x;
  for (int j = 0; j < aut.M; ++j) {
    acc += root_of_unity(-static_cast<double>(j) * k, aut.M) * ajx;
    if (j + 1 < aut.M) ajx = apply_automorphism(aut, ajx);
  }
  return acc / static_cast<double>(aut.M);
}

int GradingIndexTable::at_signed(int alpha, int beta, int sign) const {
  if (!outer) throw Error(ErrorCode::InvalidArgument, "signed residues exist only for outer tables");
  const int r = at(alpha, beta);
  return sign < 0 ? r : mod(r + modulus / 2, modulus);
}

bool GradingIndexTable::carries(int alpha, int beta, int k) const {
  const int kk = mod(k, modulus);
  if (!outer) return at(alpha, beta) == kk;
  return at_signed(alpha, beta, -1) == kk || at_signed(alpha, beta, +1) == kk;
}

GradingIndexTable block_index_table(const GradationSpec& spec) {
  const auto m = compute_m(spec);
  GradingIndexTable t;
  t.outer = is_outer(spec.type);
  t.modulus = spec.M;
  t.p = spec.p();
  t.residue.resize(static_cast<std::size_t>(t.p * t.p));
  for (int a = 0; a < t.p; ++a)
    for (int b = 0; b < t.p; ++b)
      t.residue[static_cast<std::size_t>(a * t.p + b)] =
          mod(m[static_cast<std::size_t>(a)] - m[static_cast<std::size_t>(b)], spec.M);
  return t;
}

int grade_dimension(const GradationSpec& spec, int k) {
  const auto fam = spec_algebra(spec);
  const auto aut = build_automorphism(spec);
  const int n = spec.n;
  Eigen::MatrixXcd span(n * n, n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      ComplexMatrix e = ComplexMatrix::Zero(n, n);
      e(i, j) = 1.0;
      const ComplexMatrix g = grading_component(fam.project(e), k, aut);
      span.col(i * n + j) = Eigen::Map<const Eigen::VectorXcd>(g.data(), n * n);
    }
  // Absolute cutoff: an empty grade projects to rounding noise, which a
  // threshold relative to the largest pivot would count as full rank.
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(span);
  return static_cast<int>((qr.matrixR().diagonal().cwiseAbs().array() > 1e-9).count());
}

namespace {

void compositions(int n, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (n == 0) {
    out.push_back(cur);
    return;
  }
  for (int first = 1; first <= n; ++first) {
    cur.push_back(first);
    compositions(n - first, cur, out);
    cur.pop_back();
  }
}

void k_tuples(int len, int budget, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == len) {
    out.push_back(cur);
    return;
  }
  for (int k = 1; k <= budget; ++k) {
    cur.push_back(k);
    k_tuples(len, budget - k, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<GradationSpec> enumerate_specs(FamilyKind family, int n, int M, std::size_t max_count) {
  if (n <= 0 || M <= 0) throw Error(ErrorCode::InvalidArgument, "n and M must be positive");
  const std::vector<GradationType> types =
      is_so_sp(family)
          ? std::vector<GradationType>{GradationType::SoSpTypeI, GradationType::SoSpTypeII}
          : std::vector<GradationType>{GradationType::GlInner, GradationType::GlOuterII,
                                       GradationType::GlOuterIII};
  const std::size_t work_cap = max_count * 64;
  std::size_t work = 0;

  std::vector<std::vector<int>> comps;
  std::vector<int> cur;
  compositions(n, cur, comps);

  std::vector<GradationSpec> out;
  for (const auto& nl : comps) {
    const int p = static_cast<int>(nl.size());
    std::vector<std::vector<int>> ks;
    std::vector<int> kcur;
    k_tuples(p - 1, M, kcur, ks);
    for (const auto& kl : ks)
      for (auto type : types)
        for (double phase : {0.0, 0.5}) {
          if (++work > work_cap) throw Error(ErrorCode::ResourceLimit, "enumeration search space exceeds cap");
          GradationSpec s;
          s.family = family;
          s.n = n;
          s.type = type;
          s.M = M;
          s.n_list = nl;
          s.k_list = kl;
          s.phase_offset = phase;
          if (!validate_spec(s).empty()) continue;
          out.push_back(std::move(s));
          if (out.size() > max_count)
            throw Error(ErrorCode::ResourceLimit, "enumeration exceeds cap of " + std::to_string(max_count));
        }
  }
  std::sort(out.begin(), out.end(), [](const GradationSpec& a, const GradationSpec& b) {
    return std::make_tuple(a.p(), std::cref(a.n_list), std::cref(a.k_list), a.type) <
           std::make_tuple(b.p(), std::cref(b.n_list), std::cref(b.k_list), b.type);
  });
  return out;
}

}  // namespace toda
