#include "toda/solver.hpp"

#include <cmath>
#include <numbers>

#include "toda/error.hpp"
#include "toda/folding.hpp"

namespace toda {

namespace {

std::size_t idx(int a) { return static_cast<std::size_t>(a); }

int count_intervals(double lo, double hi, double h, const char* what) {
  if (!(h > 0.0) || !(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi))
    throw Error(ErrorCode::InvalidArgument, std::string("bad ") + what + " range or step");
  const double n = (hi - lo) / h;
  const double r = std::round(n);
  if (std::abs(n - r) > 1e-9 * std::max(1.0, n) || r < 1.0)
    throw Error(ErrorCode::InvalidArgument, std::string(what) + " range is not a multiple of the step");
  return static_cast<int>(r);
}

// ||G|| ||G^-1|| in the max-entry norm, or infinity when G is singular.
double condition(const ComplexMatrix& g) {
  if (!all_finite(g)) return std::numeric_limits<double>::infinity();
  if (g.size() == 1) {
    const double a = std::abs(g(0, 0));
    return a == 0.0 ? std::numeric_limits<double>::infinity() : std::max(a, 1.0 / a);
  }
  Eigen::FullPivLU<ComplexMatrix> lu(g);
  if (!lu.isInvertible()) return std::numeric_limits<double>::infinity();
  return max_abs(g) * max_abs(lu.inverse()) * static_cast<double>(g.rows());
}

Blocks c_plus_at(const TodaSystem& sys, const GoursatData& data, double zp) {
  return data.c_plus ? data.c_plus(zp) : sys.c_plus;
}

Blocks c_minus_at(const TodaSystem& sys, const GoursatData& data, double zm) {
  return data.c_minus ? data.c_minus(zm) : sys.c_minus;
}

Blocks half_step(const Blocks& a, const Blocks& b, double h) {
  Blocks w(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) w[k] = matrix_log(checked_inverse(a[k]) * b[k]) / h;
  return w;
}

class Store {
 public:
  explicit Store(FieldHistory& h) : h_(h) {}
  void put(int i, int j, const Blocks& g) {
    Complex* dst = h_.data.data() + (static_cast<std::size_t>(j) * h_.points_minus + idx(i)) * idx(h_.stride);
    for (const auto& m : g) {
      for (Eigen::Index c = 0; c < m.cols(); ++c)
        for (Eigen::Index r = 0; r < m.rows(); ++r) *dst++ = m(r, c);
    }
  }

 private:
  FieldHistory& h_;
};

}  // namespace

int Grid::intervals_minus() const { return count_intervals(zm_min, zm_max, h_minus, "z-"); }
int Grid::intervals_plus() const { return count_intervals(zp_min, zp_max, h_plus, "z+"); }

double Grid::corner_minus(DataCorner c) const {
  return c == DataCorner::HighLow || c == DataCorner::HighHigh ? zm_max : zm_min;
}

double Grid::corner_plus(DataCorner c) const {
  return c == DataCorner::LowHigh || c == DataCorner::HighHigh ? zp_max : zp_min;
}

const char* to_string(DataCorner corner) {
  switch (corner) {
    case DataCorner::LowLow: return "low_low";
    case DataCorner::LowHigh: return "low_high";
    case DataCorner::HighLow: return "high_low";
    case DataCorner::HighHigh: return "high_high";
  }
  return "low_low";
}

DataCorner data_corner_from_string(const std::string& name) {
  for (auto c : {DataCorner::LowLow, DataCorner::LowHigh, DataCorner::HighLow, DataCorner::HighHigh})
    if (name == to_string(c)) return c;
  throw Error(ErrorCode::Parse, "unknown corner '" + name + "'");
}

Grid Grid::square(double lo, double hi, int cells) {
  if (cells < 1) throw Error(ErrorCode::InvalidArgument, "need at least one cell");
  const double h = (hi - lo) / cells;
  return Grid{lo, hi, lo, hi, h, h};
}

ComplexMatrix FieldHistory::at(int i, int j, int alpha) const {
  if (i < 0 || i >= points_minus || j < 0 || j >= points_plus || alpha < 0 || alpha >= static_cast<int>(sizes.size()))
    throw Error(ErrorCode::InvalidArgument, "lattice index out of range");
  std::size_t off = (static_cast<std::size_t>(j) * points_minus + idx(i)) * idx(stride);
  for (int a = 0; a < alpha; ++a) off += idx(sizes[idx(a)] * sizes[idx(a)]);
  const int n = sizes[idx(alpha)];
  ComplexMatrix m(n, n);
  for (int c = 0; c < n; ++c)
    for (int r = 0; r < n; ++r) m(r, c) = data[off++];
  return m;
}

Blocks FieldHistory::at(int i, int j) const {
  Blocks out;
  for (int a = 0; a < static_cast<int>(sizes.size()); ++a) out.push_back(at(i, j, a));
  return out;
}

FieldHistory integrate(const TodaSystem& system, const GoursatData& data, const Grid& grid,
                       const SolverConfig& config) {
  if (!data.along_minus || !data.along_plus) throw Error(ErrorCode::InvalidArgument, "missing characteristic data");
  if (!(config.tol_constraint > 0) || !(config.tol_invertibility > 0) || !(config.tol_corner > 0))
    throw Error(ErrorCode::InvalidArgument, "tolerances must be positive");
  const int nm = grid.intervals_minus();
  const int np = grid.intervals_plus();
  const int s = system.variables();

  // Logical indices (u, v) run away from the data corner.
  const bool flip_m = data.corner == DataCorner::HighLow || data.corner == DataCorner::HighHigh;
  const bool flip_p = data.corner == DataCorner::LowHigh || data.corner == DataCorner::HighHigh;
  auto lat_i = [&](int u) { return flip_m ? nm - u : u; };
  auto lat_j = [&](int v) { return flip_p ? np - v : v; };
  const double orient = (flip_m != flip_p) ? -1.0 : 1.0;

  FieldHistory hist;
  hist.grid = grid;
  for (int a = 0; a < s; ++a) {
    hist.sizes.push_back(system.n_list[idx(a)]);
    hist.stride += system.n_list[idx(a)] * system.n_list[idx(a)];
  }
  hist.points_minus = nm + 1;
  hist.points_plus = np + 1;
  hist.data.assign(idx(hist.stride) * idx(nm + 1) * idx(np + 1), Complex(0.0, 0.0));
  Store store(hist);

  auto shape_check = [&](const Blocks& g) {
    if (static_cast<int>(g.size()) != s) throw Error(ErrorCode::ShapeMismatch, "wrong number of Gamma blocks");
    for (int a = 0; a < s; ++a)
      if (g[idx(a)].rows() != system.n_list[idx(a)] || g[idx(a)].cols() != system.n_list[idx(a)])
        throw Error(ErrorCode::ShapeMismatch, "Gamma block has the wrong size");
  };
  auto healthy = [&](const Blocks& g) {
    for (const auto& m : g)
      if (!(condition(m) <= config.tol_invertibility)) return false;
    return true;
  };
  // Rows completed so far are kept; the rest of the lattice is dropped.
  auto halt = [&](int rows, const std::string& why) {
    FieldHistory out = hist;
    out.status = RunStatus::BlowUp;
    out.message = why;
    out.points_plus = rows;
    out.data.assign(idx(hist.stride) * idx(nm + 1) * idx(rows), Complex(0.0, 0.0));
    for (int v = 0; v < rows; ++v) {
      const int j = lat_j(v);
      const int jj = flip_p ? rows - 1 - v : v;
      std::copy_n(hist.data.begin() + static_cast<std::ptrdiff_t>(idx(j) * idx(nm + 1) * idx(hist.stride)),
                  (nm + 1) * hist.stride,
                  out.data.begin() + static_cast<std::ptrdiff_t>(idx(jj) * idx(nm + 1) * idx(hist.stride)));
    }
    if (rows > 0) {
      if (flip_p) out.grid.zp_min = grid.z_plus(np - rows + 1);
      else out.grid.zp_max = grid.z_plus(rows - 1);
    }
    return out;
  };

  const double zm0 = grid.corner_minus(data.corner);
  const double zp0 = grid.corner_plus(data.corner);
  const Blocks c0 = data.along_minus(zm0);
  const Blocks c1 = data.along_plus(zp0);
  shape_check(c0);
  shape_check(c1);
  double corner = 0.0;
  for (int a = 0; a < s; ++a) corner = std::max(corner, max_abs(c0[idx(a)] - c1[idx(a)]));
  if (corner > config.tol_corner)
    throw Error(ErrorCode::CornerMismatch, "characteristic data disagree at the corner by " + std::to_string(corner));

  // Both characteristics, checked before anything is marched.
  std::vector<Blocks> row(idx(nm + 1));
  std::vector<Blocks> seam(idx(np + 1));
  for (int u = 0; u <= nm; ++u) row[idx(u)] = data.along_minus(grid.z_minus(lat_i(u)));
  for (int v = 0; v <= np; ++v) seam[idx(v)] = data.along_plus(grid.z_plus(lat_j(v)));
  for (const auto* edge : {&row, &seam}) {
    for (const auto& g : *edge) {
      shape_check(g);
      if (!healthy(g)) return halt(0, "initial Gamma is singular or ill-conditioned");
      const double v = state_violation(system, expand_state(system, g));
      if (v > config.tol_constraint)
        throw Error(ErrorCode::ConstraintViolation,
                    "initial data violate the constraints by " + std::to_string(v));
    }
  }

  auto rhs = [&](const Blocks& g, int u, int v) {
    return rhs_blocks(system, g, c_plus_at(system, data, grid.z_plus(lat_j(v))),
                      c_minus_at(system, data, grid.z_minus(lat_i(u))));
  };

  // w[u] = Gamma^{-1} times its derivative in the marching direction, at u + 1/2.
  std::vector<Blocks> w(idx(nm));
  for (int u = 0; u < nm; ++u) w[idx(u)] = half_step(row[idx(u)], row[idx(u + 1)], grid.h_minus);
  std::vector<Blocks> r_prev(idx(nm + 1)), r_cur(idx(nm + 1));
  for (int u = 0; u <= nm; ++u) {
    store.put(lat_i(u), lat_j(0), row[idx(u)]);
    r_prev[idx(u)] = rhs(row[idx(u)], u, 0);
  }

  const double hp = orient * grid.h_plus;
  for (int v = 0; v < np; ++v) {
    Blocks g = seam[idx(v + 1)];
    store.put(lat_i(0), lat_j(v + 1), g);
    r_cur[0] = rhs(g, 0, v + 1);
    for (int u = 0; u < nm; ++u) {
      Blocks& wu = w[idx(u)];
      for (int a = 0; a < s; ++a) {
        if (config.scheme == Scheme::Midpoint)
          wu[idx(a)] += (0.5 * hp) * (r_prev[idx(u + 1)][idx(a)] + r_cur[idx(u)][idx(a)]);
        else
          wu[idx(a)] += hp * r_prev[idx(u)][idx(a)];
        g[idx(a)] = g[idx(a)] * matrix_exp(grid.h_minus * wu[idx(a)]);
      }
      if (!healthy(g)) {
        return halt(v + 1, "Gamma lost invertibility near z- = " + std::to_string(grid.z_minus(lat_i(u + 1))) +
                               ", z+ = " + std::to_string(grid.z_plus(lat_j(v + 1))));
      }
      store.put(lat_i(u + 1), lat_j(v + 1), g);
      r_cur[idx(u + 1)] = rhs(g, u + 1, v + 1);
    }
    std::swap(r_prev, r_cur);
  }
  return hist;
}

double residual(const FieldHistory& h, const TodaSystem& system, const GoursatData& data) {
  const int nm = h.points_minus - 1;
  const int s = static_cast<int>(h.sizes.size());
  if (h.points_plus < 3 || nm < 1) return 0.0;
  const Grid& grid = h.grid;
  auto w_at = [&](int i, int j) { return half_step(h.at(i, j), h.at(i + 1, j), grid.h_minus); };
  auto rhs = [&](int i, int j) {
    return rhs_blocks(system, h.at(i, j), c_plus_at(system, data, grid.z_plus(j)),
                      c_minus_at(system, data, grid.z_minus(i)));
  };
  double worst = 0.0;
  for (int i = 0; i < nm; ++i) {
    Blocks below = w_at(i, 0);
    Blocks here = w_at(i, 1);
    for (int j = 1; j + 1 < h.points_plus; ++j) {
      const Blocks above = w_at(i, j + 1);
      const Blocks r0 = rhs(i, j);
      const Blocks r1 = rhs(i + 1, j);
      for (int a = 0; a < s; ++a) {
        const ComplexMatrix d = (above[idx(a)] - below[idx(a)]) / (2.0 * grid.h_plus) -
                                0.5 * (r0[idx(a)] + r1[idx(a)]);
        worst = std::max(worst, max_abs(d));
      }
      below = std::move(here);
      here = above;
    }
  }
  return worst;
}

double constraint_drift(const FieldHistory& h, const TodaSystem& system) {
  double worst = 0.0;
  for (int j = 0; j < h.points_plus; ++j)
    for (int i = 0; i < h.points_minus; ++i)
      worst = std::max(worst, state_violation(system, expand_state(system, h.at(i, j))));
  return worst;
}

double reality_preservation(const FieldHistory& h, RealForm form) {
  if (form == RealForm::None) return 0.0;
  double worst = 0.0;
  for (int j = 0; j < h.points_plus; ++j) {
    for (int i = 0; i < h.points_minus; ++i) {
      for (const auto& g : h.at(i, j)) {
        const ComplexMatrix img = form == RealForm::RealSplit ? ComplexMatrix(g.conjugate())
                                                              : checked_inverse(g.adjoint());
        worst = std::max(worst, max_abs(img - g));
      }
    }
  }
  return worst;
}

double det_product_drift(const FieldHistory& h, const TodaSystem& system) {
  double worst = 0.0;
  for (int j = 0; j < h.points_plus; ++j) {
    for (int i = 0; i < h.points_minus; ++i) {
      Complex prod(1.0, 0.0);
      for (const auto& g : expand_state(system, h.at(i, j))) prod *= determinant(g);
      worst = std::max(worst, std::abs(prod - 1.0));
    }
  }
  return worst;
}

namespace {

void require_scalar(const FieldHistory& h) {
  if (h.sizes.size() != 1 || h.sizes[0] != 1)
    throw Error(ErrorCode::ShapeMismatch, "scalar reduction needs a single 1x1 Gamma");
}

}  // namespace

ScalarField sine_gordon_reduce(const FieldHistory& h, double tol) {
  require_scalar(h);
  ScalarField f{h.points_minus, h.points_plus, {}};
  f.values.assign(idx(h.points_minus) * idx(h.points_plus), 0.0);
  auto phase = [&](int i, int j) {
    const Complex g = h.data[static_cast<std::size_t>(j) * h.points_minus + idx(i)];
    if (std::abs(std::abs(g) - 1.0) > tol)
      throw Error(ErrorCode::ConstraintViolation, "Gamma is off the unit circle by " + std::to_string(std::abs(std::abs(g) - 1.0)));
    return std::arg(g);
  };
  auto unwrap = [](double prev, double raw) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    return prev + std::remainder(raw - prev, two_pi);
  };
  std::vector<double> theta(f.values.size());
  for (int j = 0; j < h.points_plus; ++j) {
    const std::size_t base = static_cast<std::size_t>(j) * h.points_minus;
    theta[base] = j == 0 ? phase(0, 0) : unwrap(theta[base - idx(h.points_minus)], phase(0, j));
    for (int i = 1; i < h.points_minus; ++i) theta[base + idx(i)] = unwrap(theta[base + idx(i) - 1], phase(i, j));
  }
  for (std::size_t k = 0; k < theta.size(); ++k) f.values[k] = 2.0 * theta[k];
  return f;
}

ScalarField sinh_gordon_reduce(const FieldHistory& h, double tol) {
  require_scalar(h);
  ScalarField f{h.points_minus, h.points_plus, {}};
  f.values.reserve(h.data.size());
  for (const Complex& g : h.data) {
    if (std::abs(g.imag()) > tol || !(g.real() > 0.0))
      throw Error(ErrorCode::ConstraintViolation, "Gamma is not real positive");
    f.values.push_back(2.0 * std::log(g.real()));
  }
  return f;
}

double analytic_kink(double z_minus, double z_plus, double a) {
  if (a == 0.0) throw Error(ErrorCode::InvalidArgument, "kink slope must be non-zero");
  return 4.0 * std::atan(std::exp(a * z_minus + (2.0 / a) * z_plus));
}

double max_error(const ScalarField& f, const Grid& grid, const std::function<double(double, double)>& exact) {
  double worst = 0.0;
  for (int j = 0; j < f.points_plus; ++j)
    for (int i = 0; i < f.points_minus; ++i)
      worst = std::max(worst, std::abs(f.at(i, j) - exact(grid.z_minus(i), grid.z_plus(j))));
  return worst;
}

TodaSystem scalar_reduction_system() {
  const TodaSystem chain = build_periodic_chain(2, 1, 1.0, 0.5);
  return fold_constraints(make_fold(2, FoldPattern::EvenArcFixed, FoldFamily::Symplectic), chain);
}

GoursatData kink_data(const Grid& grid, double a) {
  auto gamma = [a](double zm, double zp) {
    return Blocks{ComplexMatrix::Constant(1, 1, std::polar(1.0, 0.5 * analytic_kink(zm, zp, a)))};
  };
  GoursatData d;
  d.corner = DataCorner::LowHigh;
  d.along_minus = [=](double zm) { return gamma(zm, grid.zp_max); };
  d.along_plus = [=](double zp) { return gamma(grid.zm_min, zp); };
  return d;
}

GoursatData sinh_gordon_data(const Grid& grid, double amplitude, double a) {
  if (a == 0.0) throw Error(ErrorCode::InvalidArgument, "slope must be non-zero");
  auto gamma = [=](double zm, double zp) {
    const double f = amplitude * std::exp(a * zm + (2.0 / a) * zp);
    return Blocks{ComplexMatrix::Constant(1, 1, Complex(std::exp(0.5 * f), 0.0))};
  };
  GoursatData d;
  d.along_minus = [=](double zm) { return gamma(zm, grid.zp_min); };
  d.along_plus = [=](double zp) { return gamma(grid.zm_min, zp); };
  return d;
}

GoursatData generator_data(const Grid& grid, const Blocks& corner, const Blocks& minus_generator,
                           const Blocks& plus_generator, DataCorner at) {
  if (corner.size() != minus_generator.size() || corner.size() != plus_generator.size())
    throw Error(ErrorCode::ShapeMismatch, "corner and generators have different block counts");
  for (std::size_t a = 0; a < corner.size(); ++a) {
    if (corner[a].rows() != corner[a].cols() || minus_generator[a].rows() != corner[a].rows() ||
        minus_generator[a].cols() != corner[a].cols() || plus_generator[a].rows() != corner[a].rows() ||
        plus_generator[a].cols() != corner[a].cols())
      throw Error(ErrorCode::ShapeMismatch, "generator blocks must match the corner blocks");
  }
  const double zm0 = grid.corner_minus(at);
  const double zp0 = grid.corner_plus(at);
  GoursatData d;
  d.corner = at;
  d.along_minus = [=](double zm) {
    Blocks out;
    for (std::size_t a = 0; a < corner.size(); ++a)
      out.push_back(corner[a] * matrix_exp((zm - zm0) * minus_generator[a]));
    return out;
  };
  d.along_plus = [=](double zp) {
    Blocks out;
    for (std::size_t a = 0; a < corner.size(); ++a)
      out.push_back(matrix_exp((zp - zp0) * plus_generator[a]) * corner[a]);
    return out;
  };
  return d;
}

}  // namespace toda
