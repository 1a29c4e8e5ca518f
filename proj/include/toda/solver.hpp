#pragma once

// Goursat problem for Toda systems on a light-cone lattice. Data are given
// on the two characteristics through a corner of the grid; W = Gamma^{-1} d-Gamma
// lives on half-integer z- points and is advanced along z+ by d+W = rhs,
// after which Gamma is stepped multiplicatively, Gamma <- Gamma exp(h- W).

#include <functional>
#include <string>
#include <vector>

#include "toda/toda_builder.hpp"

namespace toda {

/// Corner through which the two data characteristics pass, named by its
/// (z-, z+) ends of the grid. Marching proceeds away from it.
enum class DataCorner { LowLow, LowHigh, HighLow, HighHigh };

const char* to_string(DataCorner corner);
DataCorner data_corner_from_string(const std::string& name);

struct Grid {
  double zm_min = 0.0, zm_max = 1.0;
  double zp_min = 0.0, zp_max = 1.0;
  double h_minus = 0.1, h_plus = 0.1;

  /// Number of intervals; throws InvalidArgument if a range is not a multiple of its step.
  int intervals_minus() const;
  int intervals_plus() const;
  double z_minus(int i) const { return zm_min + i * h_minus; }
  double z_plus(int j) const { return zp_min + j * h_plus; }
  double corner_minus(DataCorner c) const;
  double corner_plus(DataCorner c) const;

  /// Grid with `cells` intervals per side over [lo, hi]^2.
  static Grid square(double lo, double hi, int cells);
};

enum class Scheme { Midpoint, Euler };

struct SolverConfig {
  Scheme scheme = Scheme::Midpoint;
  double tol_constraint = 1e-8;
  double tol_invertibility = 1e8;
  double tol_corner = 1e-10;
  /// Output thinning: every stride-th lattice point is written out.
  int checkpoint_stride = 1;
};

using Blocks = std::vector<ComplexMatrix>;
using EdgeData = std::function<Blocks(double)>;

/// Boundary data for the independent Gamma's. C+ may depend on z+ only and
/// C- on z- only; when unset the system's constant blocks are used.
struct GoursatData {
  EdgeData along_minus;  // Gamma(z-, z+ of the corner)
  EdgeData along_plus;   // Gamma(z- of the corner, z+)
  DataCorner corner = DataCorner::LowLow;
  std::function<Blocks(double)> c_plus;
  std::function<Blocks(double)> c_minus;
};

enum class RunStatus { Ok, BlowUp };

struct FieldHistory {
  Grid grid;
  std::vector<int> sizes;       // block sizes of the stored Gamma's
  int stride = 0;               // complex entries per lattice point
  int points_minus = 0;         // lattice points along z-
  int points_plus = 0;          // rows filled along z+ (all of them unless halted)
  std::vector<Complex> data;    // row-major in (j, i)
  RunStatus status = RunStatus::Ok;
  std::string message;

  Blocks at(int i, int j) const;
  ComplexMatrix at(int i, int j, int alpha) const;
  bool complete() const { return status == RunStatus::Ok; }
};

/// Throws CornerMismatch, ConstraintViolation, ShapeMismatch; reports blow-up
/// (non-finite values or cond(Gamma) above tol_invertibility) as a halted history.
FieldHistory integrate(const TodaSystem& system, const GoursatData& data, const Grid& grid,
                       const SolverConfig& config = {});

/// Largest central-difference residual of d+(Gamma^{-1} d-Gamma) - rhs over
/// the interior, with W at half-integer z- points and d+ centred on rows.
double residual(const FieldHistory& history, const TodaSystem& system, const GoursatData& data);

/// Largest violation of the system's node constraints over the history.
double constraint_drift(const FieldHistory& history, const TodaSystem& system);

enum class RealForm { None, RealSplit, Compact };

/// Largest |conj(Gamma) - Gamma| (RealSplit) or |(Gamma^dagger)^{-1} - Gamma| (Compact).
double reality_preservation(const FieldHistory& history, RealForm form);

/// |prod_a det Gamma_a - 1| over the history (all p nodes).
double det_product_drift(const FieldHistory& history, const TodaSystem& system);

/// Scalar field sampled on the lattice, row-major in (j, i).
struct ScalarField {
  int points_minus = 0;
  int points_plus = 0;
  std::vector<double> values;
  double at(int i, int j) const { return values[static_cast<std::size_t>(j) * points_minus + i]; }
};

/// F = 2 arg Gamma for a unimodular scalar Gamma, unwrapped first along the
/// z+ seam at z-_min and then along each row in z-. Throws when |Gamma| strays
/// from 1 by more than tol.
ScalarField sine_gordon_reduce(const FieldHistory& history, double tol = 1e-6);

/// F = 2 log Gamma for a real positive scalar Gamma.
ScalarField sinh_gordon_reduce(const FieldHistory& history, double tol = 1e-6);

/// 4 arctan(exp(a z- + (2/a) z+)), a solution of d+d-F = 2 sin F.
double analytic_kink(double z_minus, double z_plus, double a);

/// Largest |F - exact| over the lattice.
double max_error(const ScalarField& f, const Grid& grid, const std::function<double(double, double)>& exact);

/// Reduced scalar systems: the p = 2 chain folded with ^J C = +C, C+ = 1, C- = 1/2,
/// so that d+W = (Gamma^2 - Gamma^{-2}) / 2.
TodaSystem scalar_reduction_system();

/// Boundary data of the kink (Gamma = exp(i F / 2)) on z- = z-_min and z+ = z+_max.
/// Marching from that corner keeps the linearization about both vacua oscillatory.
GoursatData kink_data(const Grid& grid, double a);

/// Boundary data Gamma = exp(F / 2) with F = amplitude * exp(a z- + (2/a) z+), low corner.
GoursatData sinh_gordon_data(const Grid& grid, double amplitude, double a);

/// Edges Gamma0 exp((z- - z-_0) X) and exp((z+ - z+_0) Y) Gamma0, blockwise,
/// with (z-_0, z+_0) the chosen corner.
GoursatData generator_data(const Grid& grid, const Blocks& corner,
                           const Blocks& minus_generator, const Blocks& plus_generator,
                           DataCorner at = DataCorner::LowLow);

}  // namespace toda
