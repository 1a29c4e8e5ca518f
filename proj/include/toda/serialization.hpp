#pragma once

// JSON, CSV and LaTeX forms of specs, systems, fold diagrams and runs.
// Malformed documents raise Error(ErrorCode::Parse).

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "toda/circle.hpp"
#include "toda/gradation.hpp"
#include "toda/solver.hpp"
#include "toda/toda_builder.hpp"

namespace toda {

using json = nlohmann::json;

json to_json(const GradationSpec& spec);
GradationSpec spec_from_json(const json& j);

/// Nested rows of [re, im] pairs.
json to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const json& j);

json to_json(const FoldingMap& map);
FoldingMap fold_from_json(const json& j);

json to_json(const TodaSystem& system);
/// Either a full system document, or {"spec": ..., "L": ...} with optional
/// "c_plus"/"c_minus", or {"chain": {"p", "r", "c_plus_scale", "c_minus_scale", "family"}}.
/// Systems that come from a spec are rebuilt from it, so their C blocks are re-validated.
TodaSystem system_from_json(const json& j);

json to_json(const Grid& grid);
Grid grid_from_json(const json& j);
/// "zmin,zmax,wmin,wmax,h-,h+" with w the z+ range.
Grid parse_grid(const std::string& text);

json to_json(const SolverConfig& config);
SolverConfig config_from_json(const json& j);

/// Goursat data from {"corner": [...], "minus_generator": [...], "plus_generator": [...],
/// "data_corner": "low_low"}; generators default to zero.
GoursatData initial_from_json(const json& j, const TodaSystem& system, const Grid& grid);

RealForm real_form_from_string(const std::string& name);
const char* to_string(RealForm form);

struct RunManifest {
  std::string command;
  std::string spec_reference;
  json spec;  // null when the run did not start from a spec
  Grid grid;
  SolverConfig config;
  std::vector<std::string> outputs;
  int exit_status = 0;
  std::string message;
  std::map<std::string, double> summary;

  bool operator==(const RunManifest& other) const;
};

json to_json(const RunManifest& manifest);
RunManifest manifest_from_json(const json& j);

/// Columns z_minus, z_plus, alpha, block_row, block_col, re, im; every
/// stride-th lattice point in each direction.
void write_field_csv(std::ostream& out, const FieldHistory& history, int stride = 1);

std::string system_to_latex(const TodaSystem& system);
std::string table_to_latex(const GradationSpec& spec);

/// Parses JSON text, mapping syntax errors to ErrorCode::Parse.
json parse_json(const std::string& text);

}  // namespace toda
