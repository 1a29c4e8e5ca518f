#pragma once

// Command implementations behind the C API. Each returns the process exit
// status (0 ok, 1 domain failure, 2 parse, 3 cap, 4 blow-up) and its report.

#include <cstddef>
#include <string>

#include "toda/error.hpp"
#include "toda/gradation.hpp"

namespace toda::commands {

struct Result {
  int status = 0;
  std::string text;
};

enum class Format { Text, Json, Latex };

int exit_status(ErrorCode code);

Result validate(const std::string& spec_json);
Result enumerate(const std::string& family, int n, int M, std::size_t max_count, Format format);
/// Input is a spec ({"spec", "L"} or a bare spec) or a system document.
Result describe(const std::string& document, Format format);
Result check(const std::string& spec_json, double tol);

/// Request: {"preset": name} or {"system": ..., "initial": ...}, plus optional
/// "grid" (object or "zmin,zmax,wmin,wmax,h-,h+"), "config", "real_form",
/// "output" (directory), "spec_reference". Writes field.csv and manifest.json
/// into the output directory and returns the manifest text.
Result simulate(const std::string& request_json);

/// Names accepted by simulate's "preset".
const char* preset_names();

}  // namespace toda::commands
