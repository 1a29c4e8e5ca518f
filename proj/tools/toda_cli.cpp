#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "toda/toda_c.h"

namespace {

using json = nlohmann::json;

constexpr int kParse = 2;

std::optional<std::string> slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Prints the command's report and returns its status as the exit code.
int finish(toda_status st, char*& out) {
  if (out) {
    const bool report = st == TODA_OK || st == TODA_DOMAIN || st == TODA_BLOWUP;
    std::fputs(out, report ? stdout : stderr);
    toda_string_free(out);
    out = nullptr;
  } else if (st != TODA_OK) {
    std::fprintf(stderr, "%s\n", toda_last_error());
  }
  return st > TODA_BLOWUP ? 1 : static_cast<int>(st);
}

int unreadable(const std::string& path) {
  std::fprintf(stderr, "cannot read %s\n", path.c_str());
  return kParse;
}

toda_format format_of(bool as_json, bool as_latex) {
  if (as_latex) return TODA_FORMAT_LATEX;
  if (as_json) return TODA_FORMAT_JSON;
  return TODA_FORMAT_TEXT;
}

std::size_t enumeration_cap() {
  const char* env = std::getenv("TODA_MAX_ENUM");
  if (!env || !*env) return 100000;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (*end != '\0' || v == 0) return 100000;
  return static_cast<std::size_t>(v);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Toda field equations: gradations, block systems, folds and light-cone runs"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(toda_version()));

  std::string spec_file, system_file, preset, grid, output, family, scheme = "midpoint";
  int n = 0, M = 0, L = 1, stride = 1;
  double tol = 0.0;
  bool as_json = false, as_latex = false;

  auto* validate = app.add_subcommand("validate", "Check a gradation spec against its constraints");
  validate->add_option("--spec", spec_file, "Spec JSON file")->required();

  auto* enumerate = app.add_subcommand("enumerate", "List every gradation of a family at size n and order M");
  enumerate->add_option("--family", family, "gl, sl, so or sp")->required();
  enumerate->add_option("--n", n, "Matrix size")->required();
  enumerate->add_option("--M", M, "Order of the automorphism")->required();
  enumerate->add_flag("--json", as_json, "JSON listing");
  enumerate->add_flag("--latex", as_latex, "LaTeX index tables");

  auto* describe = app.add_subcommand("describe", "Print the Toda system of a spec or system file");
  describe->add_option("--spec", spec_file, "Spec JSON file");
  describe->add_option("--system", system_file, "System JSON file");
  describe->add_option("--L", L, "Grade of c+ (default 1)");
  describe->add_flag("--json", as_json, "JSON (default)");
  describe->add_flag("--latex", as_latex, "LaTeX equations");

  auto* check = app.add_subcommand("check", "Run the invariant suite for a spec");
  check->add_option("--spec", spec_file, "Spec JSON file")->required();
  check->add_option("--tol", tol, "Tolerance for the numerical invariants (default 1e-10)");

  auto* simulate = app.add_subcommand("simulate", "Integrate a system on a light-cone grid");
  simulate->add_option("--system", system_file, "System and initial-data JSON file");
  simulate->add_option("--preset", preset, "sine-gordon-kink, sinh-gordon, periodic-chain or free-field");
  simulate->add_option("--grid", grid, "zmin,zmax,wmin,wmax,h-,h+ (w is z+)");
  simulate->add_option("--output", output, "Directory for field.csv and manifest.json");
  simulate->add_option("--tol", tol, "Constraint tolerance for the initial data");
  simulate->add_option("--scheme", scheme, "midpoint or euler")->check(CLI::IsMember({"midpoint", "euler"}));
  simulate->add_option("--stride", stride, "Write every stride-th lattice point")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kParse;
  }

  char* out = nullptr;
  if (validate->parsed()) {
    const auto text = slurp(spec_file);
    if (!text) return unreadable(spec_file);
    return finish(toda_validate(text->c_str(), &out), out);
  }
  if (enumerate->parsed()) {
    return finish(toda_enumerate(family.c_str(), n, M, enumeration_cap(), format_of(as_json, as_latex), &out), out);
  }
  if (describe->parsed()) {
    if (spec_file.empty() == system_file.empty()) {
      std::fprintf(stderr, "describe needs exactly one of --spec and --system\n");
      return kParse;
    }
    std::string doc;
    if (!spec_file.empty()) {
      const auto text = slurp(spec_file);
      if (!text) return unreadable(spec_file);
      try {
        doc = json{{"spec", json::parse(*text)}, {"L", L}}.dump();
      } catch (const json::parse_error& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return kParse;
      }
    } else {
      const auto text = slurp(system_file);
      if (!text) return unreadable(system_file);
      doc = *text;
    }
    return finish(toda_describe(doc.c_str(), as_latex ? TODA_FORMAT_LATEX : TODA_FORMAT_JSON, &out), out);
  }
  if (check->parsed()) {
    const auto text = slurp(spec_file);
    if (!text) return unreadable(spec_file);
    return finish(toda_check(text->c_str(), tol > 0 ? tol : 1e-10, &out), out);
  }

  // simulate
  if (preset.empty() == system_file.empty()) {
    std::fprintf(stderr, "simulate needs exactly one of --system and --preset\n");
    return kParse;
  }
  json req = json::object();
  if (!system_file.empty()) {
    const auto text = slurp(system_file);
    if (!text) return unreadable(system_file);
    try {
      req = json::parse(*text);
    } catch (const json::parse_error& e) {
      std::fprintf(stderr, "%s\n", e.what());
      return kParse;
    }
    if (!req.is_object()) {
      std::fprintf(stderr, "%s: expected a JSON object\n", system_file.c_str());
      return kParse;
    }
    req["spec_reference"] = system_file;
  } else {
    req["preset"] = preset;
  }
  if (!grid.empty()) req["grid"] = grid;
  if (!output.empty()) req["output"] = output;
  json config = req.contains("config") && req["config"].is_object() ? req["config"] : json::object();
  config["scheme"] = scheme;
  config["checkpoint_stride"] = stride;
  if (tol > 0) config["tol_constraint"] = tol;
  req["config"] = config;
  return finish(toda_simulate(req.dump().c_str(), &out), out);
}
