#include "toda/toda_c.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>

#include "toda/commands.hpp"
#include "toda/serialization.hpp"

struct toda_spec {
  toda::GradationSpec value;
};

struct toda_system {
  toda::TodaSystem value;
};

namespace {

thread_local std::string last_error;

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

toda_status set_error(toda_status status, const std::string& msg) {
  last_error = msg;
  return status;
}

toda_status from_code(toda::ErrorCode code) {
  return static_cast<toda_status>(toda::commands::exit_status(code));
}

template <class F>
toda_status guard(F&& f) {
  try {
    last_error.clear();
    return f();
  } catch (const toda::Error& e) {
    return set_error(from_code(e.code()), std::string(toda::to_string(e.code())) + ": " + e.what());
  } catch (const std::bad_alloc&) {
    return set_error(TODA_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(TODA_INTERNAL, e.what());
  }
}

toda_status emit(const toda::commands::Result& r, char** out) {
  *out = dup(r.text);
  if (r.status != 0) last_error = r.text;
  return static_cast<toda_status>(r.status);
}

toda::commands::Format format_of(toda_format f) {
  switch (f) {
    case TODA_FORMAT_JSON: return toda::commands::Format::Json;
    case TODA_FORMAT_LATEX: return toda::commands::Format::Latex;
    default: return toda::commands::Format::Text;
  }
}

}  // namespace

extern "C" {

const char* toda_version(void) { return "0.1.0"; }

const char* toda_last_error(void) { return last_error.c_str(); }

void toda_string_free(char* s) { std::free(s); }

toda_status toda_spec_from_json(const char* json, toda_spec** out) {
  if (!json || !out) return set_error(TODA_INVALID_ARGUMENT, "null argument");
  return guard([&] {
    auto spec = std::make_unique<toda_spec>();
    spec->value = toda::spec_from_json(toda::parse_json(json));
    *out = spec.release();
    return TODA_OK;
  });
}

void toda_spec_free(toda_spec* spec) { delete spec; }

toda_status toda_spec_to_json(const toda_spec* spec, char** out) {
  if (!spec || !out) return set_error(TODA_INVALID_ARGUMENT, "null argument");
  return guard([&] {
    *out = dup(toda::to_json(spec->value).dump());
    return TODA_OK;
  });
}

toda_status toda_spec_validate(const toda_spec* spec, char** report) {
  if (!spec || !report) return set_error(TODA_INVALID_ARGUMENT, "null argument");
  return guard([&] {
    std::string text;
    for (const auto& v : toda::validate_spec(spec->value)) text += v.constraint + ": " + v.message + "\n";
    *report = dup(text);
    return text.empty() ? TODA_OK : set_error(TODA_DOMAIN, text);
  });
}

toda_status toda_system_from_json(const char* json, toda_system** out) {
  if (!json || !out) return set_error(TODA_INVALID_ARGUMENT, "null argument");
  return guard([&] {
    auto sys = std::make_unique<toda_system>();
    sys->value = toda::system_from_json(toda::parse_json(json));
    *out = sys.release();
    return TODA_OK;
  });
}

toda_status toda_system_build(const toda_spec* spec, int L, toda_system** out) {
  if (!spec || !out) return set_error(TODA_INVALID_ARGUMENT, "null argument");
  return guard([&] {
    auto sys = std::make_unique<toda_system>();
    sys->value = toda::build_system(spec->value, L);
    *out = sys.release();
    return TODA_OK;
  });
}

void toda_system_free(toda_system* system) { delete system; }

toda_status toda_system_to_json(const toda_system* system, char** out) {
  if (!system || !out) return set_error(TODA_INVALID_ARGUMENT, "null argument");
  return guard([&] {
    *out = dup(toda::to_json(system->value).dump());
    return TODA_OK;
  });
}

toda_status toda_system_to_latex(const toda_system* system, char** out) {
  if (!system || !out) return set_error(TODA_INVALID_ARGUMENT, "null argument");
  return guard([&] {
    *out = dup(toda::system_to_latex(system->value));
    return TODA_OK;
  });
}

int toda_system_variables(const toda_system* system) { return system ? system->value.variables() : -1; }

toda_status toda_validate(const char* spec_json, char** out) {
  if (!spec_json || !out) return set_error(TODA_INVALID_ARGUMENT, "null argument");
  return guard([&] { return emit(toda::commands::validate(spec_json), out); });
}

toda_status toda_enumerate(const char* family, int n, int M, size_t max_count, toda_format format, char** out) {
  if (!family || !out) return set_error(TODA_INVALID_ARGUMENT, "null argument");
  return guard([&] { return emit(toda::commands::enumerate(family, n, M, max_count, format_of(format)), out); });
}

toda_status toda_describe(const char* document_json, toda_format format, char** out) {
  if (!document_json || !out) return set_error(TODA_INVALID_ARGUMENT, "null argument");
  return guard([&] { return emit(toda::commands::describe(document_json, format_of(format)), out); });
}

toda_status toda_check(const char* spec_json, double tol, char** out) {
  if (!spec_json || !out) return set_error(TODA_INVALID_ARGUMENT, "null argument");
  if (!(tol > 0)) return set_error(TODA_INVALID_ARGUMENT, "tolerance must be positive");
  return guard([&] { return emit(toda::commands::check(spec_json, tol), out); });
}

toda_status toda_simulate(const char* request_json, char** out) {
  if (!request_json || !out) return set_error(TODA_INVALID_ARGUMENT, "null argument");
  return guard([&] { return emit(toda::commands::simulate(request_json), out); });
}

}  // extern "C"
