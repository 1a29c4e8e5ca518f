#ifndef TODA_C_H
#define TODA_C_H

/* C interface to the toda library. Strings returned through char** are
 * owned by the caller and released with toda_string_free. On failure the
 * thread's last error message is available from toda_last_error. */

#include <stddef.h>

#if defined(TODA_BUILDING_LIBRARY)
#define TODA_API __attribute__((visibility("default")))
#else
#define TODA_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values 0..4 double as CLI exit statuses. */
typedef enum {
  TODA_OK = 0,
  TODA_DOMAIN = 1,
  TODA_PARSE = 2,
  TODA_CAP = 3,
  TODA_BLOWUP = 4,
  TODA_INVALID_ARGUMENT = 5,
  TODA_INTERNAL = 6
} toda_status;

typedef enum { TODA_FORMAT_TEXT = 0, TODA_FORMAT_JSON = 1, TODA_FORMAT_LATEX = 2 } toda_format;

typedef struct toda_spec toda_spec;
typedef struct toda_system toda_system;

TODA_API const char* toda_version(void);
TODA_API const char* toda_last_error(void);
TODA_API void toda_string_free(char* s);

TODA_API toda_status toda_spec_from_json(const char* json, toda_spec** out);
TODA_API void toda_spec_free(toda_spec* spec);
TODA_API toda_status toda_spec_to_json(const toda_spec* spec, char** out);
/* TODA_OK when valid, TODA_DOMAIN otherwise; report lists one violation per line. */
TODA_API toda_status toda_spec_validate(const toda_spec* spec, char** report);

TODA_API toda_status toda_system_from_json(const char* json, toda_system** out);
TODA_API toda_status toda_system_build(const toda_spec* spec, int L, toda_system** out);
TODA_API void toda_system_free(toda_system* system);
TODA_API toda_status toda_system_to_json(const toda_system* system, char** out);
TODA_API toda_status toda_system_to_latex(const toda_system* system, char** out);
TODA_API int toda_system_variables(const toda_system* system);

/* Text-level commands; `out` receives the report even when the status is nonzero. */
TODA_API toda_status toda_validate(const char* spec_json, char** out);
TODA_API toda_status toda_enumerate(const char* family, int n, int M, size_t max_count,
                                    toda_format format, char** out);
TODA_API toda_status toda_describe(const char* document_json, toda_format format, char** out);
TODA_API toda_status toda_check(const char* spec_json, double tol, char** out);
/* Writes field.csv and manifest.json when the request names an output directory;
 * `out` receives the manifest. TODA_BLOWUP keeps the partial output. */
TODA_API toda_status toda_simulate(const char* request_json, char** out);

#ifdef __cplusplus
}
#endif

#endif
