#ifndef TWIRLAB_H
#define TWIRLAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(TWIRLAB_BUILDING_LIBRARY)
#define TWIRLAB_API __attribute__((visibility("default")))
#else
#define TWIRLAB_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct twirlab_model twirlab_model;
typedef struct twirlab_report twirlab_report;

typedef enum twirlab_status {
  TWIRLAB_OK = 0,
  TWIRLAB_E_DIMENSION_MISMATCH,
  TWIRLAB_E_RANGE_VIOLATION,
  TWIRLAB_E_VALIDATION_FAILURE,
  TWIRLAB_E_NOT_A_GROUP,
  TWIRLAB_E_LABEL_MISMATCH,
  TWIRLAB_E_CERTIFICATION,
  TWIRLAB_E_UNSUPPORTED_SIZE,
  TWIRLAB_E_ACTION_NOT_PHYSICAL,
  TWIRLAB_E_INCONSISTENT_WORLDS,
  TWIRLAB_E_TRIVIAL_ACTION,
  TWIRLAB_E_NOT_SEPARABLE,
  TWIRLAB_E_PRECONDITION,
  TWIRLAB_E_BAD_PARAM,
  TWIRLAB_E_SCHEMA,
  TWIRLAB_E_DIMENSION,
  TWIRLAB_E_UNKNOWN_BUILTIN,
  TWIRLAB_E_NON_FINITE,
  TWIRLAB_E_EMPTY_INPUT,
  TWIRLAB_E_IO,
  TWIRLAB_E_NULL_ARGUMENT = 100,
  TWIRLAB_E_INTERNAL = 101
} twirlab_status;

typedef enum twirlab_format {
  TWIRLAB_FORMAT_JSON = 0,
  TWIRLAB_FORMAT_TEXT = 1,
  TWIRLAB_FORMAT_WITNESS = 2
} twirlab_format;

enum {
  TWIRLAB_STAGE_VALIDATE = 1,
  TWIRLAB_STAGE_LAWS = 2,
  TWIRLAB_STAGE_WORLDS = 4,
  TWIRLAB_STAGE_ALL = 7
};

TWIRLAB_API const char* twirlab_version(void);

/* Message of the last failed call on this thread; "" after a success. */
TWIRLAB_API const char* twirlab_last_error(void);
TWIRLAB_API const char* twirlab_status_name(twirlab_status s);

/* `source` is "builtin:<recipe>" or a file path. */
TWIRLAB_API twirlab_status twirlab_model_load(const char* source, twirlab_model** out);
TWIRLAB_API twirlab_status twirlab_model_parse(const char* text, size_t len, twirlab_model** out);
TWIRLAB_API void twirlab_model_free(twirlab_model* m);

TWIRLAB_API twirlab_status twirlab_model_set_tol(twirlab_model* m, double tol);
TWIRLAB_API twirlab_status twirlab_model_set_rank_tol(twirlab_model* m, double rank_tol);
TWIRLAB_API twirlab_status twirlab_model_set_seed(twirlab_model* m, uint64_t seed);
TWIRLAB_API twirlab_status twirlab_model_set_trials(twirlab_model* m, int trials);

/* Canonical model document; release with twirlab_string_free. */
TWIRLAB_API twirlab_status twirlab_model_emit(const twirlab_model* m, char** out);

TWIRLAB_API twirlab_status twirlab_analyze(const twirlab_model* m, unsigned stages, twirlab_report** out);
TWIRLAB_API void twirlab_report_free(twirlab_report* r);

TWIRLAB_API twirlab_status twirlab_report_emit(const twirlab_report* r, twirlab_format format, int color,
                                               char** out);
/* 1 when every check that ran passed. */
TWIRLAB_API int twirlab_report_checks_pass(const twirlab_report* r);
/* K_A, K_B, K_AB (K_B and K_AB are 0 for a single system); any pointer may be NULL. */
TWIRLAB_API twirlab_status twirlab_report_counts(const twirlab_report* r, long* k_a, long* k_b, long* k_ab,
                                                 int* fails_locality);

/* One line per builtin recipe: name, parameters, summary separated by tabs. */
TWIRLAB_API twirlab_status twirlab_list_builtins(char** out);

TWIRLAB_API void twirlab_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif
