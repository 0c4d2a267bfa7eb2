/* C interface to the hont library. Every function returns a status; results
 * come back through out-parameters. Strings returned through `char**` are
 * owned by the caller and released with hont_string_free. The message of the
 * last failure on the calling thread is available from hont_last_error. */
#ifndef HONT_H
#define HONT_H

#include <stddef.h>

#if defined(HONT_BUILDING_LIBRARY)
#define HONT_API __attribute__((visibility("default")))
#else
#define HONT_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hont_status {
  HONT_OK = 0,
  HONT_E_UNDEFINED = 1,
  HONT_E_INVALID_ARGUMENT = 2,
  HONT_E_NOT_A_PREFIX = 3,
  HONT_E_INAPPLICABLE = 4,
  HONT_E_ENDPOINT_MISMATCH = 5,
  HONT_E_PARSE = 6,
  HONT_E_LEVEL_UNSUPPORTED = 7,
  HONT_E_UNREACHABLE = 8,
  HONT_E_BUDGET_EXHAUSTED = 9,
  HONT_E_PRECONDITION = 10,
  HONT_E_SIGNATURE_MISMATCH = 11,
  HONT_E_SIZE_LIMIT = 12,
  HONT_E_SYNTAX = 13,
  HONT_E_IO = 14,
  HONT_E_INTERNAL = 99
} hont_status;

typedef enum hont_verdict {
  HONT_EQUIVALENT = 0,
  HONT_DISTINCT = 1,
  HONT_INDETERMINATE = 2
} hont_verdict;

typedef struct hont_system hont_system;

HONT_API const char* hont_status_name(hont_status s);
HONT_API const char* hont_last_error(void);
/* Line (system files) or column (formulas) of the last parse failure. */
HONT_API size_t hont_last_error_position(void);
HONT_API void hont_string_free(char* s);

HONT_API hont_status hont_system_parse(const char* text, hont_system** out);
HONT_API hont_status hont_system_load(const char* path, hont_system** out);
HONT_API void hont_system_free(hont_system* sys);
HONT_API hont_status hont_system_serialize(const hont_system* sys, char** out);
HONT_API hont_status hont_system_info(const hont_system* sys, int* level, size_t* states, size_t* transitions);

/* Configurations along a run given as "0,1,3". JSON object. */
HONT_API hont_status hont_run(const hont_system* sys, const char* steps, char** json);
/* Truncation of the nested pushdown tree: DOT text when dot != 0, else one node per line. */
HONT_API hont_status hont_tree(const hont_system* sys, size_t depth, int dot, char** out);
HONT_API hont_status hont_ancestors(const hont_system* sys, const char* steps, unsigned level, char** json);
HONT_API hont_status hont_milestones(const hont_system* sys, const char* stack, char** json);
/* Loop, high-loop and return counts of a top word (level 2). */
HONT_API hont_status hont_loop_counts(const hont_system* sys, const char* word, unsigned z, size_t budget,
                                      char** json);
/* Context-free loop language of a level-1 system and its k shortest words. */
HONT_API hont_status hont_loop_grammar(const hont_system* sys, const char* from, const char* to, const char* symbol,
                                       size_t k, char** json);
HONT_API hont_status hont_shrink(const hont_system* sys, const char* steps, unsigned z, size_t max_height,
                                 size_t budget, char** json);
HONT_API hont_status hont_word_equiv(const hont_system* sys, const char* w1, const char* w2, unsigned n, unsigned z,
                                     size_t budget, hont_verdict* verdict);
/* classes: "observed" or a decimal count; lambda: "measured" or "VALUE,M,N". */
HONT_API hont_status hont_bounds(const hont_system* sys, unsigned n, unsigned l, unsigned n1, unsigned n2,
                                 unsigned z, const char* classes, const char* lambda, char** json);
HONT_API hont_status hont_formula_normalize(const char* text, char** nnf, unsigned* rank);
/* mode: "bounded:D", "s:uniform:L", "s:npt1[:E]" or "s:npt2".
 * options: comma-separated key=value pairs (length, height, width, z, classes, lambda).
 * *result is 1 for true and 0 for false; *info receives a JSON object. */
HONT_API hont_status hont_check(const hont_system* sys, const char* formula, const char* mode, const char* options,
                                size_t budget, int* result, char** info);

#ifdef __cplusplus
}
#endif

#endif
