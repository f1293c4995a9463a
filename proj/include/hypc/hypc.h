/* SPDX-License-Identifier: Apache-2.0 */
#ifndef HYPC_HYPC_H
#define HYPC_HYPC_H

#include <stddef.h>

#if defined(_WIN32)
#if defined(HYPC_BUILDING)
#define HYPC_API __declspec(dllexport)
#else
#define HYPC_API __declspec(dllimport)
#endif
#else
#define HYPC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes double as process exit codes. */
typedef enum hypc_status {
  HYPC_OK = 0,
  HYPC_ERR_INTERNAL = 1,  /* unexpected failure */
  HYPC_ERR_INPUT = 2,     /* malformed input, unmet precondition, unreadable file */
  HYPC_ERR_INTEGRITY = 3, /* data contradicts the declared schema */
  HYPC_ERR_CAPACITY = 4   /* a configured cap was exceeded */
} hypc_status;

/* Message of the last failure on this thread; empty after a success. */
HYPC_API const char* hypc_last_error(void);

/* Strings returned by the library are released with this. */
HYPC_API void hypc_string_free(char* s);

HYPC_API const char* hypc_version(void);

/* ---- options ---- */

typedef struct hypc_options hypc_options;

HYPC_API hypc_options* hypc_options_new(void);
HYPC_API void hypc_options_free(hypc_options* o);
HYPC_API void hypc_options_set_force_lossless(hypc_options* o, int on);
HYPC_API void hypc_options_set_cap_worlds(hypc_options* o, size_t cap);
HYPC_API void hypc_options_set_cap_attrs(hypc_options* o, size_t cap);
HYPC_API hypc_status hypc_options_set_epsilon(hypc_options* o, double epsilon);

/* ---- FD sets ---- */

typedef struct hypc_fdset hypc_fdset;

/* Text form: one "A B -> C" per line, '#' comments, "#@attrs a b c" to fix
   the attribute order. */
HYPC_API hypc_status hypc_fdset_parse(const char* text, hypc_fdset** out);
/* Left-reduced encoding of a structure JSON document. */
HYPC_API hypc_status hypc_fdset_encode(const char* structure_json, hypc_fdset** out);
HYPC_API void hypc_fdset_free(hypc_fdset* s);
HYPC_API size_t hypc_fdset_size(const hypc_fdset* s);
HYPC_API hypc_status hypc_fdset_to_text(const hypc_fdset* s, char** out);
HYPC_API int hypc_fdset_is_parsimonious(const hypc_fdset* s);
HYPC_API int hypc_fdset_same(const hypc_fdset* a, const hypc_fdset* b);
/* Closure of a space separated attribute list, written the same way. */
HYPC_API hypc_status hypc_fdset_closure(const hypc_fdset* s, const char* attrs, char** out);
/* Folding of a parsimonious set. */
HYPC_API hypc_status hypc_fdset_fold(const hypc_fdset* s, hypc_fdset** out);

/* ---- schemas ---- */

typedef struct hypc_schema hypc_schema;

HYPC_API hypc_status hypc_schema_synthesize(const hypc_fdset* s, const hypc_options* o, hypc_schema** out);
HYPC_API void hypc_schema_free(hypc_schema* s);
HYPC_API size_t hypc_schema_size(const hypc_schema* s);
/* [{"name", "attrs", "key"}, ...] */
HYPC_API hypc_status hypc_schema_to_json(const hypc_schema* s, char** out);
/* Verdicts against the FD set the schema was synthesized from. */
HYPC_API hypc_status hypc_schema_is_bcnf(const hypc_schema* s, const hypc_options* o, int* ok, char** witness);
HYPC_API hypc_status hypc_schema_preserves(const hypc_schema* s, int* ok);
HYPC_API hypc_status hypc_schema_lossless(const hypc_schema* s, int* ok);
HYPC_API hypc_status hypc_schema_chase(const hypc_schema* s, const hypc_options* o, int* ok);

/* ---- pipeline stages ----
   Each stage writes into out_dir and records hashes in out_dir/manifest.json.
   o may be NULL for defaults. */

HYPC_API hypc_status hypc_encode(const hypc_options* o, const char* structure_path, const char* out_dir);
HYPC_API hypc_status hypc_fold(const hypc_options* o, const char* fd_path, const char* out_dir);
HYPC_API hypc_status hypc_synth(const hypc_options* o, const char* fd_path, const char* out_dir);
HYPC_API hypc_status hypc_load(const hypc_options* o, const char* schema_path, const char* upsilon,
                               const char* const* trial_paths, size_t n_trials, const char* out_dir);
HYPC_API hypc_status hypc_u_intro(const hypc_options* o, const char* h0_path, const char* const* hypothesis_dirs,
                                  size_t n_hypotheses, const char* out_dir);
HYPC_API hypc_status hypc_run(const hypc_options* o, const char* config_path, const char* out_dir);

typedef enum hypc_query_mode {
  HYPC_QUERY_RELATION = 0,   /* the rewritten U-relation */
  HYPC_QUERY_CONFIDENCE = 1, /* distinct tuples with a conf column */
  HYPC_QUERY_WORLDS = 2      /* decoded answer per world, capped */
} hypc_query_mode;

HYPC_API hypc_status hypc_query(const hypc_options* o, const char* db_dir, const char* query, hypc_query_mode mode,
                                char** csv_out);

/* Verifies recorded hashes and the world table under dir. Warnings recorded
   by the stages are returned one per line when warnings is not NULL. */
HYPC_API hypc_status hypc_check(const hypc_options* o, const char* dir, char** warnings);

#ifdef __cplusplus
}
#endif

#endif
