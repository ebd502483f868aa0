#ifndef CUSPFIELD_H
#define CUSPFIELD_H

/* C interface to the cuspfield library. Every function returns a status code;
 * on failure cf_last_error() describes the problem (thread-local). Strings
 * returned through char** are owned by the caller and released with
 * cf_string_free. Structured results are JSON documents. */

#if defined(__GNUC__)
#define CF_API __attribute__((visibility("default")))
#else
#define CF_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  CF_OK = 0,
  CF_ERR_INVALID_ARGUMENT = 1,
  CF_ERR_PARSE = 2,
  CF_ERR_DOMAIN = 3,
  CF_ERR_NOT_MODULAR = 4,
  CF_ERR_UNSUPPORTED = 5,
  CF_ERR_IO = 6,
  CF_ERR_INTERNAL = 7
} cf_status;

typedef struct cf_form cf_form;

typedef struct {
  long long a, b, c, d;
} cf_matrix;

CF_API const char* cf_version(void);
CF_API const char* cf_last_error(void);
CF_API void cf_string_free(char* s);

/* "A,B,C,D" */
CF_API cf_status cf_matrix_parse(const char* text, cf_matrix* out);

/* Form files (full or metadata-only). */
CF_API cf_status cf_form_load(const char* path, cf_form** out);
CF_API cf_status cf_form_parse(const char* text, cf_form** out);
CF_API void cf_form_free(cf_form* f);
CF_API cf_status cf_form_serialize(const cf_form* f, char** text);
/* name, level, weight, group, character, field, precision, newform,
 * atkin_lehner, coefficient field K_f */
CF_API cf_status cf_form_info(const cf_form* f, char** json);

/* f|g to `prec` coefficients in q^(1/N) (0 selects the default precision).
 * `series` receives the expansion text; `summary` the predicted module,
 * observed field and verdict. use_cache selects the on-disk cache. */
CF_API cf_status cf_expand(const cf_form* f, cf_matrix g, long long prec, int use_cache, char** series, char** summary);

/* Field bound report for f|g. For metadata-only forms K_f is taken to be the
 * declared field Q(zeta_field). */
CF_API cf_status cf_bound(const cf_form* f, cf_matrix g, char** json);
/* Same from explicit metadata; character is "N: g->r, ..." or NULL. */
CF_API cf_status cf_bound_metadata(long long level, int weight, const char* character, long long kf_modulus, cf_matrix g,
                            char** json);
/* Field bounds at every cusp of X0(N) with optimizer suggestions. */
CF_API cf_status cf_bound_sweep(const cf_form* f, char** json);

/* Reduction plan for the cusp a/c on level N with character conductor m. */
CF_API cf_status cf_optimize(long long level, long long cusp_a, long long cusp_c, long long conductor, char** json);
/* Executes the plan for f at the cusp of g and compares it with f|g. */
CF_API cf_status cf_optimize_replay(const cf_form* f, cf_matrix g, long long prec, char** json);

/* Runs a named invariant suite. options_json may be NULL; keys: max_level,
 * weights, tilde, max_weight, cases, relation_prec, brute_level, optimal_level, matrices,
 * tolerance, seed. forms may be NULL when count is 0. The report's "passed"
 * field gives the verdict. */
CF_API cf_status cf_verify(const char* suite, const char* options_json, const cf_form* const* forms, int count, char** report);
/* JSON array of suite names. */
CF_API cf_status cf_suite_names(char** json);

/* Cache management. */
CF_API cf_status cf_cache_build_basis(long long level, int weight, long long prec, char** json);
CF_API cf_status cf_cache_build_form(const cf_form* f, char** json);
CF_API cf_status cf_cache_inspect(char** json);
CF_API cf_status cf_cache_purge(char** json);

#ifdef __cplusplus
}
#endif

#endif
