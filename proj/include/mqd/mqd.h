#ifndef MQD_H
#define MQD_H

/* mqd -- metaplectic kernel quasi-diagonality toolkit, C interface.
 *
 * The library takes a symplectic matrix S (or a generator word whose
 * product is S), computes the closed-form smoothed-kernel quadratic form
 * Q_S, the localization manifold, and a quasi-diagonality verdict, and can
 * cross-check the analysis against a grid-based numerical oracle.
 *
 * All heap objects are opaque handles released with the matching *_free.
 * Functions return MQD_OK on success; on failure mqd_last_error() holds a
 * thread-local detail string describing what went wrong.
 */

#if defined(_WIN32)
#  if defined(MQD_BUILD_SHARED)
#    define MQD_API __declspec(dllexport)
#  else
#    define MQD_API __declspec(dllimport)
#  endif
#else
#  define MQD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mqd_status {
    MQD_OK = 0,
    MQD_ERR_BAD_ARGUMENT,
    MQD_ERR_PARSE,
    MQD_ERR_IO,
    MQD_ERR_ODD_DIMENSION,
    MQD_ERR_NOT_SYMPLECTIC,
    MQD_ERR_NON_SYMMETRIC_P,
    MQD_ERR_SINGULAR_E,
    MQD_ERR_SINGULAR_MATRIX,
    MQD_ERR_RANK_AMBIGUOUS,
    MQD_ERR_NOT_APPLICABLE,
    MQD_ERR_NOT_INTEGRABLE,
    MQD_ERR_CONDITIONING,
    MQD_ERR_WRONG_DIMENSION,
    MQD_ERR_GRID_MISMATCH,
    MQD_ERR_CENTER_OUT_OF_RANGE,
    MQD_ERR_ALIAS_RISK,
    MQD_ERR_EXTENT_OVERFLOW,
    MQD_ERR_INSUFFICIENT_SAMPLES,
    MQD_ERR_FIT_EXCEEDS_BOUND,
    MQD_ERR_BAD_GRID,
    MQD_ERR_INTERNAL
} mqd_status;

/* Run configuration. Zero-initialised fields fall back to defaults; call
 * mqd_config_defaults to obtain the documented default values. grid_n == 0
 * and extent == 0 select the per-dimension defaults (n=1024, L=16 for d=1;
 * n=256, L=12 for d=2). */
typedef struct mqd_config {
    double rank_tol;        /* relative SVD cutoff for rank decisions   */
    double rank_gap_ratio;  /* singular-value gap ratio below which the
                               rank decision is reported as ambiguous   */
    double symplectic_tol;  /* acceptance tolerance for S^T J S = J     */
    double psd_tol;         /* PSD floor, relative to ||Q_S||           */
    double null_tol;        /* null-space eigenvalue cutoff, relative   */
    double cond_cap;        /* condition-number cap on inverses         */
    int    grid_n;          /* oracle grid points per axis (power of 2) */
    double extent;          /* oracle grid extent L                     */
    double margin;          /* window clearance from the grid boundary  */
    double max_rel_err;     /* verify: allowed oracle-vs-analytic error */
    double unitarity_tol;   /* allowed relative L2 drift per pipeline step */
    double tf_covariance_tol;
    double tf_profile_tol;
    int    verbosity;
} mqd_config;

MQD_API void mqd_config_defaults(mqd_config* cfg);

typedef struct mqd_matrix mqd_matrix;  /* validated symplectic matrix */
typedef struct mqd_word   mqd_word;    /* generator word              */
typedef struct mqd_report mqd_report;  /* JSON-backed result document */

/* Matrices. JSON format: {"d": int, "rows": [[...], ...]} with 2d x 2d
 * row-major entries; non-finite entries are rejected. */
MQD_API mqd_status mqd_matrix_from_json(const char* json, const mqd_config* cfg,
                                        mqd_matrix** out);
MQD_API mqd_status mqd_matrix_from_data(int d, const double* rowmajor,
                                        const mqd_config* cfg, mqd_matrix** out);
MQD_API mqd_status mqd_matrix_to_json(const mqd_matrix* m, char** json_out);
MQD_API int        mqd_matrix_dim(const mqd_matrix* m);
MQD_API void       mqd_matrix_free(mqd_matrix* m);

/* Words. JSON format: either a bare list of factors
 *   [{"type":"J"} | {"type":"VP","P":[[...]]} | {"type":"DE","E":[[...]]}]
 * or {"d": int, "factors": [...]}. A bare list infers d from the first
 * parameterised factor and defaults to d = 1 when the word is all-J. */
MQD_API mqd_status mqd_word_from_json(const char* json, mqd_word** out);
MQD_API mqd_status mqd_word_to_json(const mqd_word* w, char** json_out);
MQD_API int        mqd_word_dim(const mqd_word* w);
MQD_API mqd_status mqd_word_product(const mqd_word* w, const mqd_config* cfg,
                                    mqd_matrix** out);
MQD_API void       mqd_word_free(mqd_word* w);

/* Analysis of a symplectic matrix: verdict, localization manifold basis,
 * Q_S, amplitude, decay constant epsilon, residual diagnostics. */
MQD_API mqd_status mqd_analyze(const mqd_matrix* m, const mqd_config* cfg,
                               mqd_report** out);

/* Grid-oracle verification of a word: samples the smoothed kernel through
 * the generator pipeline and fits it against the analytic Q_S. Returns
 * MQD_ERR_FIT_EXCEEDS_BOUND (with the report still populated) when the fit
 * error exceeds cfg->max_rel_err. */
MQD_API mqd_status mqd_verify(const mqd_word* w, const mqd_config* cfg,
                              mqd_report** out);

/* Time-frequency checks for a d=1 word: Wigner covariance residual and the
 * Gabor-matrix decay profile. Returns MQD_ERR_FIT_EXCEEDS_BOUND when a
 * residual exceeds its configured threshold. */
MQD_API mqd_status mqd_tfcheck(const mqd_word* w, const mqd_config* cfg,
                               mqd_report** out);

MQD_API const char* mqd_report_json(const mqd_report* r);
MQD_API void        mqd_report_free(mqd_report* r);

/* CSV dump of the oracle kernel samples used by mqd_verify: one row per
 * (x, y) pair with columns x..., y..., re, im, abs. */
MQD_API mqd_status mqd_sample_csv(const mqd_word* w, const mqd_config* cfg,
                                  char** csv_out);

/* CSV dump of the Gabor-matrix magnitude profile |h(0, u)| over a polar
 * lattice of phase-space offsets u (d = 1 words). */
MQD_API mqd_status mqd_gabor_profile_csv(const mqd_word* w, const mqd_config* cfg,
                                         char** csv_out);

/* Built-in corpus of named example matrices with expected verdicts.
 * Every entry provides a matrix document, a generator word evaluating to
 * the same matrix, and an expected-verdict sidecar. Strings are released
 * with mqd_string_free. */
MQD_API int        mqd_corpus_count(void);
MQD_API mqd_status mqd_corpus_entry(int index, char** name, char** matrix_json,
                                    char** word_json, char** expected_json);

MQD_API void        mqd_string_free(char* s);
MQD_API const char* mqd_status_name(mqd_status s);
MQD_API const char* mqd_last_error(void);
MQD_API const char* mqd_version(void);

#ifdef __cplusplus
}
#endif

#endif /* MQD_H */
