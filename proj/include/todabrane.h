/* C interface to the todabrane library.
 *
 * Conventions:
 *   - Every function returns a tb_status; TB_OK means success.
 *   - On failure, tb_last_error() returns a thread-local message describing
 *     the most recent failing call on the calling thread.
 *   - Output strings (char** parameters) are heap-allocated JSON documents;
 *     release them with tb_string_free. They are never NULL on TB_OK.
 *   - Handles (tb_model, tb_solution) are opaque; release with the matching
 *     _free function. Freeing NULL is a no-op.
 *   - Exact rational numbers appear in JSON as "num/den" strings ("num" when
 *     the denominator is 1); floating-point data appears as JSON numbers.
 */
#ifndef TODABRANE_H
#define TODABRANE_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tb_status {
  TB_OK = 0,
  TB_ERR_INVALID_ARGUMENT = 1,
  TB_ERR_PARSE = 2,
  TB_ERR_ARITY = 3,
  TB_ERR_SINGULAR_MATRIX = 4,
  TB_ERR_ZERO_DIAGONAL = 5,
  TB_ERR_SINGULAR_SCALAR_METRIC = 6,
  TB_ERR_NO_INTEGER_SOLUTION = 7,
  TB_ERR_INCONSISTENT = 8,
  TB_ERR_NONPOSITIVE_MODULUS = 9,
  TB_ERR_STEP_FAILURE = 10,
  TB_ERR_POSITIVITY_LOSS = 11,
  TB_ERR_INTERNAL = 12
} tb_status;

typedef struct tb_model tb_model;
typedef struct tb_solution tb_solution;

/* Library version string, e.g. "1.0.0". Static storage; do not free. */
const char* tb_version(void);

/* Stable name of a status code, e.g. "NoIntegerSolution". Static storage. */
const char* tb_status_name(tb_status status);

/* Message of the last failing call on this thread; empty string if none.
 * Valid until the next library call on the same thread. Do not free. */
const char* tb_last_error(void);

void tb_string_free(char* s);

/* ---- Algebra and solver ------------------------------------------------ */

/* Cartan matrix of a named algebra (A1, A1+A1, A2, B2, C2, G2;
 * case-insensitive) as a JSON matrix. */
tb_status tb_algebra_matrix(const char* name, char** out_json);

/* {"degrees": [...], "algebra": "C2"|null, "all_positive_integers": bool}
 * for a quasi-Cartan matrix given as JSON [[...],...]. Entries may be
 * integers or "num/den" strings. Fails with TB_ERR_SINGULAR_MATRIX when
 * det A = 0. */
tb_status tb_weyl_degrees(const char* matrix_json, char** out_json);

/* Solves the master equations to the given order. values_json selects the
 * mode: NULL keeps every P_s symbolic; a JSON list with one rational per
 * brane (e.g. "[1, \"3/2\"]") binds them. */
tb_status tb_solve(const char* matrix_json, int order, const char* values_json,
                   tb_solution** out);

tb_status tb_solution_to_json(const tb_solution* sol, char** out_json);

/* Residual of the cleared master equation. check_order <= 0 selects the
 * automatic path (exact polynomial identity when available, truncated
 * series otherwise); a positive value forces the series path to that order.
 * Output: {"path": ..., "all_zero": bool, "branes": [{"first_nonzero_order":
 * int|null, "first_nonzero": poly|null}]}. */
tb_status tb_residual(const tb_solution* sol, int check_order, char** out_json);

/* Full verification of one matrix: polynomial-structure check to
 * max(n_s) + margin, exact residual, and (when the polynomial structure is
 * confirmed) ODE cross-validation at P_s = 1 against max_rel_dev.
 * Output JSON carries "pass" plus the three sub-reports. */
tb_status tb_verify(const char* matrix_json, int margin, double rtol, double atol,
                    double max_rel_dev, char** out_json);

/* ODE trajectory vs. exact evaluation on an ascending z grid (JSON list of
 * numbers). values_json binds P_s for symbolic solutions; pass NULL for
 * numeric-mode solutions. */
tb_status tb_cross_validate(const tb_solution* sol, const char* values_json,
                            const char* grid_json, double rtol, double atol,
                            double tolerance, char** out_json);

/* Integrates the master system with B_s = 4 P_s from p_values_json, seeding
 * at z0 from an internally solved series. Output includes the accepted-step
 * trajectory. */
tb_status tb_integrate(const char* matrix_json, const char* p_values_json, double z0,
                       double z1, double rtol, double atol, char** out_json);

/* Smallest z in (0, z_max] where some H_s(z) <= 0, to within `width`.
 * Output: {"found": bool, "z": number|null}. */
tb_status tb_breakdown(const tb_solution* sol, const char* values_json, double z_max,
                       double width, char** out_json);

void tb_solution_free(tb_solution* sol);

/* ---- Brane models ------------------------------------------------------ */

tb_status tb_model_parse(const char* json, tb_model** out);
tb_status tb_model_load(const char* path, tb_model** out);

/* Constants, validation report, solution profile, and (when target_json is
 * non-NULL) the intersection dimensions forced by the target quasi-Cartan
 * matrix, as one JSON document. */
tb_status tb_model_build(const tb_model* model, const char* target_json, char** out_json);

/* Numeric-mode solution of the model's own master equations (P_s from the
 * brane constants). */
tb_status tb_model_solve(const tb_model* model, int order, tb_solution** out);

/* Evaluates the solution profile on a uniform rho grid. Points at or past
 * the breakdown of some H_s are flagged instead of evaluated. Output:
 * {"profile": ..., "classification": ..., "breakdown_z": number|null,
 *  "points": [...]}. */
tb_status tb_model_profile_grid(const tb_model* model, int order, double rho_min,
                                double rho_max, int steps, char** out_json);

void tb_model_free(tb_model* model);

#ifdef __cplusplus
}
#endif

#endif /* TODABRANE_H */
