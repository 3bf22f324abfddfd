#ifndef MINISHOGI_REACH_H
#define MINISHOGI_REACH_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MsrStatus {
  MSR_STATUS_OK = 0,
  MSR_STATUS_NULL_POINTER = 1,
  MSR_STATUS_INVALID_UTF8 = 2,
  MSR_STATUS_INVALID_SFEN = 3,
  MSR_STATUS_NOT_CANDIDATE = 4,
  MSR_STATUS_RANK_OUT_OF_RANGE = 5,
  MSR_STATUS_INVALID_ARGUMENT = 6,
  MSR_STATUS_BUFFER_TOO_SMALL = 7,
  MSR_STATUS_CHECKPOINT = 8,
  MSR_STATUS_IO = 9,
  MSR_STATUS_PANIC = 10,
} MsrStatus;

typedef enum MsrVerdictKind {
  MSR_VERDICT_KIND_REACHABLE = 0,
  MSR_VERDICT_KIND_FAILED_HORIZONTAL_FLIP = 1,
  MSR_VERDICT_KIND_FAILED_PAWN_PLACEMENT = 2,
  MSR_VERDICT_KIND_FAILED_OPPONENT_KING_CHECK = 3,
  MSR_VERDICT_KIND_FAILED_REACHABILITY = 4,
  MSR_VERDICT_KIND_RESOURCE_EXHAUSTED = 5,
} MsrVerdictKind;

/**
 * Opaque estimate report handle.
 */
typedef struct MsrEstimate MsrEstimate;

/**
 * Opaque position handle.
 */
typedef struct MsrPosition MsrPosition;

/**
 * Heuristic weights and search limits. `max_open_set_size == 0` means no
 * cap on the open set.
 */
typedef struct MsrSearchConfig {
  double a;
  double b;
  double c;
  double d;
  uint64_t max_nodes;
  uint64_t max_open_set_size;
} MsrSearchConfig;

/**
 * Outcome of [`msr_classify`]. `max_ply` is meaningful for
 * `FailedReachability`, `nodes_expanded` for `ResourceExhausted`.
 */
typedef struct MsrVerdict {
  enum MsrVerdictKind kind;
  uint32_t max_ply;
  uint64_t nodes_expanded;
} MsrVerdict;

typedef struct MsrFunnel {
  uint64_t generated;
  uint64_t passed_flip;
  uint64_t passed_pawn;
  uint64_t passed_check;
  uint64_t reachable;
  uint64_t exhausted;
} MsrFunnel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the message of the last failed call on this thread.
 *
 * # Safety
 * `buf` must be valid for `cap` bytes or null; `needed` must be valid or null.
 */
enum MsrStatus msr_last_error(char *buf, size_t cap, size_t *needed);

uint64_t msr_total_space(void);

uint64_t msr_kpos_count(void);

struct MsrSearchConfig msr_search_config_default(void);

/**
 * Wald 95% interval for `k` successes in `n` trials.
 *
 * # Safety
 * `low` and `high` must be valid for writes.
 */
enum MsrStatus msr_confidence_interval(uint64_t k, uint64_t n, double *low, double *high);

/**
 * Parses an SFEN string into a new handle.
 *
 * # Safety
 * `sfen` must be a NUL-terminated string; `out` must be valid for writes.
 */
enum MsrStatus msr_position_from_sfen(const char *sfen, struct MsrPosition **out);

/**
 * Creates the position with rank `r`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum MsrStatus msr_position_unrank(uint64_t r, struct MsrPosition **out);

/**
 * # Safety
 * `pos` must be null or a handle from this library not yet freed.
 */
void msr_position_free(struct MsrPosition *pos);

/**
 * # Safety
 * `pos` must be a live handle; `buf`/`needed` as for [`msr_last_error`].
 */
enum MsrStatus msr_position_to_sfen(const struct MsrPosition *pos,
                                    char *buf,
                                    size_t cap,
                                    size_t *needed);

/**
 * # Safety
 * `pos` must be a live handle; `out` must be valid for writes.
 */
enum MsrStatus msr_position_rank(const struct MsrPosition *pos, uint64_t *out);

/**
 * Runs the legality funnel. A null `config` selects the defaults.
 *
 * # Safety
 * `pos` must be a live handle; `config` null or valid; `out` valid for writes.
 */
enum MsrStatus msr_classify(const struct MsrPosition *pos,
                            const struct MsrSearchConfig *config,
                            struct MsrVerdict *out);

/**
 * Runs the sampling estimate. `worker_count == 0` uses the available
 * parallelism; `batch_size == 0` uses the default; a null
 * `checkpoint_path` disables checkpointing.
 *
 * # Safety
 * `config` null or valid; `checkpoint_path` null or NUL-terminated; `out`
 * valid for writes.
 */
enum MsrStatus msr_estimate_run(uint64_t n_samples,
                                uint64_t seed,
                                uint32_t worker_count,
                                uint64_t batch_size,
                                const struct MsrSearchConfig *config,
                                const char *checkpoint_path,
                                struct MsrEstimate **out);

/**
 * # Safety
 * `report` must be null or a handle from this library not yet freed.
 */
void msr_estimate_free(struct MsrEstimate *report);

/**
 * Point estimate and interval of the reachable fraction.
 *
 * # Safety
 * `report` must be a live handle; the out pointers valid for writes.
 */
enum MsrStatus msr_estimate_fraction(const struct MsrEstimate *report,
                                     double *p_hat,
                                     double *low,
                                     double *high);

/**
 * Point estimate and interval scaled to position counts.
 *
 * # Safety
 * As for [`msr_estimate_fraction`].
 */
enum MsrStatus msr_estimate_count(const struct MsrEstimate *report,
                                  double *point,
                                  double *low,
                                  double *high);

/**
 * # Safety
 * `report` must be a live handle; `out` valid for writes.
 */
enum MsrStatus msr_estimate_funnel(const struct MsrEstimate *report, struct MsrFunnel *out);

/**
 * Number of unreachable samples whose deepest predecessor was `ply` moves back.
 *
 * # Safety
 * `report` must be a live handle; `out` valid for writes.
 */
enum MsrStatus msr_estimate_ply_count(const struct MsrEstimate *report,
                                      uint32_t ply,
                                      uint64_t *out);

/**
 * The full report as JSON.
 *
 * # Safety
 * `report` must be a live handle; `buf`/`needed` as for [`msr_last_error`].
 */
enum MsrStatus msr_estimate_to_json(const struct MsrEstimate *report,
                                    char *buf,
                                    size_t cap,
                                    size_t *needed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MINISHOGI_REACH_H */
