#ifndef DYNAPSP_H
#define DYNAPSP_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Distance reported for unreachable pairs.
 */
#define DYNAPSP_INFINITY INT64_MAX

typedef enum DynapspVariant {
  DYNAPSP_VARIANT_RAND_WEIGHTED = 0,
  DYNAPSP_VARIANT_UNWEIGHTED = 1,
  DYNAPSP_VARIANT_DETERMINISTIC = 2,
} DynapspVariant;

typedef enum DynapspStatus {
  DYNAPSP_STATUS_OK = 0,
  DYNAPSP_STATUS_NULL_POINTER = 1,
  DYNAPSP_STATUS_INVALID_ARGUMENT = 2,
  /**
   * Event rejected against the current graph (dead node, reused id,
   * weight overflow risk).
   */
  DYNAPSP_STATUS_INVALID_EVENT = 3,
  DYNAPSP_STATUS_NEGATIVE_CYCLE = 4,
  DYNAPSP_STATUS_NEGATIVE_CYCLE_INTRODUCED = 5,
  DYNAPSP_STATUS_DEAD_ENDPOINT = 6,
  DYNAPSP_STATUS_PATH_UNAVAILABLE = 7,
  /**
   * The output buffer is too small; the required length was written.
   */
  DYNAPSP_STATUS_BUFFER_TOO_SMALL = 8,
  /**
   * Unit weights required by the unweighted variant.
   */
  DYNAPSP_STATUS_WEIGHTED_INPUT = 9,
  DYNAPSP_STATUS_INTERNAL = 10,
  DYNAPSP_STATUS_PANIC = 11,
} DynapspStatus;

/**
 * Opaque engine handle.
 */
typedef struct DynapspEngine DynapspEngine;

typedef struct DynapspConfig {
  enum DynapspVariant variant;
  /**
   * Confidence parameter, at least 1.
   */
  double c;
  uint64_t seed;
  /**
   * Rebuild period; 0 selects the variant default.
   */
  uint64_t delta;
} DynapspConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Default configuration: randomized weighted variant, `c = 3`, seed 0.
 */
struct DynapspConfig dynapsp_config_default(void);

/**
 * Builds an engine over nodes `0..n` and `m` edges `src[i] -> dst[i]` of
 * weight `weight[i]`. On success `*out` receives the handle.
 *
 * # Safety
 * `src`, `dst` and `weight` must each point to `m` readable elements (or be
 * null with `m == 0`); `out` must be writable.
 */
enum DynapspStatus dynapsp_engine_new(uint64_t n,
                                      const uint64_t *src,
                                      const uint64_t *dst,
                                      const int64_t *weight,
                                      size_t m,
                                      struct DynapspConfig config,
                                      struct DynapspEngine **out);

/**
 * Releases an engine. Null is ignored.
 *
 * # Safety
 * `engine` must be null or a handle from [`dynapsp_engine_new`] that has not
 * been freed.
 */
void dynapsp_engine_free(struct DynapspEngine *engine);

/**
 * Deletes a node and all its edges.
 *
 * # Safety
 * `engine` must be a live handle.
 */
enum DynapspStatus dynapsp_delete_node(struct DynapspEngine *engine, uint64_t node);

/**
 * Inserts a node with edges `in_src[i] -> node` and `node -> out_dst[i]`.
 * A rejected insertion leaves the engine unchanged.
 *
 * # Safety
 * `engine` must be a live handle; each array must hold its stated length.
 */
enum DynapspStatus dynapsp_insert_node(struct DynapspEngine *engine,
                                       uint64_t node,
                                       const uint64_t *in_src,
                                       const int64_t *in_weight,
                                       size_t in_len,
                                       const uint64_t *out_dst,
                                       const int64_t *out_weight,
                                       size_t out_len);

/**
 * Writes the distance from `s` to `t`, [`DYNAPSP_INFINITY`] if unreachable.
 *
 * # Safety
 * `engine` must be a live handle and `out` writable.
 */
enum DynapspStatus dynapsp_query_dist(const struct DynapspEngine *engine,
                                      uint64_t s,
                                      uint64_t t,
                                      int64_t *out);

/**
 * Writes a shortest `s -> t` path into `buf` and its node count into
 * `*len`. With a short buffer, returns `BufferTooSmall` after writing the
 * required count.
 *
 * # Safety
 * `engine` must be a live handle, `len` writable and `buf` must have room
 * for `cap` elements (or be null with `cap == 0`).
 */
enum DynapspStatus dynapsp_query_path(const struct DynapspEngine *engine,
                                      uint64_t s,
                                      uint64_t t,
                                      uint64_t *buf,
                                      size_t cap,
                                      size_t *len);

/**
 * Number of alive nodes.
 *
 * # Safety
 * `engine` must be a live handle and `out` writable.
 */
enum DynapspStatus dynapsp_node_count(const struct DynapspEngine *engine, uint64_t *out);

/**
 * Message of the last failed call on this thread; empty after success is
 * not guaranteed. The pointer stays valid until the next call on this
 * thread.
 */
const char *dynapsp_last_error(void);

/**
 * Static description of a status code.
 */
const char *dynapsp_status_name(enum DynapspStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DYNAPSP_H */
