#ifndef FTORACLE_H
#define FTORACLE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Status codes; the non-negative values match the command-line exit codes.
 */
typedef enum FtStatus {
  FT_STATUS_OK = 0,
  FT_STATUS_NOT_FOUND = 1,
  FT_STATUS_INVALID_ARGUMENT = 2,
  FT_STATUS_PARSE_ERROR = 3,
  FT_STATUS_CAP_EXCEEDED = 4,
  FT_STATUS_NULL_POINTER = 5,
  FT_STATUS_PANIC = 6,
} FtStatus;

typedef enum FtMotifKind {
  FT_MOTIF_KIND_PATH = 0,
  FT_MOTIF_KIND_CLIQUE = 1,
} FtMotifKind;

typedef struct FtDso FtDso;

typedef struct FtGraph FtGraph;

typedef struct FtMotif FtMotif;

typedef struct FtRpc FtRpc;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next call into the library from the same thread.
 */
const char *ft_last_error(void);

/**
 * Parses an edge list (`u v [w]` per line, `#` comments).
 *
 * # Safety
 * `text` must be a nul-terminated string; `out` must be writable.
 */
enum FtStatus ft_graph_parse(const char *text, bool directed, struct FtGraph **out);

/**
 * Reads an edge-list file.
 *
 * # Safety
 * `path` must be a nul-terminated string; `out` must be writable.
 */
enum FtStatus ft_graph_load(const char *path, bool directed, struct FtGraph **out);

/**
 * # Safety
 * `g` must be null or a live graph handle.
 */
size_t ft_graph_node_count(const struct FtGraph *g);

/**
 * # Safety
 * `g` must be null or a live graph handle.
 */
size_t ft_graph_edge_count(const struct FtGraph *g);

/**
 * # Safety
 * `g` must be null or a handle from this library, not used afterwards.
 */
void ft_graph_free(struct FtGraph *g);

/**
 * Builds an `(L, f)` covering family for edge or node failures.
 *
 * # Safety
 * `g` must be a live graph handle; `out` must be writable.
 */
enum FtStatus ft_rpc_build(const struct FtGraph *g,
                           size_t f,
                           size_t max_hops,
                           double c,
                           uint64_t seed,
                           bool node_failures,
                           struct FtRpc **out);

/**
 * Runs the tree walk for a failure set. Writes `|𝒢_F|` and the number of
 * child tests; returns `NotFound` when `𝒢_F` is empty.
 *
 * # Safety
 * `rpc` must be a live handle; id arrays must hold the given lengths.
 */
enum FtStatus ft_rpc_query(const struct FtRpc *rpc,
                           const size_t *edges,
                           size_t n_edges,
                           const size_t *nodes,
                           size_t n_nodes,
                           size_t *out_leaves,
                           size_t *out_nodes_touched);

/**
 * # Safety
 * `rpc` must be a live handle; `path` a nul-terminated string.
 */
enum FtStatus ft_rpc_save(const struct FtRpc *rpc, const char *path);

/**
 * # Safety
 * `path` must be a nul-terminated string; `out` must be writable.
 */
enum FtStatus ft_rpc_load(const char *path, struct FtRpc **out);

/**
 * # Safety
 * `rpc` must be null or a handle from this library, not used afterwards.
 */
void ft_rpc_free(struct FtRpc *rpc);

/**
 * Builds an `L`-hop distance oracle; `max_bytes` caps the table memory.
 *
 * # Safety
 * `g` must be a live graph handle; `out` must be writable.
 */
enum FtStatus ft_dso_build(const struct FtGraph *g,
                           size_t f,
                           size_t max_hops,
                           double c,
                           uint64_t seed,
                           bool node_failures,
                           uint64_t max_bytes,
                           struct FtDso **out);

/**
 * Builds the bounded-diameter oracle, `L = (f + 1) D`.
 *
 * # Safety
 * `g` must be a live graph handle; `out` must be writable.
 */
enum FtStatus ft_dso_build_bounded(const struct FtGraph *g,
                                   size_t f,
                                   double c,
                                   uint64_t seed,
                                   uint64_t max_bytes,
                                   struct FtDso **out);

/**
 * Distance from `s` to `t` avoiding the failures. Unreachable writes
 * `INFINITY` and `UINT32_MAX` hops and returns `NotFound`.
 *
 * # Safety
 * `dso` must be a live handle; id arrays must hold the given lengths.
 */
enum FtStatus ft_dso_query(const struct FtDso *dso,
                           size_t s,
                           size_t t,
                           const size_t *edges,
                           size_t n_edges,
                           const size_t *nodes,
                           size_t n_nodes,
                           double *out_distance,
                           uint32_t *out_hops);

/**
 * # Safety
 * `dso` must be a live handle; `path` a nul-terminated string.
 */
enum FtStatus ft_dso_save(const struct FtDso *dso, const char *path);

/**
 * # Safety
 * `path` must be a nul-terminated string; `out` must be writable.
 */
enum FtStatus ft_dso_load(const char *path, struct FtDso **out);

/**
 * # Safety
 * `dso` must be null or a handle from this library, not used afterwards.
 */
void ft_dso_free(struct FtDso *dso);

/**
 * Builds a `k`-path or `k`-clique oracle for edge failures.
 *
 * # Safety
 * `g` must be a live graph handle; `out` must be writable.
 */
enum FtStatus ft_motif_build(const struct FtGraph *g,
                             enum FtMotifKind kind,
                             size_t k,
                             size_t f,
                             double c,
                             uint64_t seed,
                             struct FtMotif **out);

/**
 * Looks up a motif avoiding the failed edges. On success copies its edge
 * ids into `out_edges` (capacity `cap`, at least the edge budget) and writes
 * the count; returns `NotFound` when none is stored.
 *
 * # Safety
 * `motif` must be a live handle; `edges` must hold `n_edges` ids and
 * `out_edges` room for `cap`.
 */
enum FtStatus ft_motif_query(const struct FtMotif *motif,
                             const size_t *edges,
                             size_t n_edges,
                             size_t *out_edges,
                             size_t cap,
                             size_t *out_len);

/**
 * # Safety
 * `motif` must be a live handle; `path` a nul-terminated string.
 */
enum FtStatus ft_motif_save(const struct FtMotif *motif, const char *path);

/**
 * # Safety
 * `path` must be a nul-terminated string; `out` must be writable.
 */
enum FtStatus ft_motif_load(const char *path, struct FtMotif **out);

/**
 * # Safety
 * `motif` must be null or a handle from this library, not used afterwards.
 */
void ft_motif_free(struct FtMotif *motif);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FTORACLE_H */
