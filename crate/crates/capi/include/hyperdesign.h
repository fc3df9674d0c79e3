/* C interface for the hyperdesign library.
 *
 * Conventions:
 *   - Every fallible call returns an int status code (HD_OK == 0 means
 *     success). On failure, hd_last_error() returns a thread-local
 *     message; release it with hd_string_free.
 *   - Strings returned through char** out-parameters are heap-allocated
 *     and must be released with hd_string_free.
 *   - HdGraph handles are opaque; release them with hd_graph_free.
 *
 * Link against the hyperdesign_capi cdylib or staticlib.
 */

#ifndef HYPERDESIGN_H
#define HYPERDESIGN_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define HD_OK            0
#define HD_ERR_NULL      1
#define HD_ERR_UTF8      2
#define HD_ERR_INVALID   3
#define HD_ERR_VERIFY    4
#define HD_ERR_RESOURCE  5
#define HD_ERR_BUFFER    6
#define HD_ERR_INTERNAL  7

typedef struct HdGraph HdGraph;

/* Error handling */
char *hd_last_error(void);
void hd_string_free(char *s);

/* Hypergraphs: JSON form {"r": int, "n": int, "edges": [[int, ...], ...]} */
HdGraph *hd_graph_parse(const char *json);
void hd_graph_free(HdGraph *g);
int hd_graph_to_json(const HdGraph *g, char **out);
int hd_graph_shape(const HdGraph *g, uint64_t *out_r, uint64_t *out_n,
                   uint64_t *out_edges);

/* Divisibility */
int hd_deg(const HdGraph *g, uint64_t *buf, size_t cap, size_t *out_len);
int hd_divisible(const HdGraph *host, const HdGraph *pattern, uint64_t lambda,
                 int *out);
int hd_divisible_order(const HdGraph *pattern, uint64_t a, uint64_t *out);
int hd_weakly_regular(const HdGraph *g, int *out_regular, uint64_t *buf,
                      size_t cap, size_t *out_len);

/* Resolvable partite clique decompositions */
int hd_partite_generate(uint64_t q, uint64_t f, uint64_t r, char **out);
int hd_partite_verify(const char *json);

/* Regularisation: returns {"q", "s", "fstar", "decomposition"} as JSON */
int hd_regularise(const HdGraph *pattern, uint64_t edge_budget, char **out);

/* Random greedy packing: returns {"seed", "packing", "leftover"} as JSON */
int hd_nibble(const HdGraph *host, const HdGraph *pattern, uint64_t seed,
              char **out);

/* Packing verification; *out_decomposition is 1 when coverage is exact */
int hd_pack_verify(const HdGraph *host, const char *packing_json,
                   int *out_decomposition);

#ifdef __cplusplus
}
#endif

#endif /* HYPERDESIGN_H */
