/* C API for the Thorp shuffle analysis library.
 *
 * All functions return a thorp_status; outputs go through pointers.
 * Strings returned through char** are heap-allocated and must be
 * released with thorp_string_free. Handles are opaque and freed with
 * their matching *_free call. thorp_last_error() returns a
 * thread-local message for the most recent failure.
 */
#ifndef THORP_H
#define THORP_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum thorp_status {
  THORP_OK = 0,
  THORP_ERR_DOMAIN = 1,    /* argument outside its domain */
  THORP_ERR_CAPACITY = 2,  /* exceeds a hard size limit (n! blowup) */
  THORP_ERR_INVARIANT = 3, /* internal invariant violated during a run */
  THORP_ERR_ARG = 4,       /* malformed config / null pointer */
} thorp_status;

const char* thorp_version(void);
const char* thorp_last_error(void);
void thorp_string_free(char* s);

/* ---- position bit arithmetic -------------------------------------- */

/* x = 2L + R; L are the leftmost d-1 bits, R the last bit. */
thorp_status thorp_split_position(uint32_t x, int d, uint32_t* l_out,
                                  int* r_out);
/* One reverse-shuffle round image of a position: (L,R) -> (R^z, L). */
thorp_status thorp_round_image(uint32_t x, int z, int d, uint32_t* out);

/* ---- permutations -------------------------------------------------- */

/* locs[i] = position of card i; locs must be a bijection on [0, n). */
thorp_status thorp_perm_rank(const uint32_t* locs, uint32_t n, uint64_t* out);
thorp_status thorp_perm_unrank(uint64_t rank, uint32_t n, uint32_t* locs_out);

/* One reverse round under a seeded oracle at round index t. */
thorp_status thorp_reverse_round_seeded(const uint32_t* locs, uint32_t n,
                                        uint32_t t, uint64_t seed,
                                        uint32_t* locs_out);
/* One forward round; coins has n/2 entries in {0, 1}. */
thorp_status thorp_forward_round(const uint32_t* locs, uint32_t n,
                                 const int* coins, uint32_t* locs_out);

/* ---- bit oracles --------------------------------------------------- */

typedef struct thorp_oracle thorp_oracle;

thorp_status thorp_oracle_seeded(uint64_t seed, thorp_oracle** out);
/* key is exactly 16 bytes. */
thorp_status thorp_oracle_keyed(const uint8_t* key, thorp_oracle** out);
/* bits laid out row-major by round: bits[t * 2^(d-1) + l]. */
thorp_status thorp_oracle_tabular(int d, uint32_t rounds, const uint8_t* bits,
                                  thorp_oracle** out);
thorp_status thorp_oracle_bit(const thorp_oracle* z, uint32_t l, uint32_t t,
                              int* out);
void thorp_oracle_free(thorp_oracle* z);

/* ---- exact distributions over S_n (d <= 3) ------------------------- */

typedef struct thorp_dist thorp_dist;

thorp_status thorp_dist_uniform(int d, thorp_dist** out);
thorp_status thorp_dist_point_mass(int d, uint64_t rank, thorp_dist** out);
thorp_status thorp_dist_from_probs(int d, const double* probs, uint64_t len,
                                   thorp_dist** out);
thorp_status thorp_dist_len(const thorp_dist* mu, uint64_t* out);
thorp_status thorp_dist_probs(const thorp_dist* mu, double* out, uint64_t len);
/* One exactly-averaged shuffle round applied in place. */
thorp_status thorp_dist_step(thorp_dist* mu);
thorp_status thorp_dist_entropy(const thorp_dist* mu, double* out);
/* Unhalved L1 distance, sum |p - q|, in [0, 2]. */
thorp_status thorp_dist_l1(const thorp_dist* p, const thorp_dist* q,
                           double* out);
/* JSON document with d, length, convention tags and the probabilities. */
thorp_status thorp_dist_to_json(const thorp_dist* mu, char** out);
thorp_status thorp_dist_from_json(const char* text, thorp_dist** out);
void thorp_dist_free(thorp_dist* mu);

/* ---- analysis scalars ---------------------------------------------- */

thorp_status thorp_d_scalar(double p, double q, double* out);
thorp_status thorp_mixing_time(int d, double threshold, uint32_t* out);
thorp_status thorp_pair_mixing_time(int d, double threshold, uint32_t* out);

/* ---- experiment runner --------------------------------------------- */

/* config_json: {"command": "mix"|"entropy-decay"|"contract"|"pair"|
 *               "couple"|"lemmas", ...per-command fields...,
 *               "format": "json"|"csv"}
 * Produces the final output document; deterministic per config. */
thorp_status thorp_experiment_run(const char* config_json, char** out_doc);

#ifdef __cplusplus
}
#endif

#endif /* THORP_H */
