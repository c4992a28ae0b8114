/*
 * sumprodlab C API
 *
 * Exact computations over prime fields F_p: additive/multiplicative energies,
 * product-of-difference sets, solution counts, and the experiment runner
 * behind the sumprodlab CLI. All handles are opaque; every fallible call
 * returns an spl_status, with a thread-local detail message available from
 * spl_last_error(). Exact integers and rationals cross the ABI as decimal
 * strings ("123", "424/25") so no precision is lost.
 */

#ifndef SUMPRODLAB_H
#define SUMPRODLAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SPL_API __declspec(dllexport)
#else
#define SPL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum spl_status {
    SPL_OK = 0,
    SPL_E_INVALID_ARGUMENT = 1,
    SPL_E_NOT_PRIME = 2,
    SPL_E_TOO_LARGE = 3,
    SPL_E_BAD_PARAMETER = 4,
    SPL_E_SIZE_TOO_LARGE = 5,
    SPL_E_ZERO_INVERSE = 6,
    SPL_E_ZERO_DILATION = 7,
    SPL_E_FIELD_MISMATCH = 8,
    SPL_E_OVERFLOW_GUARD = 9,
    SPL_E_EMPTY_SET = 10,
    SPL_E_ZERO_IN_SET = 11,
    SPL_E_BUDGET_EXCEEDED = 12,
    SPL_E_NOT_AFFINE_IMAGE = 13,
    SPL_E_VALIDATION = 14,
    SPL_E_IO = 15,
    SPL_E_ALL_TRIALS_FAILED = 16,
    SPL_E_BUFFER_TOO_SMALL = 17,
    SPL_E_INTERNAL = 18
} spl_status;

typedef struct spl_field spl_field;
typedef struct spl_set spl_set;
typedef struct spl_spectrum spl_spectrum;
typedef struct spl_config spl_config;

SPL_API const char* spl_version(void);
SPL_API const char* spl_status_name(spl_status status);
/* Message for the most recent failing call on this thread; never NULL. */
SPL_API const char* spl_last_error(void);

/* ---- prime field ------------------------------------------------------- */

SPL_API int spl_is_prime(uint64_t n);

/* Builds dlog/exp tables; p must be prime and within the table cap
 * (default 2^26). Destroy with spl_field_destroy; sets keep their field
 * alive, so destruction order does not matter. */
SPL_API spl_status spl_field_create(uint64_t p, spl_field** out);
SPL_API spl_status spl_field_create_capped(uint64_t p, uint64_t table_cap, spl_field** out);
SPL_API void spl_field_destroy(spl_field* field);

SPL_API uint64_t spl_field_prime(const spl_field* field);
SPL_API uint64_t spl_field_generator(const spl_field* field);
SPL_API spl_status spl_field_exp(const spl_field* field, uint64_t k, uint64_t* out);
SPL_API spl_status spl_field_dlog(const spl_field* field, uint64_t x, uint64_t* out);
SPL_API spl_status spl_field_pow(const spl_field* field, uint64_t base, uint64_t e, uint64_t* out);
SPL_API spl_status spl_field_inverse(const spl_field* field, uint64_t a, uint64_t* out);

/* ---- sets in F_p -------------------------------------------------------- */

SPL_API spl_status spl_set_from_elements(const spl_field* field, const uint64_t* elems, size_t count,
                                         spl_set** out);
SPL_API spl_status spl_set_random(const spl_field* field, uint64_t n, uint64_t seed, spl_set** out);
SPL_API spl_status spl_set_interval(const spl_field* field, uint64_t a0, uint64_t n, spl_set** out);
SPL_API spl_status spl_set_geometric(const spl_field* field, uint64_t ratio, uint64_t a0, uint64_t n,
                                     spl_set** out);
SPL_API spl_status spl_set_subgroup(const spl_field* field, uint64_t d, spl_set** out);
SPL_API spl_status spl_set_affine_image(const spl_set* set, uint64_t lambda, uint64_t c,
                                        spl_set** out);
/* sign is '+' or '-' */
SPL_API spl_status spl_set_pointwise_sum(const spl_set* a, const spl_set* b, char sign,
                                         spl_set** out);
SPL_API spl_status spl_set_pointwise_product(const spl_set* a, const spl_set* b, spl_set** out);
SPL_API void spl_set_destroy(spl_set* set);

SPL_API uint64_t spl_set_size(const spl_set* set);
SPL_API int spl_set_contains(const spl_set* set, uint64_t x);
/* Copies the sorted elements; fails with SPL_E_BUFFER_TOO_SMALL if capacity
 * is short, reporting the required count in *written. */
SPL_API spl_status spl_set_elements(const spl_set* set, uint64_t* buf, size_t capacity,
                                    size_t* written);

/* ---- energies ----------------------------------------------------------- */

/* E_+(A, xi A) for all xi at once. */
SPL_API spl_status spl_spectrum_create(const spl_set* set, spl_spectrum** out);
SPL_API void spl_spectrum_destroy(spl_spectrum* spectrum);
SPL_API spl_status spl_spectrum_value(const spl_spectrum* spectrum, uint64_t xi, char* buf,
                                      size_t capacity);

SPL_API spl_status spl_additive_energy(const spl_set* set, uint64_t xi, char* buf, size_t capacity);
SPL_API spl_status spl_mult_energy(const spl_set* set, uint64_t x, char* buf, size_t capacity);

typedef struct spl_bkt_result {
    char lhs[64];
    char rhs[64];
    int equal;
} spl_bkt_result;

SPL_API spl_status spl_bkt_check(const spl_set* set, spl_bkt_result* out);

/* ---- product-of-difference counts --------------------------------------- */

typedef struct spl_count_result {
    char n_total[48];
    char n_zero[48];
    char n_nonzero[48];
    char main_term[128]; /* rational "num/den" */
    uint64_t support_size;
} spl_count_result;

/* signs: "mm", "mp", "pm" or "pp"; method: "brute", "repfn" or "transform". */
SPL_API spl_status spl_solution_count(const spl_set* a, const spl_set* b, const spl_set* c,
                                      const spl_set* d, const char* signs, const char* method,
                                      spl_count_result* out);

SPL_API spl_status spl_char_fourth_moment(const spl_set* set, char* buf, size_t capacity);

/* ---- experiment runner --------------------------------------------------- */

/* command: bkt | spectrum | count | sweep | census | rudnev | murphy |
 * split | charmoment */
SPL_API spl_status spl_config_create(const char* command, spl_config** out);
SPL_API void spl_config_destroy(spl_config* config);

SPL_API spl_status spl_config_add_prime(spl_config* config, uint64_t p);
SPL_API spl_status spl_config_set_family(spl_config* config, const char* descriptor);
SPL_API spl_status spl_config_set_size(spl_config* config, uint64_t n);
SPL_API spl_status spl_config_set_size_rule(spl_config* config, double alpha, double constant);
SPL_API spl_status spl_config_set_trials(spl_config* config, uint32_t trials);
SPL_API spl_status spl_config_set_seed(spl_config* config, uint64_t seed);
SPL_API spl_status spl_config_set_signs(spl_config* config, const char* signs);
SPL_API spl_status spl_config_set_method(spl_config* config, const char* method);
/* census thresholds, decimal or rational text ("2", "7/2") */
SPL_API spl_status spl_config_add_threshold(spl_config* config, const char* k);
SPL_API spl_status spl_config_set_split_threshold(spl_config* config, const char* k);
/* rudnev/murphy dilate sets: "first:m" or "random:m" */
SPL_API spl_status spl_config_set_dilate_rule(spl_config* config, const char* rule);
SPL_API spl_status spl_config_set_affine_bcd(spl_config* config, int enabled);
/* format: "csv" or "jsonl"; path "-" writes to stdout */
SPL_API spl_status spl_config_set_output(spl_config* config, const char* path, const char* format);
SPL_API spl_status spl_config_set_threads(spl_config* config, uint32_t threads);

typedef struct spl_run_stats {
    uint64_t rows;
    uint64_t trials_total;
    uint64_t trials_failed;
} spl_run_stats;

/* Validates, runs every (prime, trial) task, writes the output file.
 * SPL_E_ALL_TRIALS_FAILED if no trial produced a clean row (the file is
 * still written, with per-row error messages). */
SPL_API spl_status spl_run(const spl_config* config, spl_run_stats* stats);

#ifdef __cplusplus
}
#endif

#endif /* SUMPRODLAB_H */
