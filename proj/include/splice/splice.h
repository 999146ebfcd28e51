#ifndef SPLICE_SPLICE_H
#define SPLICE_SPLICE_H

#include <stddef.h>
#include <stdint.h>

#if defined(SPLICE_BUILDING_LIBRARY)
#define SPLICE_API __attribute__((visibility("default")))
#else
#define SPLICE_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum splice_status {
  SPLICE_OK = 0,
  SPLICE_ERR_IO = 1,
  SPLICE_ERR_SYNTAX = 2,
  SPLICE_ERR_TYPE = 3,
  SPLICE_ERR_REQUIREMENT = 4, /* missing or malformed TEST / API_cons */
  SPLICE_ERR_EMPTY_INDEX = 5,
  SPLICE_ERR_INVALID_ARGUMENT = 6,
  SPLICE_ERR_INTERNAL = 7
} splice_status;

typedef struct splice_index splice_index;
typedef struct splice_draft splice_draft;
typedef struct splice_fs splice_fs;
typedef struct splice_config splice_config;
typedef struct splice_neighbors splice_neighbors;
typedef struct splice_result splice_result;

/* Message of the last failed call on this thread; never NULL. */
SPLICE_API const char* splice_last_error(void);
SPLICE_API const char* splice_status_name(splice_status s);

/* Corpus index */
SPLICE_API splice_status splice_index_build(const char* corpus_dir, splice_index** out);
SPLICE_API splice_status splice_index_load(const char* path, splice_index** out);
SPLICE_API splice_status splice_index_save(const splice_index* index, const char* path);
SPLICE_API void splice_index_free(splice_index* index);
SPLICE_API size_t splice_index_size(const splice_index* index);
SPLICE_API const char* splice_index_entry_path(const splice_index* index, uint32_t id);
SPLICE_API const char* splice_index_entry_name(const splice_index* index, uint32_t id);
/* Files or functions skipped while building (always 0 for a loaded index). */
SPLICE_API size_t splice_index_skipped_count(const splice_index* index);
SPLICE_API const char* splice_index_skipped_message(const splice_index* index, size_t i);

/* Drafts. API_cons automaton paths resolve against base_dir. */
SPLICE_API splice_status splice_draft_parse(const char* text, const char* base_dir, splice_draft** out);
SPLICE_API splice_status splice_draft_load(const char* path, splice_draft** out);
SPLICE_API void splice_draft_free(splice_draft* draft);
SPLICE_API size_t splice_draft_expr_holes(const splice_draft* draft);
SPLICE_API size_t splice_draft_stmt_holes(const splice_draft* draft);

/* Virtual file system seen by interpreted programs. */
SPLICE_API splice_status splice_fs_empty(splice_fs** out);
SPLICE_API splice_status splice_fs_load(const char* manifest_path, splice_fs** out);
SPLICE_API void splice_fs_free(splice_fs* fs);

/* Search configuration; a new config holds the defaults. */
SPLICE_API splice_status splice_config_new(splice_config** out);
SPLICE_API void splice_config_free(splice_config* cfg);
SPLICE_API splice_status splice_config_set_k(splice_config* cfg, size_t k);
/* Both weights non-negative and summing to 1. */
SPLICE_API splice_status splice_config_set_weights(splice_config* cfg, double nl, double names);
SPLICE_API splice_status splice_config_set_max_solutions(splice_config* cfg, size_t n);
/* Seconds; 0 disables the limit. */
SPLICE_API splice_status splice_config_set_time_limit(splice_config* cfg, double seconds);
SPLICE_API splice_status splice_config_set_step_fuel(splice_config* cfg, uint64_t steps);
SPLICE_API splice_status splice_config_set_test_time_limit(splice_config* cfg, double seconds);
SPLICE_API splice_status splice_config_set_type_matching(splice_config* cfg, int on);
SPLICE_API splice_status splice_config_set_role_matching(splice_config* cfg, int on);
SPLICE_API splice_status splice_config_set_constant_adaptation(splice_config* cfg, int on);
SPLICE_API splice_status splice_config_set_adapt_budget(splice_config* cfg, size_t n);
SPLICE_API splice_status splice_config_set_max_window(splice_config* cfg, size_t n);
/* 0 uses the machine's parallelism. */
SPLICE_API splice_status splice_config_set_workers(splice_config* cfg, unsigned workers);

/* k-nearest donors of a draft, best first. */
SPLICE_API splice_status splice_search(const splice_index* index, const splice_draft* draft, const splice_config* cfg,
                                       splice_neighbors** out);
SPLICE_API void splice_neighbors_free(splice_neighbors* n);
SPLICE_API size_t splice_neighbors_count(const splice_neighbors* n);
SPLICE_API uint32_t splice_neighbors_id(const splice_neighbors* n, size_t i);
SPLICE_API double splice_neighbors_score(const splice_neighbors* n, size_t i);

/* Fills the draft's holes from its nearest donors. fs may be NULL. */
SPLICE_API splice_status splice_run(const splice_index* index, const splice_draft* draft, const splice_config* cfg,
                                    const splice_fs* fs, splice_result** out);
SPLICE_API void splice_result_free(splice_result* r);
SPLICE_API size_t splice_result_count(const splice_result* r);
SPLICE_API const char* splice_result_program(const splice_result* r, size_t i);
SPLICE_API uint32_t splice_result_donor(const splice_result* r, size_t i);
SPLICE_API size_t splice_result_donor_rank(const splice_result* r, size_t i);
SPLICE_API size_t splice_result_discovery_order(const splice_result* r, size_t i);
SPLICE_API size_t splice_result_renaming_count(const splice_result* r, size_t i);
SPLICE_API splice_status splice_result_renaming(const splice_result* r, size_t i, size_t j, const char** from,
                                                const char** to, int* is_function);
SPLICE_API int splice_result_timed_out(const splice_result* r);
SPLICE_API uint64_t splice_result_candidates_evaluated(const splice_result* r);
SPLICE_API uint64_t splice_result_tests_run(const splice_result* r);
SPLICE_API double splice_result_wall_time(const splice_result* r);

/* Donors among the top k that complete the draft on their own. */
SPLICE_API splice_status splice_precision(const splice_index* index, const splice_draft* draft,
                                          const splice_config* cfg, const splice_fs* fs, size_t* high_quality,
                                          size_t* donors);

#ifdef __cplusplus
}
#endif

#endif
