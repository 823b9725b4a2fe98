// Copyright 2026 The bc2ta Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// bc2ta.h -- C interface to the bytecode-to-timed-automata toolchain.
//
// Objects are opaque handles released with the matching *_free function.
// Every call returns a bc2ta_status; on failure the message is available
// from bc2ta_last_error() on the same thread until the next call. Strings
// handed out by the library are released with bc2ta_string_free().

#ifndef BC2TA_BC2TA_H_
#define BC2TA_BC2TA_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define BC2TA_API __declspec(dllexport)
#else
#define BC2TA_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bc2ta_status {
  BC2TA_OK = 0,
  BC2TA_MALFORMED_CLASS_FILE,
  BC2TA_UNSUPPORTED_VERSION,
  BC2TA_UNSUPPORTED_OPCODE,
  BC2TA_SYNTAX_ERROR,
  BC2TA_DUPLICATE_OFFSET,
  BC2TA_DANGLING_BRANCH_TARGET,
  BC2TA_MAIN_CLASS_NOT_FOUND,
  BC2TA_CLASS_RESOLUTION_ERROR,
  BC2TA_INCONSISTENT_MODEL,
  BC2TA_SERIALIZATION_VERSION_MISMATCH,
  BC2TA_CORRUPT_MODEL_FILE,
  BC2TA_UNKNOWN_LOOP_HEAD,
  BC2TA_INVALID_BOUNDS,
  BC2TA_INDIRECT_RECURSION,
  BC2TA_CYCLIC_CALL_GRAPH,
  BC2TA_UNTIMED_INSTRUCTION,
  BC2TA_UNLIMITED_LOOP,
  BC2TA_UNMANGLED_IDENTIFIER,
  BC2TA_DANGLING_REFERENCE,
  BC2TA_XML_SYNTAX_ERROR,
  BC2TA_UNSUPPORTED_CONSTRUCT,
  BC2TA_UNSUPPORTED_QUERY,
  BC2TA_STATE_LIMIT_EXCEEDED,
  BC2TA_BOUND_EXCEEDS_CAP,
  BC2TA_NON_TERMINATING_MAIN,
  BC2TA_INVALID_ARGUMENT,
  BC2TA_IO_ERROR,
  BC2TA_INTERNAL_ERROR,
} bc2ta_status;

typedef struct bc2ta_project bc2ta_project;
typedef struct bc2ta_system bc2ta_system;

BC2TA_API const char* bc2ta_version(void);
BC2TA_API const char* bc2ta_last_error(void);
BC2TA_API const char* bc2ta_status_name(bc2ta_status status);
BC2TA_API void bc2ta_string_free(char* text);

// --- control-flow model ---------------------------------------------------

// `roots` are directories, jars, .class or .jbct files. `filter` may be
// empty; entries are package or class-name prefixes. `main_method` and
// `main_descriptor` may be NULL for the usual static main.
BC2TA_API bc2ta_status bc2ta_project_derive(const char* const* roots, size_t root_count,
                                            const char* main_class, const char* main_method,
                                            const char* main_descriptor,
                                            const char* const* filter, size_t filter_count,
                                            bc2ta_project** out);
BC2TA_API bc2ta_status bc2ta_project_load(const char* path, bc2ta_project** out);
BC2TA_API bc2ta_status bc2ta_project_save(const bc2ta_project* project, const char* path);
BC2TA_API void bc2ta_project_free(bc2ta_project* project);

typedef struct bc2ta_stats {
  uint64_t classes;          // A
  uint64_t methods;          // B
  uint64_t loops;            // C
  uint64_t instructions;     // D
  uint64_t edges;            // E
  uint64_t resolvable_calls; // F
  uint64_t implementations;  // G
  uint64_t returns;          // H
  uint64_t total;
} bc2ta_stats;

BC2TA_API bc2ta_status bc2ta_project_stats(const bc2ta_project* project, bc2ta_stats* out);
BC2TA_API bc2ta_status bc2ta_project_stats_text(const bc2ta_project* project, char** out);

typedef enum bc2ta_recursion_policy {
  BC2TA_RECURSION_ERROR = 0,
  BC2TA_RECURSION_REPORT = 1,
} bc2ta_recursion_policy;

typedef struct bc2ta_augment_options {
  const char* loop_limits_path;  // JSON, may be NULL
  int64_t default_loop_limit;
  bc2ta_recursion_policy on_indirect_recursion;
  const char* timing_path;  // JSON, may be NULL
  int group;
} bc2ta_augment_options;

BC2TA_API void bc2ta_augment_options_init(bc2ta_augment_options* options);

// `report` (may be NULL) receives the recursion report, also on
// BC2TA_INDIRECT_RECURSION.
BC2TA_API bc2ta_status bc2ta_project_augment(const bc2ta_project* project,
                                             const bc2ta_augment_options* options,
                                             bc2ta_project** out, char** report);

// --- timed-automata system ------------------------------------------------

// `overrides` holds "Class=N" entries replacing computed instance counts.
BC2TA_API bc2ta_status bc2ta_transform(const bc2ta_project* project,
                                       const char* const* overrides, size_t override_count,
                                       bc2ta_system** out);
BC2TA_API bc2ta_status bc2ta_system_load(const char* path, bc2ta_system** out);
BC2TA_API bc2ta_status bc2ta_system_save(const bc2ta_system* system, const char* path);
BC2TA_API bc2ta_status bc2ta_system_load_xml(const char* xml_text, bc2ta_system** out);
BC2TA_API void bc2ta_system_free(bc2ta_system* system);

typedef struct bc2ta_query_options {
  int64_t bound_x;
  int literal_finish_query;
  const char* const* leads_to;
  size_t leads_to_count;
} bc2ta_query_options;

BC2TA_API void bc2ta_query_options_init(bc2ta_query_options* options);
// Replaces the system's queries with the default set.
BC2TA_API bc2ta_status bc2ta_system_set_default_queries(bc2ta_system* system,
                                                        const bc2ta_query_options* options);
BC2TA_API bc2ta_status bc2ta_system_query_count(const bc2ta_system* system, size_t* out);
BC2TA_API bc2ta_status bc2ta_system_query_text(const bc2ta_system* system, size_t index, char** out);

BC2TA_API bc2ta_status bc2ta_emit_xml(const bc2ta_system* system, char** out);
BC2TA_API bc2ta_status bc2ta_emit_queries(const bc2ta_system* system, char** out);

// --- checking -------------------------------------------------------------

typedef struct bc2ta_check_options {
  int symmetry;
  uint64_t state_limit;  // 0 selects BC2TA_STATE_LIMIT or the default
  int want_trace;
} bc2ta_check_options;

BC2TA_API void bc2ta_check_options_init(bc2ta_check_options* options);

typedef struct bc2ta_verdict {
  int satisfied;
  uint64_t states_explored;
  char* trace;  // NULL when there is no witness; free with bc2ta_string_free
} bc2ta_verdict;

// `query` is "A[] p", "E<> p" or "p --> q" (the last is rejected).
BC2TA_API bc2ta_status bc2ta_check(const bc2ta_system* system, const char* query,
                                   const bc2ta_check_options* options, bc2ta_verdict* out);
BC2TA_API bc2ta_status bc2ta_min_wcet_bound(const bc2ta_system* system, int64_t cap,
                                            const bc2ta_check_options* options, int64_t* out);

typedef struct bc2ta_space_stats {
  uint64_t states;
  uint64_t transitions;
  uint64_t delay_states;
  uint64_t max_frontier;
  int symmetry_reduced;
} bc2ta_space_stats;

BC2TA_API bc2ta_status bc2ta_explore(const bc2ta_system* system, int symmetry, int64_t global_cap,
                                     uint64_t state_limit, bc2ta_space_stats* out);

#ifdef __cplusplus
}  // extern "C"
#endif

#endif  // BC2TA_BC2TA_H_
