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
// bc2ta_capi.cpp -- extern "C" wrappers; exceptions never cross this file.

#include "bc2ta/bc2ta.h"

#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include "bc2ta/analyses.hpp"
#include "bc2ta/cfgmodel.hpp"
#include "bc2ta/checker.hpp"
#include "bc2ta/error.hpp"
#include "bc2ta/frontend.hpp"
#include "bc2ta/tamodel.hpp"
#include "bc2ta/uppaalio.hpp"

struct bc2ta_project {
  bc2ta::cfg::Project model;
};

struct bc2ta_system {
  bc2ta::ta::TaSystem model;
};

namespace {

thread_local std::string g_last_error;

bc2ta_status status_of(bc2ta::ErrorCode code) {
  return static_cast<bc2ta_status>(static_cast<int>(code) + 1);
}

template <class F>
bc2ta_status guarded(F&& body) {
  g_last_error.clear();
  try {
    body();
    return BC2TA_OK;
  } catch (const bc2ta::Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return BC2TA_INTERNAL_ERROR;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return BC2TA_INTERNAL_ERROR;
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw bc2ta::Error(bc2ta::ErrorCode::kInvalidArgument, what);
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::vector<std::string> strings(const char* const* items, size_t count) {
  std::vector<std::string> out;
  for (size_t i = 0; i < count; ++i) {
    require(items[i] != nullptr, "null string in list");
    out.emplace_back(items[i]);
  }
  return out;
}

}  // namespace

extern "C" {

const char* bc2ta_version(void) { return "1.0.0"; }

const char* bc2ta_last_error(void) { return g_last_error.c_str(); }

const char* bc2ta_status_name(bc2ta_status status) {
  if (status == BC2TA_OK) return "Ok";
  if (status == BC2TA_INTERNAL_ERROR) return "InternalError";
  if (status < BC2TA_OK || status > BC2TA_INTERNAL_ERROR) return "Unknown";
  return bc2ta::error_code_name(static_cast<bc2ta::ErrorCode>(status - 1)).data();
}

void bc2ta_string_free(char* text) { std::free(text); }

bc2ta_status bc2ta_project_derive(const char* const* roots, size_t root_count, const char* main_class,
                                  const char* main_method, const char* main_descriptor,
                                  const char* const* filter, size_t filter_count, bc2ta_project** out) {
  return guarded([&] {
    require(out != nullptr && main_class != nullptr && (roots != nullptr || root_count == 0), "null argument");
    std::vector<std::filesystem::path> paths;
    for (const auto& r : strings(roots, root_count)) paths.emplace_back(r);
    const auto loaded = bc2ta::frontend::load_project(paths, main_class, strings(filter, filter_count));
    auto project = std::make_unique<bc2ta_project>();
    project->model = bc2ta::cfg::build_project(loaded.classes, loaded.external_stubs, main_class,
                                               main_method ? main_method : "main",
                                               main_descriptor ? main_descriptor : "([Ljava/lang/String;)V");
    *out = project.release();
  });
}

bc2ta_status bc2ta_project_load(const char* path, bc2ta_project** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    auto project = std::make_unique<bc2ta_project>();
    project->model = bc2ta::cfg::load_model(path);
    *out = project.release();
  });
}

bc2ta_status bc2ta_project_save(const bc2ta_project* project, const char* path) {
  return guarded([&] {
    require(project != nullptr && path != nullptr, "null argument");
    bc2ta::cfg::save_model(project->model, path);
  });
}

void bc2ta_project_free(bc2ta_project* project) { delete project; }

bc2ta_status bc2ta_project_stats(const bc2ta_project* project, bc2ta_stats* out) {
  return guarded([&] {
    require(project != nullptr && out != nullptr, "null argument");
    const auto s = bc2ta::cfg::compute_stats(project->model);
    *out = {s.class_count,           s.method_count,
            s.loop_count,            s.instruction_count,
            s.edge_count,            s.resolvable_call_count,
            s.invocable_implementation_count, s.return_instruction_count,
            s.total};
  });
}

bc2ta_status bc2ta_project_stats_text(const bc2ta_project* project, char** out) {
  return guarded([&] {
    require(project != nullptr && out != nullptr, "null argument");
    *out = dup_string(bc2ta::cfg::format_stats(bc2ta::cfg::compute_stats(project->model)));
  });
}

void bc2ta_augment_options_init(bc2ta_augment_options* options) {
  if (options == nullptr) return;
  *options = {nullptr, 5, BC2TA_RECURSION_ERROR, nullptr, 0};
}

bc2ta_status bc2ta_project_augment(const bc2ta_project* project, const bc2ta_augment_options* options,
                                   bc2ta_project** out, char** report) {
  if (report != nullptr) *report = nullptr;
  return guarded([&] {
    require(project != nullptr && options != nullptr && out != nullptr, "null argument");
    require(options->default_loop_limit >= 1, "default loop limit must be at least 1");
    bc2ta::analysis::AugmentOptions opts;
    if (options->loop_limits_path) opts.loop_limits = bc2ta::analysis::load_loop_limits(options->loop_limits_path);
    opts.default_loop_limit = options->default_loop_limit;
    opts.on_indirect_recursion = options->on_indirect_recursion == BC2TA_RECURSION_REPORT
                                     ? bc2ta::analysis::RecursionPolicy::kReport
                                     : bc2ta::analysis::RecursionPolicy::kError;
    if (options->timing_path) opts.timing = bc2ta::analysis::load_timing_table(options->timing_path);
    opts.group = options->group != 0;
    try {
      auto result = bc2ta::analysis::augment(project->model, opts);
      if (report != nullptr) *report = dup_string(result.recursion.to_text());
      auto p = std::make_unique<bc2ta_project>();
      p->model = std::move(result.project);
      *out = p.release();
    } catch (const bc2ta::Error& e) {
      if (e.code() == bc2ta::ErrorCode::kIndirectRecursion && report != nullptr) {
        const auto graph = bc2ta::analysis::build_call_graph(project->model);
        *report = dup_string(bc2ta::analysis::detect_recursion(graph).to_text());
      }
      throw;
    }
  });
}

bc2ta_status bc2ta_transform(const bc2ta_project* project, const char* const* overrides, size_t override_count,
                             bc2ta_system** out) {
  return guarded([&] {
    require(project != nullptr && out != nullptr, "null argument");
    bc2ta::ta::TransformOptions opts;
    for (const auto& item : strings(overrides, override_count)) {
      const auto eq = item.find('=');
      require(eq != std::string::npos && eq > 0, "instance override must look like Class=N");
      char* end = nullptr;
      const long long n = std::strtoll(item.c_str() + eq + 1, &end, 10);
      require(end != nullptr && *end == '\0' && n >= 1 && eq + 1 < item.size(),
              "instance count must be a positive integer");
      opts.instance_overrides[item.substr(0, eq)] = n;
    }
    auto sys = std::make_unique<bc2ta_system>();
    sys->model = bc2ta::ta::transform(project->model, opts);
    *out = sys.release();
  });
}

bc2ta_status bc2ta_system_load(const char* path, bc2ta_system** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    auto sys = std::make_unique<bc2ta_system>();
    sys->model = bc2ta::ta::load_system(path);
    *out = sys.release();
  });
}

bc2ta_status bc2ta_system_save(const bc2ta_system* system, const char* path) {
  return guarded([&] {
    require(system != nullptr && path != nullptr, "null argument");
    bc2ta::ta::save_system(system->model, path);
  });
}

bc2ta_status bc2ta_system_load_xml(const char* xml_text, bc2ta_system** out) {
  return guarded([&] {
    require(xml_text != nullptr && out != nullptr, "null argument");
    auto sys = std::make_unique<bc2ta_system>();
    sys->model = bc2ta::uppaal::parse_xml(xml_text);
    *out = sys.release();
  });
}

void bc2ta_system_free(bc2ta_system* system) { delete system; }

void bc2ta_query_options_init(bc2ta_query_options* options) {
  if (options == nullptr) return;
  *options = {20, 0, nullptr, 0};
}

bc2ta_status bc2ta_system_set_default_queries(bc2ta_system* system, const bc2ta_query_options* options) {
  return guarded([&] {
    require(system != nullptr && options != nullptr, "null argument");
    bc2ta::ta::QueryOptions opts;
    opts.bound_x = options->bound_x;
    opts.literal_finish_query = options->literal_finish_query != 0;
    opts.leads_to = strings(options->leads_to, options->leads_to_count);
    system->model.queries = bc2ta::ta::default_queries(system->model, opts);
  });
}

bc2ta_status bc2ta_system_query_count(const bc2ta_system* system, size_t* out) {
  return guarded([&] {
    require(system != nullptr && out != nullptr, "null argument");
    *out = system->model.queries.size();
  });
}

bc2ta_status bc2ta_system_query_text(const bc2ta_system* system, size_t index, char** out) {
  return guarded([&] {
    require(system != nullptr && out != nullptr, "null argument");
    require(index < system->model.queries.size(), "query index out of range");
    *out = dup_string(system->model.queries[index].text());
  });
}

bc2ta_status bc2ta_emit_xml(const bc2ta_system* system, char** out) {
  return guarded([&] {
    require(system != nullptr && out != nullptr, "null argument");
    *out = dup_string(bc2ta::uppaal::emit_xml(system->model));
  });
}

bc2ta_status bc2ta_emit_queries(const bc2ta_system* system, char** out) {
  return guarded([&] {
    require(system != nullptr && out != nullptr, "null argument");
    *out = dup_string(bc2ta::uppaal::emit_queries(system->model.queries));
  });
}

void bc2ta_check_options_init(bc2ta_check_options* options) {
  if (options == nullptr) return;
  *options = {0, 0, 1};
}

namespace {

bc2ta::check::CheckOptions check_options(const bc2ta_check_options* options) {
  bc2ta::check::CheckOptions opts;
  opts.state_limit = bc2ta::check::state_limit_from_env();
  if (options != nullptr) {
    opts.symmetry = options->symmetry != 0;
    opts.want_trace = options->want_trace != 0;
    if (options->state_limit != 0) opts.state_limit = options->state_limit;
  }
  return opts;
}

}  // namespace

bc2ta_status bc2ta_check(const bc2ta_system* system, const char* query, const bc2ta_check_options* options,
                         bc2ta_verdict* out) {
  return guarded([&] {
    require(system != nullptr && query != nullptr && out != nullptr, "null argument");
    *out = {0, 0, nullptr};
    const auto verdict =
        bc2ta::check::check(system->model, bc2ta::ta::parse_query(query), check_options(options));
    out->satisfied = verdict.satisfied ? 1 : 0;
    out->states_explored = verdict.states_explored;
    if (verdict.witness) out->trace = dup_string(verdict.witness->to_text());
  });
}

bc2ta_status bc2ta_min_wcet_bound(const bc2ta_system* system, int64_t cap, const bc2ta_check_options* options,
                                  int64_t* out) {
  return guarded([&] {
    require(system != nullptr && out != nullptr, "null argument");
    *out = bc2ta::check::min_wcet_bound(system->model, cap, check_options(options));
  });
}

bc2ta_status bc2ta_explore(const bc2ta_system* system, int symmetry, int64_t global_cap, uint64_t state_limit,
                           bc2ta_space_stats* out) {
  return guarded([&] {
    require(system != nullptr && out != nullptr, "null argument");
    bc2ta::check::ExploreOptions opts;
    opts.symmetry = symmetry != 0;
    opts.global_cap = global_cap;
    opts.state_limit = state_limit != 0 ? state_limit : bc2ta::check::state_limit_from_env();
    const auto s = bc2ta::check::explore(system->model, opts);
    *out = {s.states, s.transitions, s.delay_states, s.max_frontier, s.symmetry_reduced ? 1 : 0};
  });
}

}  // extern "C"
