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
// bc2ta_main.cpp -- command-line driver: derive, augment, transform, emit,
// check and stats over persisted model files, plus a single-shot --all mode.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bc2ta/bc2ta.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitOther = 1;
constexpr int kExitUsage = 2;
constexpr int kExitParse = 3;
constexpr int kExitResolution = 4;
constexpr int kExitCycle = 5;
constexpr int kExitQueryFailed = 6;
constexpr int kExitStateLimit = 7;

int exit_code_for(bc2ta_status s) {
  switch (s) {
    case BC2TA_OK:
      return kExitOk;
    case BC2TA_MALFORMED_CLASS_FILE:
    case BC2TA_UNSUPPORTED_VERSION:
    case BC2TA_UNSUPPORTED_OPCODE:
    case BC2TA_SYNTAX_ERROR:
    case BC2TA_DUPLICATE_OFFSET:
    case BC2TA_DANGLING_BRANCH_TARGET:
    case BC2TA_INCONSISTENT_MODEL:
    case BC2TA_SERIALIZATION_VERSION_MISMATCH:
    case BC2TA_CORRUPT_MODEL_FILE:
    case BC2TA_XML_SYNTAX_ERROR:
    case BC2TA_INVALID_BOUNDS:
    case BC2TA_UNKNOWN_LOOP_HEAD:
      return kExitParse;
    case BC2TA_MAIN_CLASS_NOT_FOUND:
    case BC2TA_CLASS_RESOLUTION_ERROR:
      return kExitResolution;
    case BC2TA_INDIRECT_RECURSION:
    case BC2TA_CYCLIC_CALL_GRAPH:
      return kExitCycle;
    case BC2TA_STATE_LIMIT_EXCEEDED:
      return kExitStateLimit;
    case BC2TA_INVALID_ARGUMENT:
    case BC2TA_UNSUPPORTED_QUERY:
      return kExitUsage;
    default:
      return kExitOther;
  }
}

// Carries a failed library call up to main().
struct Failure {
  int exit_code;
};

void ok(bc2ta_status s) {
  if (s == BC2TA_OK) return;
  std::cerr << "bc2ta: " << bc2ta_status_name(s) << ": " << bc2ta_last_error() << "\n";
  throw Failure{exit_code_for(s)};
}

struct OwnedString {
  char* p = nullptr;
  ~OwnedString() { bc2ta_string_free(p); }
  std::string str() const { return p ? std::string(p) : std::string(); }
};

struct ProjectDeleter {
  void operator()(bc2ta_project* p) const { bc2ta_project_free(p); }
};
struct SystemDeleter {
  void operator()(bc2ta_system* s) const { bc2ta_system_free(s); }
};
using ProjectPtr = std::unique_ptr<bc2ta_project, ProjectDeleter>;
using SystemPtr = std::unique_ptr<bc2ta_system, SystemDeleter>;

std::vector<const char*> c_strings(const std::vector<std::string>& v) {
  std::vector<const char*> out;
  for (const auto& s : v) out.push_back(s.c_str());
  return out;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) {
    std::cerr << "bc2ta: cannot write " << path << "\n";
    throw Failure{kExitOther};
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "bc2ta: cannot read " << path << "\n";
    throw Failure{kExitParse};
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string sibling_query_path(const std::string& xml_path) {
  const auto dot = xml_path.rfind('.');
  const auto slash = xml_path.find_last_of('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return xml_path + ".q";
  return xml_path.substr(0, dot) + ".q";
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

struct DeriveArgs {
  std::vector<std::string> ir;
  std::vector<std::string> classpath;
  std::string main_class;
  std::string main_method = "main";
  std::string main_descriptor = "([Ljava/lang/String;)V";
  std::vector<std::string> filter;
};

struct AugmentArgs {
  std::string loop_limits;
  int64_t default_loop_limit = 5;
  std::string on_indirect_recursion = "error";
  std::string timing;
  bool group = false;
  std::string report;
};

struct TransformArgs {
  std::vector<std::string> instances;
};

struct EmitArgs {
  int64_t bound_x = 20;
  bool literal_finish_query = false;
  std::vector<std::string> leads_to;
};

void add_derive_flags(CLI::App* app, DeriveArgs& a) {
  app->add_option("--ir", a.ir, "Textual bytecode (.jbct) files");
  app->add_option("--classpath", a.classpath, "Class directories, jars or class files (':'-separated)")
      ->delimiter(':');
  app->add_option("--main", a.main_class, "Main class (internal name)")->required();
  app->add_option("--main-method", a.main_method, "Entry method name");
  app->add_option("--main-descriptor", a.main_descriptor, "Entry method descriptor");
  app->add_option("--filter", a.filter, "Package or class prefixes to keep in the project");
}

void add_augment_flags(CLI::App* app, AugmentArgs& a) {
  app->add_option("--loop-limits", a.loop_limits, "JSON loop-limit file");
  app->add_option("--default-loop-limit", a.default_loop_limit, "Limit for loops without an explicit one")
      ->check(CLI::PositiveNumber);
  app->add_option("--on-indirect-recursion", a.on_indirect_recursion, "error or report")
      ->check(CLI::IsMember({"error", "report"}));
  app->add_option("--timing", a.timing, "JSON timing table");
  app->add_flag("--group", a.group, "Collapse straight-line instruction chains");
  app->add_option("--report", a.report, "Write the recursion report here");
}

void add_transform_flags(CLI::App* app, TransformArgs& a) {
  app->add_option("--instances", a.instances, "Instance count override, Class=N");
}

void add_emit_flags(CLI::App* app, EmitArgs& a) {
  app->add_option("--bound-x", a.bound_x, "Time bound used in the WCET query");
  app->add_flag("--literal-finish-query", a.literal_finish_query,
                "Emit 'A[] controller.finish and globalClock <= x' instead of the implication");
  app->add_option("--leads-to", a.leads_to, "Extra leads-to query passed through to the .q file");
}

ProjectPtr derive(const DeriveArgs& a) {
  std::vector<std::string> roots = a.ir;
  roots.insert(roots.end(), a.classpath.begin(), a.classpath.end());
  if (roots.empty()) {
    std::cerr << "bc2ta: derive needs --ir or --classpath\n";
    throw Failure{kExitUsage};
  }
  const auto r = c_strings(roots);
  const auto f = c_strings(a.filter);
  bc2ta_project* p = nullptr;
  ok(bc2ta_project_derive(r.data(), r.size(), a.main_class.c_str(), a.main_method.c_str(),
                          a.main_descriptor.c_str(), f.data(), f.size(), &p));
  return ProjectPtr(p);
}

ProjectPtr augment(const bc2ta_project* in, const AugmentArgs& a) {
  bc2ta_augment_options opts;
  bc2ta_augment_options_init(&opts);
  opts.loop_limits_path = a.loop_limits.empty() ? nullptr : a.loop_limits.c_str();
  opts.default_loop_limit = a.default_loop_limit;
  opts.on_indirect_recursion = a.on_indirect_recursion == "report" ? BC2TA_RECURSION_REPORT : BC2TA_RECURSION_ERROR;
  opts.timing_path = a.timing.empty() ? nullptr : a.timing.c_str();
  opts.group = a.group ? 1 : 0;
  bc2ta_project* out = nullptr;
  OwnedString report;
  const bc2ta_status s = bc2ta_project_augment(in, &opts, &out, &report.p);
  if (!report.str().empty()) {
    if (!a.report.empty()) {
      write_file(a.report, report.str());
    } else {
      std::cerr << report.str();
    }
  }
  ok(s);
  return ProjectPtr(out);
}

SystemPtr transform(const bc2ta_project* in, const TransformArgs& a) {
  const auto o = c_strings(a.instances);
  bc2ta_system* sys = nullptr;
  ok(bc2ta_transform(in, o.data(), o.size(), &sys));
  return SystemPtr(sys);
}

void emit(bc2ta_system* sys, const EmitArgs& a, const std::string& xml_path) {
  const auto lt = c_strings(a.leads_to);
  bc2ta_query_options q;
  bc2ta_query_options_init(&q);
  q.bound_x = a.bound_x;
  q.literal_finish_query = a.literal_finish_query ? 1 : 0;
  q.leads_to = lt.data();
  q.leads_to_count = lt.size();
  ok(bc2ta_system_set_default_queries(sys, &q));
  OwnedString xml, queries;
  ok(bc2ta_emit_xml(sys, &xml.p));
  ok(bc2ta_emit_queries(sys, &queries.p));
  write_file(xml_path, xml.str());
  write_file(sibling_query_path(xml_path), queries.str());
}

ProjectPtr load_project(const std::string& path) {
  bc2ta_project* p = nullptr;
  ok(bc2ta_project_load(path.c_str(), &p));
  return ProjectPtr(p);
}

SystemPtr load_system(const std::string& path) {
  bc2ta_system* s = nullptr;
  if (ends_with(path, ".xml")) {
    ok(bc2ta_system_load_xml(read_file(path).c_str(), &s));
  } else {
    ok(bc2ta_system_load(path.c_str(), &s));
  }
  return SystemPtr(s);
}

void print_stats(const bc2ta_project* p) {
  OwnedString text;
  ok(bc2ta_project_stats_text(p, &text.p));
  std::cout << text.str();
}

struct CheckArgs {
  std::vector<std::string> queries;
  int64_t bound_x = 20;
  bool wcet_sweep = false;
  int64_t wcet_cap = 100000;
  bool stats = false;
  std::string symmetry = "off";
  std::string trace_file;
  uint64_t state_limit = 0;
};

int run_check(const std::string& input, const CheckArgs& a) {
  SystemPtr sys = load_system(input);
  bc2ta_check_options opts;
  bc2ta_check_options_init(&opts);
  opts.symmetry = a.symmetry == "on" ? 1 : 0;
  opts.state_limit = a.state_limit;

  std::vector<std::string> queries = a.queries;
  if (queries.empty() && !a.wcet_sweep && !a.stats) {
    bc2ta_query_options q;
    bc2ta_query_options_init(&q);
    q.bound_x = a.bound_x;
    ok(bc2ta_system_set_default_queries(sys.get(), &q));
    size_t n = 0;
    ok(bc2ta_system_query_count(sys.get(), &n));
    for (size_t i = 0; i < n; ++i) {
      OwnedString t;
      ok(bc2ta_system_query_text(sys.get(), i, &t.p));
      queries.push_back(t.str());
    }
  }

  int code = kExitOk;
  std::string traces;
  for (const auto& q : queries) {
    bc2ta_verdict v{};
    ok(bc2ta_check(sys.get(), q.c_str(), &opts, &v));
    OwnedString trace{v.trace};
    std::cout << q << ": " << (v.satisfied ? "satisfied" : "NOT satisfied") << " (" << v.states_explored
              << " states)\n";
    if (!v.satisfied) code = kExitQueryFailed;
    if (trace.p != nullptr && !v.satisfied) {
      const std::string block = "# " + q + "\n" + trace.str();
      if (a.trace_file.empty()) {
        std::cout << block;
      } else {
        traces += block;
      }
    }
  }
  if (!a.trace_file.empty() && !traces.empty()) write_file(a.trace_file, traces);

  if (a.wcet_sweep) {
    int64_t w = 0;
    ok(bc2ta_min_wcet_bound(sys.get(), a.wcet_cap, &opts, &w));
    std::cout << "min_wcet_bound: " << w << "\n";
  }
  if (a.stats) {
    bc2ta_space_stats s{};
    ok(bc2ta_explore(sys.get(), opts.symmetry, 0, a.state_limit, &s));
    std::cout << "states: " << s.states << "\ntransitions: " << s.transitions << "\ndelay points: "
              << s.delay_states << "\nmax frontier: " << s.max_frontier
              << "\nsymmetry reduced: " << (s.symmetry_reduced ? "yes" : "no") << "\n";
  }
  return code;
}

int run(int argc, char** argv) {
  CLI::App app{"bc2ta: derive UPPAAL timed-automata models from Java bytecode"};
  app.set_version_flag("--version", std::string(bc2ta_version()));
  app.set_config("--config", "bc2ta.toml", "TOML file mirroring the command-line flags");
  app.require_subcommand(0, 1);

  // Single-shot pipeline.
  bool all = false;
  DeriveArgs all_derive;
  AugmentArgs all_augment;
  TransformArgs all_transform;
  EmitArgs all_emit;
  std::string all_out;
  app.add_flag("--all", all, "Run derive, augment, transform and emit in one go");
  app.add_option("--ir", all_derive.ir, "Textual bytecode (.jbct) files");
  app.add_option("--classpath", all_derive.classpath, "Class directories, jars or class files")->delimiter(':');
  app.add_option("--main", all_derive.main_class, "Main class (internal name)");
  app.add_option("--main-method", all_derive.main_method, "Entry method name");
  app.add_option("--main-descriptor", all_derive.main_descriptor, "Entry method descriptor");
  app.add_option("--filter", all_derive.filter, "Package or class prefixes to keep");
  add_augment_flags(&app, all_augment);
  add_transform_flags(&app, all_transform);
  add_emit_flags(&app, all_emit);
  app.add_option("--out", all_out, "UPPAAL model path (.xml); the .q file is written next to it");

  DeriveArgs derive_args;
  std::string derive_out;
  auto* derive_cmd = app.add_subcommand("derive", "Build the control-flow model from bytecode");
  add_derive_flags(derive_cmd, derive_args);
  derive_cmd->add_option("--out", derive_out, "Model file (.jbcmm.json)")->required();

  AugmentArgs augment_args;
  std::string augment_in, augment_out;
  auto* augment_cmd = app.add_subcommand("augment", "Loop limits, recursion handling, timing, grouping");
  augment_cmd->add_option("model", augment_in, "Input model")->required();
  add_augment_flags(augment_cmd, augment_args);
  augment_cmd->add_option("--out", augment_out, "Enriched model file")->required();

  TransformArgs transform_args;
  std::string transform_in, transform_out;
  auto* transform_cmd = app.add_subcommand("transform", "Translate an enriched model to timed automata");
  transform_cmd->add_option("model", transform_in, "Enriched model")->required();
  add_transform_flags(transform_cmd, transform_args);
  transform_cmd->add_option("--out", transform_out, "System file (.tasys.json)")->required();

  EmitArgs emit_args;
  std::string emit_in, emit_out;
  auto* emit_cmd = app.add_subcommand("emit", "Write UPPAAL XML and query files");
  emit_cmd->add_option("system", emit_in, "System file")->required();
  add_emit_flags(emit_cmd, emit_args);
  emit_cmd->add_option("--out", emit_out, "UPPAAL model path (.xml)")->required();

  CheckArgs check_args;
  std::string check_in;
  auto* check_cmd = app.add_subcommand("check", "Verify queries with the built-in discrete-time checker");
  check_cmd->add_option("system", check_in, "System file (.tasys.json or .xml)")->required();
  check_cmd->add_option("--query", check_args.queries, "Query to check (repeatable)");
  check_cmd->add_option("--bound-x", check_args.bound_x, "Bound for the default WCET query");
  check_cmd->add_flag("--wcet-sweep", check_args.wcet_sweep, "Print the least bound that holds");
  check_cmd->add_option("--wcet-cap", check_args.wcet_cap, "Largest bound the sweep considers");
  check_cmd->add_flag("--stats", check_args.stats, "Print state-space statistics");
  check_cmd->add_option("--symmetry", check_args.symmetry, "on or off")->check(CLI::IsMember({"on", "off"}));
  check_cmd->add_option("--trace-file", check_args.trace_file, "Write counterexample traces here");
  check_cmd->add_option("--state-limit", check_args.state_limit, "Stored-state ceiling");

  std::string stats_in;
  auto* stats_cmd = app.add_subcommand("stats", "Print element counts of a model");
  stats_cmd->add_option("model", stats_in, "Model file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "bc2ta: " << e.what() << "\n\n";
    const CLI::App* failed = &app;
    for (auto* sub : app.get_subcommands()) failed = sub;
    std::cerr << failed->help();
    return kExitUsage;
  }

  if (*derive_cmd) {
    ProjectPtr p = derive(derive_args);
    ok(bc2ta_project_save(p.get(), derive_out.c_str()));
    print_stats(p.get());
    return kExitOk;
  }
  if (*augment_cmd) {
    ProjectPtr in = load_project(augment_in);
    ProjectPtr out = augment(in.get(), augment_args);
    ok(bc2ta_project_save(out.get(), augment_out.c_str()));
    return kExitOk;
  }
  if (*transform_cmd) {
    ProjectPtr in = load_project(transform_in);
    SystemPtr sys = transform(in.get(), transform_args);
    ok(bc2ta_system_save(sys.get(), transform_out.c_str()));
    return kExitOk;
  }
  if (*emit_cmd) {
    SystemPtr sys = load_system(emit_in);
    emit(sys.get(), emit_args, emit_out);
    return kExitOk;
  }
  if (*check_cmd) return run_check(check_in, check_args);
  if (*stats_cmd) {
    ProjectPtr p = load_project(stats_in);
    print_stats(p.get());
    return kExitOk;
  }
  if (all) {
    if (all_derive.main_class.empty() || all_out.empty()) {
      std::cerr << "bc2ta: --all needs --main and --out\n\n" << app.help();
      return kExitUsage;
    }
    ProjectPtr p = derive(all_derive);
    print_stats(p.get());
    ProjectPtr enriched = augment(p.get(), all_augment);
    SystemPtr sys = transform(enriched.get(), all_transform);
    emit(sys.get(), all_emit, all_out);
    return kExitOk;
  }
  std::cerr << app.help();
  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const Failure& f) {
    return f.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "bc2ta: " << e.what() << "\n";
    return kExitOther;
  }
}
