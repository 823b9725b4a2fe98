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
// cfgmodel.hpp -- the bytecode control-flow model: Project, classes,
// methods, instructions and control-flow edges.

#ifndef BC2TA_CFGMODEL_HPP_
#define BC2TA_CFGMODEL_HPP_

#include <compare>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bc2ta/frontend.hpp"
#include "json.hpp"

namespace bc2ta::cfg {

struct MethodId {
  std::string cls;
  std::string name;
  std::string descriptor;

  auto operator<=>(const MethodId&) const = default;
  bool operator==(const MethodId&) const = default;

  // "<class>#<name><descriptor>", the form used in timing and loop-limit files.
  std::string key() const { return cls + "#" + name + descriptor; }
  std::string signature() const { return name + descriptor; }
};

struct InstrId {
  MethodId method;
  uint32_t offset = 0;

  auto operator<=>(const InstrId&) const = default;
  bool operator==(const InstrId&) const = default;

  // "<class>#<name><descriptor>#<offset>".
  std::string key() const { return method.key() + "#" + std::to_string(offset); }
  static std::optional<InstrId> parse_key(const std::string& key);
};

struct TimeBounds {
  int64_t lb = 0;
  int64_t ub = 0;

  bool operator==(const TimeBounds&) const = default;
};

enum class EdgeTag {
  kFallthrough,
  kBranchTaken,
  kSwitchCase,
  kBackEdge,
  kLoopExit,
  kLoopContinue,
};

std::string_view to_string(EdgeTag tag);
std::optional<EdgeTag> edge_tag_from_string(std::string_view text);

struct ControlFlowEdge {
  uint32_t source = 0;
  uint32_t target = 0;
  EdgeTag tag = EdgeTag::kFallthrough;

  bool operator==(const ControlFlowEdge&) const = default;
};

using EdgeKey = std::pair<uint32_t, uint32_t>;  // (source, target) offsets

struct Instruction {
  uint32_t offset = 0;
  std::string mnemonic;
  InstrKind kind = InstrKind::kSequential;
  uint32_t line = 0;
  std::optional<TimeBounds> time;
  std::optional<InvokeRef> invoke;  // kept on dummies for provenance
  std::vector<MethodId> resolved_targets;
  bool external_call = false;  // invoke whose callees are all outside the project
  std::vector<uint32_t> group_members;

  bool operator==(const Instruction&) const = default;
};

struct LoopInfo {
  uint32_t head = 0;
  std::set<uint32_t> members;
  std::set<EdgeKey> back_edges;
  std::set<EdgeKey> exit_edges;
  std::set<EdgeKey> continue_edges;
  std::optional<int64_t> limit;

  bool operator==(const LoopInfo&) const = default;
};

struct MethodModel {
  MethodId id;
  bool is_static = false;
  bool is_abstract = false;
  std::map<uint32_t, Instruction> instructions;
  std::vector<ControlFlowEdge> edges;
  uint32_t entry = 0;
  std::set<uint32_t> exits;
  std::vector<LoopInfo> loops;
  std::vector<std::vector<uint32_t>> irreducible_cycles;

  bool operator==(const MethodModel&) const = default;

  bool has_body() const { return !instructions.empty(); }
  std::vector<const ControlFlowEdge*> out_edges(uint32_t offset) const;
  std::vector<const ControlFlowEdge*> in_edges(uint32_t offset) const;
  const LoopInfo* loop_with_head(uint32_t offset) const;
};

struct ClassModel {
  std::string name;
  std::optional<std::string> super_name;
  std::vector<std::string> interfaces;
  bool is_interface = false;
  std::map<std::string, MethodModel> methods;  // keyed by name + descriptor

  bool operator==(const ClassModel&) const = default;
};

struct Project {
  std::map<std::string, ClassModel> classes;
  std::string main_class;
  std::string main_method_name = "main";
  std::string main_method_descriptor = "([Ljava/lang/String;)V";
  std::set<std::string> external_stubs;
  // Open store for analysis results and pipeline provenance.
  nlohmann::json annotations = nlohmann::json::object();

  bool operator==(const Project&) const = default;

  MethodId main_method() const {
    return {main_class, main_method_name, main_method_descriptor};
  }
  const MethodModel* find_method(const MethodId& id) const;
  MethodModel* find_method(const MethodId& id);
  std::vector<const MethodModel*> all_methods() const;
  std::vector<MethodModel*> all_methods();
};

// Table-1 style element counts.
struct StatsReport {
  uint64_t class_count = 0;                     // A
  uint64_t method_count = 0;                    // B
  uint64_t loop_count = 0;                      // C
  uint64_t instruction_count = 0;               // D
  uint64_t edge_count = 0;                      // E
  uint64_t resolvable_call_count = 0;           // F
  uint64_t invocable_implementation_count = 0;  // G
  uint64_t return_instruction_count = 0;        // H
  uint64_t total = 0;                           // A+B+C+D+E

  bool operator==(const StatsReport&) const = default;
};

Project build_project(const std::vector<frontend::RawClass>& raw,
                      const std::set<std::string>& external_stubs,
                      const std::string& main_class,
                      const std::string& main_method_name = "main",
                      const std::string& main_method_descriptor = "([Ljava/lang/String;)V");

// Class-hierarchy analysis of one call site. Returns in-project targets
// ordered by class name; an empty result means the call leaves the project.
std::vector<MethodId> resolve_invocation_targets(const Project& project, const InstrId& call_site);

// Throws kInconsistentModel on the first violated model invariant.
void check_model(const Project& project);

StatsReport compute_stats(const Project& project);
std::string format_stats(const StatsReport& stats);

inline constexpr const char* kModelFormatVersion = "1.0";

nlohmann::json to_json(const Project& project);
Project project_from_json(const nlohmann::json& doc);
void save_model(const Project& project, const std::filesystem::path& path);
Project load_model(const std::filesystem::path& path);

}  // namespace bc2ta::cfg

#endif  // BC2TA_CFGMODEL_HPP_
