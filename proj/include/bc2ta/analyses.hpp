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
// analyses.hpp -- model enrichment: dominators and natural loops, loop
// limits, call graph and recursion handling, timing, node grouping and
// template instance counts.

#ifndef BC2TA_ANALYSES_HPP_
#define BC2TA_ANALYSES_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bc2ta/cfgmodel.hpp"
#include "json.hpp"

namespace bc2ta::analysis {

// Plain digraph over node indices [0, succ.size()), used by the dominator
// and loop algorithms so they can be tested apart from the bytecode model.
struct Digraph {
  std::vector<std::vector<size_t>> succ;
  size_t root = 0;

  size_t size() const { return succ.size(); }
};

// idom[root] == root; nodes unreachable from the root have no entry.
std::vector<std::optional<size_t>> immediate_dominators(const Digraph& g);

bool dominates(const std::vector<std::optional<size_t>>& idom, size_t a, size_t b);

struct NaturalLoop {
  size_t head = 0;
  std::set<size_t> members;
  std::set<std::pair<size_t, size_t>> back_edges;

  bool operator==(const NaturalLoop&) const = default;
};

// One loop per head (back edges sharing a head are merged), ordered by head.
std::vector<NaturalLoop> natural_loops(const Digraph& g,
                                       const std::vector<std::optional<size_t>>& idom);

// Strongly connected regions that remain cyclic once back edges are removed;
// each is a sorted node list.
std::vector<std::vector<size_t>> irreducible_regions(
    const Digraph& g, const std::vector<std::optional<size_t>>& idom);

// instruction offset -> immediate-dominator offset; the entry maps to itself.
using DominatorMap = std::map<uint32_t, uint32_t>;

DominatorMap compute_dominators(const cfg::MethodModel& method);

struct LoopDetection {
  std::vector<cfg::LoopInfo> loops;
  std::vector<std::vector<uint32_t>> irreducible_cycles;
};

LoopDetection detect_loops(const cfg::MethodModel& method, const DominatorMap& dominators);

// Runs detection on every method, stores loops and irreducible cycles, and
// retags edges back_edge > loop_exit > loop_continue.
cfg::Project detect_all_loops(cfg::Project project);

using LoopLimits = std::map<cfg::InstrId, int64_t>;

LoopLimits parse_loop_limits(const nlohmann::json& doc);
LoopLimits load_loop_limits(const std::filesystem::path& path);

cfg::Project apply_loop_limits(cfg::Project project, const LoopLimits& limits,
                               int64_t default_limit);

struct CallEdge {
  cfg::MethodId caller;
  uint32_t site = 0;
  cfg::MethodId callee;

  bool operator==(const CallEdge&) const = default;
};

struct CallGraph {
  std::set<cfg::MethodId> nodes;
  std::vector<CallEdge> edges;
  cfg::MethodId entry;

  std::set<cfg::MethodId> reachable() const;
};

CallGraph build_call_graph(const cfg::Project& project);

struct RecursionReport {
  std::vector<cfg::MethodId> direct;
  // Each witness starts and ends with the same method.
  std::vector<std::vector<cfg::MethodId>> indirect;

  bool empty() const { return direct.empty() && indirect.empty(); }
  // One cycle per line.
  std::string to_text() const;
};

RecursionReport detect_recursion(const CallGraph& graph);

cfg::Project remove_direct_recursion(cfg::Project project);

struct TimingTable {
  cfg::TimeBounds default_bounds{1, 1};
  std::map<std::string, cfg::TimeBounds> per_mnemonic;
  std::map<cfg::InstrId, cfg::TimeBounds> per_site;
};

TimingTable parse_timing_table(const nlohmann::json& doc);
TimingTable load_timing_table(const std::filesystem::path& path);

cfg::Project augment_timing(cfg::Project project, const TimingTable& table);

cfg::Project group_nodes(cfg::Project project);

// Class name -> number of template instances needed so that no call ever
// waits for a free instance.
std::map<std::string, int64_t> compute_instance_counts(const CallGraph& graph);

enum class RecursionPolicy { kError, kReport };

struct AugmentOptions {
  LoopLimits loop_limits;
  int64_t default_loop_limit = 5;
  RecursionPolicy on_indirect_recursion = RecursionPolicy::kError;
  TimingTable timing;
  bool group = false;
};

struct AugmentResult {
  cfg::Project project;
  RecursionReport recursion;
};

// Loop detection, limits, recursion handling, timing and optional grouping,
// in that order. Throws kIndirectRecursion under the error policy.
AugmentResult augment(cfg::Project project, const AugmentOptions& options);

}  // namespace bc2ta::analysis

#endif  // BC2TA_ANALYSES_HPP_
