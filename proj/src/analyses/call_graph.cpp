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
// call_graph.cpp -- call graph, recursion detection and removal, template
// instance counting and the augment pipeline.

#include <algorithm>
#include <deque>

#include "bc2ta/analyses.hpp"
#include "bc2ta/error.hpp"

namespace bc2ta::analysis {
namespace {

using cfg::MethodId;

std::map<MethodId, std::vector<MethodId>> adjacency(const CallGraph& g) {
  std::map<MethodId, std::vector<MethodId>> adj;
  for (const auto& n : g.nodes) adj[n];
  for (const auto& e : g.edges) {
    auto& out = adj[e.caller];
    if (std::find(out.begin(), out.end(), e.callee) == out.end()) out.push_back(e.callee);
  }
  return adj;
}

std::string join_cycle(const std::vector<MethodId>& cycle) {
  std::string out;
  for (const auto& m : cycle) {
    if (!out.empty()) out += " -> ";
    out += m.key();
  }
  return out;
}

// Shortest cycle through `start` using only nodes of `within`.
std::vector<MethodId> witness_cycle(const std::map<MethodId, std::vector<MethodId>>& adj,
                                    const MethodId& start, const std::set<MethodId>& within) {
  std::map<MethodId, MethodId> parent;
  std::deque<MethodId> queue{start};
  std::set<MethodId> seen{start};
  while (!queue.empty()) {
    MethodId at = queue.front();
    queue.pop_front();
    for (const auto& next : adj.at(at)) {
      if (!within.contains(next)) continue;
      if (next == start) {
        std::vector<MethodId> path{start};
        for (MethodId back = at; back != start; back = parent.at(back)) path.push_back(back);
        path.push_back(start);
        std::reverse(path.begin() + 1, path.end() - 1);
        return path;
      }
      if (seen.insert(next).second) {
        parent[next] = at;
        queue.push_back(next);
      }
    }
  }
  return {};
}

}  // namespace

std::set<MethodId> CallGraph::reachable() const {
  std::map<MethodId, std::vector<MethodId>> adj;
  for (const auto& e : edges) adj[e.caller].push_back(e.callee);
  std::set<MethodId> seen;
  if (!nodes.contains(entry)) return seen;
  seen.insert(entry);
  std::deque<MethodId> queue{entry};
  while (!queue.empty()) {
    MethodId at = queue.front();
    queue.pop_front();
    for (const auto& next : adj[at]) {
      if (seen.insert(next).second) queue.push_back(next);
    }
  }
  return seen;
}

CallGraph build_call_graph(const cfg::Project& project) {
  CallGraph g;
  g.entry = project.main_method();
  for (const cfg::MethodModel* m : project.all_methods()) {
    if (!m->has_body()) continue;
    g.nodes.insert(m->id);
    for (const auto& [off, ins] : m->instructions) {
      if (ins.kind != InstrKind::kInvoke) continue;
      for (const auto& target : ins.resolved_targets) g.edges.push_back({m->id, off, target});
    }
  }
  return g;
}

std::string RecursionReport::to_text() const {
  std::string out;
  for (const auto& m : direct) out += "direct recursion: " + m.key() + " -> " + m.key() + "\n";
  for (const auto& cycle : indirect) out += "indirect recursion: " + join_cycle(cycle) + "\n";
  return out;
}

RecursionReport detect_recursion(const CallGraph& graph) {
  RecursionReport report;
  const auto adj = adjacency(graph);
  for (const auto& [from, outs] : adj) {
    if (std::find(outs.begin(), outs.end(), from) != outs.end()) report.direct.push_back(from);
  }

  // Tarjan over the method graph.
  std::map<MethodId, size_t> index, low;
  std::set<MethodId> on_stack;
  std::vector<MethodId> stack;
  size_t counter = 0;
  for (const auto& [start, unused] : adj) {
    if (index.contains(start)) continue;
    std::vector<std::pair<MethodId, size_t>> work{{start, 0}};
    index[start] = low[start] = counter++;
    stack.push_back(start);
    on_stack.insert(start);
    while (!work.empty()) {
      MethodId v = work.back().first;
      size_t& next = work.back().second;
      const auto& outs = adj.at(v);
      if (next < outs.size()) {
        const MethodId w = outs[next++];
        if (!index.contains(w)) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack.insert(w);
          work.emplace_back(w, 0);
        } else if (on_stack.contains(w)) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        std::set<MethodId> comp;
        MethodId w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack.erase(w);
          comp.insert(w);
        } while (w != v);
        if (comp.size() >= 2) report.indirect.push_back(witness_cycle(adj, *comp.begin(), comp));
      }
      work.pop_back();
      if (!work.empty()) low[work.back().first] = std::min(low[work.back().first], low[v]);
    }
  }
  std::sort(report.indirect.begin(), report.indirect.end());
  return report;
}

cfg::Project remove_direct_recursion(cfg::Project project) {
  for (cfg::MethodModel* m : project.all_methods()) {
    for (auto& [off, ins] : m->instructions) {
      if (ins.kind != InstrKind::kInvoke) continue;
      auto self = std::find(ins.resolved_targets.begin(), ins.resolved_targets.end(), m->id);
      if (self == ins.resolved_targets.end()) continue;
      ins.resolved_targets.erase(self);
      if (ins.resolved_targets.empty()) {
        ins.kind = InstrKind::kDummy;
        ins.mnemonic = "dummy_" + ins.mnemonic;
        ins.external_call = false;
      }
    }
  }
  return project;
}

std::map<std::string, int64_t> compute_instance_counts(const CallGraph& graph) {
  using Counts = std::map<std::string, int64_t>;
  const auto adj = adjacency(graph);
  std::map<MethodId, Counts> memo;
  std::map<MethodId, int> color;  // 1 = on the DFS path, 2 = done
  std::vector<MethodId> path;

  // Iterative post-order DFS so deep call chains cannot overflow the stack.
  std::vector<std::pair<MethodId, size_t>> work;
  if (!adj.contains(graph.entry)) {
    throw Error(ErrorCode::kInconsistentModel, "call graph has no node for " + graph.entry.key());
  }
  work.emplace_back(graph.entry, 0);
  color[graph.entry] = 1;
  path.push_back(graph.entry);
  while (!work.empty()) {
    MethodId v = work.back().first;
    size_t& next = work.back().second;
    const auto& outs = adj.at(v);
    if (next < outs.size()) {
      const MethodId w = outs[next++];
      int c = color[w];
      if (c == 1) {
        std::vector<MethodId> cycle(std::find(path.begin(), path.end(), w), path.end());
        cycle.push_back(w);
        throw Error(ErrorCode::kCyclicCallGraph, "cyclic call graph: " + join_cycle(cycle));
      }
      if (c == 0) {
        color[w] = 1;
        path.push_back(w);
        work.emplace_back(w, 0);
      }
      continue;
    }
    Counts mine;
    for (const auto& w : outs) {
      for (const auto& [cls, n] : memo.at(w)) mine[cls] = std::max(mine[cls], n);
    }
    mine[v.cls] += 1;
    memo[v] = std::move(mine);
    color[v] = 2;
    path.pop_back();
    work.pop_back();
  }
  Counts out = memo.at(graph.entry);
  for (const auto& [m, state] : color) out.try_emplace(m.cls, 1);
  for (auto& [cls, n] : out) n = std::max<int64_t>(n, 1);
  return out;
}

AugmentResult augment(cfg::Project project, const AugmentOptions& options) {
  project = detect_all_loops(std::move(project));
  project = apply_loop_limits(std::move(project), options.loop_limits, options.default_loop_limit);
  RecursionReport report = detect_recursion(build_call_graph(project));
  if (!report.indirect.empty() && options.on_indirect_recursion == RecursionPolicy::kError) {
    std::string text = "indirect recursion: " + join_cycle(report.indirect.front());
    for (size_t i = 1; i < report.indirect.size(); ++i) text += "; " + join_cycle(report.indirect[i]);
    throw Error(ErrorCode::kIndirectRecursion, text);
  }
  project = remove_direct_recursion(std::move(project));
  project = augment_timing(std::move(project), options.timing);
  if (options.group) project = group_nodes(std::move(project));
  return {std::move(project), std::move(report)};
}

}  // namespace bc2ta::analysis
