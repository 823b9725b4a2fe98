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
// grouping.cpp -- collapses straight-line instruction chains into group
// instructions carrying the summed time bounds.

#include <algorithm>

#include "bc2ta/analyses.hpp"
#include "bc2ta/error.hpp"

namespace bc2ta::analysis {
namespace {

bool groupable_kind(InstrKind kind) {
  return kind == InstrKind::kSequential || kind == InstrKind::kGoto ||
         kind == InstrKind::kDummy || kind == InstrKind::kGroup;
}

void group_method(cfg::MethodModel& m) {
  std::map<uint32_t, int> in_degree, out_degree;
  for (const auto& e : m.edges) {
    ++out_degree[e.source];
    ++in_degree[e.target];
  }
  std::set<uint32_t> heads;
  std::set<cfg::EdgeKey> loop_edges;
  std::map<uint32_t, std::set<uint32_t>> enclosing;  // offset -> heads of loops containing it
  for (const auto& loop : m.loops) {
    heads.insert(loop.head);
    for (uint32_t v : loop.members) enclosing[v].insert(loop.head);
    loop_edges.insert(loop.back_edges.begin(), loop.back_edges.end());
    loop_edges.insert(loop.exit_edges.begin(), loop.exit_edges.end());
    loop_edges.insert(loop.continue_edges.begin(), loop.continue_edges.end());
  }
  auto eligible = [&](uint32_t v) {
    return groupable_kind(m.instructions.at(v).kind) && out_degree[v] == 1 && !heads.contains(v);
  };
  // The single out-edge of u, when it may become a chain-internal edge.
  std::map<uint32_t, uint32_t> link;
  std::set<uint32_t> linked_to;
  for (const auto& e : m.edges) {
    const uint32_t u = e.source, v = e.target;
    if (u == v || !eligible(u) || !eligible(v) || v == m.entry || in_degree[v] != 1) continue;
    if (loop_edges.contains({u, v}) || enclosing[u] != enclosing[v]) continue;
    link[u] = v;
    linked_to.insert(v);
  }

  std::vector<std::vector<uint32_t>> chains;
  for (const auto& [u, v] : link) {
    if (linked_to.contains(u)) continue;
    std::vector<uint32_t> chain{u};
    for (auto it = link.find(u); it != link.end(); it = link.find(it->second)) {
      chain.push_back(it->second);
    }
    chains.push_back(std::move(chain));
  }

  for (const auto& chain : chains) {
    const uint32_t first = chain.front(), last = chain.back();
    cfg::Instruction group;
    group.offset = first;
    group.mnemonic = "group";
    group.kind = InstrKind::kGroup;
    group.line = m.instructions.at(first).line;
    group.time = cfg::TimeBounds{0, 0};
    for (uint32_t v : chain) {
      const cfg::Instruction& ins = m.instructions.at(v);
      if (!ins.time) {
        throw Error(ErrorCode::kUntimedInstruction,
                    "cannot group untimed instruction " + cfg::InstrId{m.id, v}.key());
      }
      group.time->lb += ins.time->lb;
      group.time->ub += ins.time->ub;
      if (ins.kind == InstrKind::kGroup) {
        group.group_members.insert(group.group_members.end(), ins.group_members.begin(),
                                   ins.group_members.end());
      } else {
        group.group_members.push_back(v);
      }
    }
    const std::set<uint32_t> absorbed(chain.begin() + 1, chain.end());
    const std::set<uint32_t> inside(chain.begin(), chain.end());

    std::vector<cfg::ControlFlowEdge> edges;
    for (auto e : m.edges) {
      if (inside.contains(e.source) && inside.contains(e.target) && e.source != last) continue;
      if (e.source == last) e.source = first;
      edges.push_back(e);
    }
    m.edges = std::move(edges);
    for (uint32_t v : absorbed) m.instructions.erase(v);
    m.instructions[first] = std::move(group);

    auto remap = [&](std::set<cfg::EdgeKey>& keys) {
      std::set<cfg::EdgeKey> out;
      for (auto [s, t] : keys) out.emplace(s == last ? first : s, t);
      keys = std::move(out);
    };
    for (auto& loop : m.loops) {
      for (uint32_t v : absorbed) loop.members.erase(v);
      remap(loop.back_edges);
      remap(loop.exit_edges);
      remap(loop.continue_edges);
    }
    for (auto& cycle : m.irreducible_cycles) {
      std::erase_if(cycle, [&](uint32_t v) { return absorbed.contains(v); });
    }
  }
}

}  // namespace

cfg::Project group_nodes(cfg::Project project) {
  for (cfg::MethodModel* m : project.all_methods()) {
    if (m->has_body()) group_method(*m);
  }
  return project;
}

}  // namespace bc2ta::analysis
