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
// dominators.cpp -- iterative dominators, natural loops and irreducible
// regions on plain digraphs, plus their bytecode-method wrappers.

#include <algorithm>
#include <deque>
#include <fstream>

#include "bc2ta/analyses.hpp"
#include "bc2ta/error.hpp"

namespace bc2ta::analysis {
namespace {

// Reverse post-order of the nodes reachable from the root.
std::vector<size_t> reverse_post_order(const Digraph& g) {
  std::vector<size_t> order;
  std::vector<char> seen(g.size(), 0);
  std::vector<std::pair<size_t, size_t>> stack{{g.root, 0}};
  seen[g.root] = 1;
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < g.succ[node].size()) {
      size_t s = g.succ[node][next++];
      if (!seen[s]) {
        seen[s] = 1;
        stack.emplace_back(s, 0);
      }
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }
  std::reverse(order.begin(), order.end());
  return order;
}

std::vector<std::vector<size_t>> predecessors(const Digraph& g) {
  std::vector<std::vector<size_t>> pred(g.size());
  for (size_t u = 0; u < g.size(); ++u) {
    for (size_t v : g.succ[u]) pred[v].push_back(u);
  }
  return pred;
}

// Tarjan's algorithm, iterative; components come out in reverse topological order.
std::vector<std::vector<size_t>> strongly_connected(const std::vector<std::vector<size_t>>& succ,
                                                    const std::vector<char>& active) {
  const size_t n = succ.size();
  constexpr size_t kUnset = static_cast<size_t>(-1);
  std::vector<size_t> index(n, kUnset), low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<size_t> stack;
  std::vector<std::vector<size_t>> out;
  size_t counter = 0;
  for (size_t start = 0; start < n; ++start) {
    if (!active[start] || index[start] != kUnset) continue;
    std::vector<std::pair<size_t, size_t>> work{{start, 0}};
    index[start] = low[start] = counter++;
    stack.push_back(start);
    on_stack[start] = 1;
    while (!work.empty()) {
      auto& [v, next] = work.back();
      if (next < succ[v].size()) {
        size_t w = succ[v][next++];
        if (!active[w]) continue;
        if (index[w] == kUnset) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          work.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        std::vector<size_t> comp;
        size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp.push_back(w);
        } while (w != v);
        std::sort(comp.begin(), comp.end());
        out.push_back(std::move(comp));
      }
      size_t done = v;
      work.pop_back();
      if (!work.empty()) low[work.back().first] = std::min(low[work.back().first], low[done]);
    }
  }
  return out;
}

struct IndexedMethod {
  std::vector<uint32_t> offsets;
  std::map<uint32_t, size_t> index;
  Digraph graph;
};

IndexedMethod index_method(const cfg::MethodModel& m) {
  IndexedMethod im;
  for (const auto& [off, ins] : m.instructions) {
    im.index[off] = im.offsets.size();
    im.offsets.push_back(off);
  }
  im.graph.succ.resize(im.offsets.size());
  for (const auto& e : m.edges) im.graph.succ[im.index.at(e.source)].push_back(im.index.at(e.target));
  im.graph.root = im.index.at(m.entry);
  return im;
}

}  // namespace

std::vector<std::optional<size_t>> immediate_dominators(const Digraph& g) {
  std::vector<std::optional<size_t>> idom(g.size());
  if (g.size() == 0) return idom;
  const std::vector<size_t> rpo = reverse_post_order(g);
  std::vector<size_t> rank(g.size(), 0);
  for (size_t i = 0; i < rpo.size(); ++i) rank[rpo[i]] = i;
  const auto pred = predecessors(g);

  auto intersect = [&](size_t a, size_t b) {
    while (a != b) {
      while (rank[a] > rank[b]) a = *idom[a];
      while (rank[b] > rank[a]) b = *idom[b];
    }
    return a;
  };

  idom[g.root] = g.root;
  for (bool changed = true; changed;) {
    changed = false;
    for (size_t i = 1; i < rpo.size(); ++i) {
      size_t b = rpo[i];
      std::optional<size_t> next;
      for (size_t p : pred[b]) {
        if (!idom[p]) continue;
        next = next ? intersect(p, *next) : p;
      }
      if (next && idom[b] != next) {
        idom[b] = next;
        changed = true;
      }
    }
  }
  return idom;
}

bool dominates(const std::vector<std::optional<size_t>>& idom, size_t a, size_t b) {
  if (!idom[b] || !idom[a]) return false;
  for (size_t at = b;; at = *idom[at]) {
    if (at == a) return true;
    if (*idom[at] == at) return false;
  }
}

std::vector<NaturalLoop> natural_loops(const Digraph& g,
                                       const std::vector<std::optional<size_t>>& idom) {
  std::map<size_t, NaturalLoop> by_head;
  const auto pred = predecessors(g);
  for (size_t u = 0; u < g.size(); ++u) {
    if (!idom[u]) continue;
    for (size_t h : g.succ[u]) {
      if (!dominates(idom, h, u)) continue;
      NaturalLoop& loop = by_head[h];
      loop.head = h;
      loop.back_edges.emplace(u, h);
      loop.members.insert(h);
      std::deque<size_t> work;
      if (loop.members.insert(u).second) work.push_back(u);
      while (!work.empty()) {
        size_t v = work.front();
        work.pop_front();
        for (size_t p : pred[v]) {
          if (idom[p] && loop.members.insert(p).second) work.push_back(p);
        }
      }
    }
  }
  std::vector<NaturalLoop> out;
  for (auto& [h, loop] : by_head) out.push_back(std::move(loop));
  return out;
}

std::vector<std::vector<size_t>> irreducible_regions(
    const Digraph& g, const std::vector<std::optional<size_t>>& idom) {
  std::vector<std::vector<size_t>> forward(g.size());
  std::vector<char> active(g.size(), 0);
  for (size_t u = 0; u < g.size(); ++u) {
    if (!idom[u]) continue;
    active[u] = 1;
    for (size_t v : g.succ[u]) {
      if (!dominates(idom, v, u)) forward[u].push_back(v);
    }
  }
  std::vector<std::vector<size_t>> out;
  for (auto& comp : strongly_connected(forward, active)) {
    if (comp.size() >= 2) out.push_back(std::move(comp));
  }
  std::sort(out.begin(), out.end());
  return out;
}

DominatorMap compute_dominators(const cfg::MethodModel& method) {
  DominatorMap out;
  if (!method.has_body()) return out;
  const IndexedMethod im = index_method(method);
  const auto idom = immediate_dominators(im.graph);
  for (size_t i = 0; i < idom.size(); ++i) {
    if (idom[i]) out[im.offsets[i]] = im.offsets[*idom[i]];
  }
  return out;
}

LoopDetection detect_loops(const cfg::MethodModel& method, const DominatorMap& dominators) {
  LoopDetection out;
  if (!method.has_body()) return out;
  const IndexedMethod im = index_method(method);
  std::vector<std::optional<size_t>> idom(im.offsets.size());
  for (const auto& [off, dom] : dominators) idom[im.index.at(off)] = im.index.at(dom);

  for (const auto& nl : natural_loops(im.graph, idom)) {
    cfg::LoopInfo loop;
    loop.head = im.offsets[nl.head];
    for (size_t m : nl.members) loop.members.insert(im.offsets[m]);
    for (const auto& [u, v] : nl.back_edges) loop.back_edges.emplace(im.offsets[u], im.offsets[v]);
    std::set<uint32_t> leaving;
    for (const auto& e : method.edges) {
      if (loop.members.contains(e.source) && !loop.members.contains(e.target)) {
        loop.exit_edges.emplace(e.source, e.target);
        leaving.insert(e.source);
      }
    }
    for (const auto& e : method.edges) {
      if (leaving.contains(e.source) && loop.members.contains(e.target)) {
        loop.continue_edges.emplace(e.source, e.target);
      }
    }
    out.loops.push_back(std::move(loop));
  }
  for (const auto& region : irreducible_regions(im.graph, idom)) {
    std::vector<uint32_t> cycle;
    for (size_t n : region) cycle.push_back(im.offsets[n]);
    out.irreducible_cycles.push_back(std::move(cycle));
  }
  return out;
}

cfg::Project detect_all_loops(cfg::Project project) {
  for (cfg::MethodModel* m : project.all_methods()) {
    LoopDetection found = detect_loops(*m, compute_dominators(*m));
    // Keep limits already attached to surviving heads.
    for (auto& loop : found.loops) {
      if (const cfg::LoopInfo* old = m->loop_with_head(loop.head)) loop.limit = old->limit;
    }
    m->loops = std::move(found.loops);
    m->irreducible_cycles = std::move(found.irreducible_cycles);
    for (auto& e : m->edges) {
      const cfg::EdgeKey key{e.source, e.target};
      bool back = false, exit = false, cont = false;
      for (const auto& loop : m->loops) {
        back |= loop.back_edges.contains(key);
        exit |= loop.exit_edges.contains(key);
        cont |= loop.continue_edges.contains(key);
      }
      if (back) {
        e.tag = cfg::EdgeTag::kBackEdge;
      } else if (exit) {
        e.tag = cfg::EdgeTag::kLoopExit;
      } else if (cont) {
        e.tag = cfg::EdgeTag::kLoopContinue;
      }
    }
  }
  return project;
}

LoopLimits parse_loop_limits(const nlohmann::json& doc) {
  if (!doc.is_object()) throw Error(ErrorCode::kInvalidArgument, "loop-limit file must be a JSON object");
  LoopLimits out;
  for (const auto& [key, value] : doc.items()) {
    auto id = cfg::InstrId::parse_key(key);
    if (!id) throw Error(ErrorCode::kInvalidArgument, "malformed loop-limit key '" + key + "'");
    if (!value.is_number_integer() || value.get<int64_t>() < 1) {
      throw Error(ErrorCode::kInvalidArgument, "loop limit for '" + key + "' must be a positive integer");
    }
    out[*id] = value.get<int64_t>();
  }
  return out;
}

LoopLimits load_loop_limits(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  try {
    return parse_loop_limits(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, path.string() + ": " + e.what());
  }
}

cfg::Project apply_loop_limits(cfg::Project project, const LoopLimits& limits,
                               int64_t default_limit) {
  if (default_limit < 1) throw Error(ErrorCode::kInvalidArgument, "default loop limit must be positive");
  for (const auto& [site, limit] : limits) {
    const cfg::MethodModel* m = project.find_method(site.method);
    if (m == nullptr || m->loop_with_head(site.offset) == nullptr) {
      throw Error(ErrorCode::kUnknownLoopHead, "no loop head at " + site.key());
    }
    if (limit < 1) throw Error(ErrorCode::kInvalidArgument, "loop limit must be positive at " + site.key());
  }
  for (cfg::MethodModel* m : project.all_methods()) {
    for (auto& loop : m->loops) {
      auto it = limits.find({m->id, loop.head});
      loop.limit = it != limits.end() ? it->second : default_limit;
    }
  }
  return project;
}

}  // namespace bc2ta::analysis
