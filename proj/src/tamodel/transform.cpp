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
// transform.cpp -- translation of the enriched control-flow model into a
// network of timed automata: one controller, one template per class.

#include <algorithm>
#include <cstdio>

#include "bc2ta/analyses.hpp"
#include "bc2ta/error.hpp"
#include "bc2ta/expr.hpp"
#include "bc2ta/tamodel.hpp"

namespace bc2ta::ta {
namespace {

uint32_t fnv1a(const std::string& text) {
  uint32_t h = 2166136261u;
  for (unsigned char c : text) {
    h ^= c;
    h *= 16777619u;
  }
  return h;
}

std::string hash_suffix(const std::string& key) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "%04x", fnv1a(key) & 0xffffu);
  return std::string("_x") + buf;
}

// Builds one class template. Locations and edges are appended in a fixed
// order so output is deterministic.
class TemplateBuilder {
 public:
  TemplateBuilder(Template& out, int& next_id) : out_(out), next_id_(next_id) {}

  std::string add_location(const std::string& name, std::optional<std::string> invariant = {},
                           bool committed = false, bool urgent = false) {
    Location loc;
    loc.id = "id" + std::to_string(next_id_++);
    loc.name = name;
    loc.invariant = std::move(invariant);
    loc.committed = committed;
    loc.urgent = urgent;
    out_.locations.push_back(loc);
    return loc.id;
  }

  void add_edge(const std::string& source, const std::string& target, std::vector<std::string> guards,
                std::optional<std::string> sync, std::vector<std::string> assignments) {
    TaEdge e;
    e.source = source;
    e.target = target;
    if (!guards.empty()) {
      std::string g = guards.front();
      for (size_t i = 1; i < guards.size(); ++i) g += " && " + guards[i];
      e.guard = std::move(g);
    }
    e.sync = std::move(sync);
    e.assignments = std::move(assignments);
    out_.edges.push_back(std::move(e));
  }

  void declare(const std::string& line) { out_.local_declarations += line + "\n"; }

 private:
  Template& out_;
  int& next_id_;
};

struct Channels {
  std::map<cfg::MethodId, std::string> call;
  std::map<cfg::MethodId, std::string> ret;
};

// Where control enters and leaves an instruction's locations.
struct InstructionLocations {
  std::string in;
  std::string out;
  std::string timed_name;  // empty when `out` carries no clock guard
};

void check_ready(const cfg::Project& project, const std::set<cfg::MethodId>& reachable) {
  for (const auto& id : reachable) {
    const cfg::MethodModel* m = project.find_method(id);
    for (const auto& [off, ins] : m->instructions) {
      if (!ins.time) {
        throw Error(ErrorCode::kUntimedInstruction,
                    "instruction " + cfg::InstrId{id, off}.key() + " has no time bounds");
      }
    }
    for (const auto& loop : m->loops) {
      if (!loop.limit) {
        throw Error(ErrorCode::kUnlimitedLoop,
                    "loop at " + cfg::InstrId{id, loop.head}.key() + " has no limit");
      }
    }
  }
}

void build_method(TemplateBuilder& b, IdentifierScope& stems, const cfg::MethodModel& m,
                  const Channels& channels, const std::string& idle) {
  std::map<uint32_t, InstructionLocations> locs;
  std::map<uint32_t, std::string> stem_of;
  for (const auto& [off, ins] : m.instructions) {
    stem_of[off] = stems.claim("l_" + std::to_string(ins.line) + "_" + std::to_string(off),
                               cfg::InstrId{m.id, off}.key());
  }
  auto timed = [&](const std::string& name, const cfg::TimeBounds& t) {
    b.declare("const int tlb_" + name + " = " + std::to_string(t.lb) + ";");
    b.declare("const int tub_" + name + " = " + std::to_string(t.ub) + ";");
    return b.add_location(name, "lc <= tub_" + name);
  };
  for (const auto& loop : m.loops) {
    const std::string& s = stem_of.at(loop.head);
    b.declare("const int ll_" + s + " = " + std::to_string(*loop.limit) + ";");
    b.declare("int[0,ll_" + s + "] lc_" + s + " = 0;");
  }

  for (const auto& [off, ins] : m.instructions) {
    const std::string& stem = stem_of.at(off);
    if (ins.kind == InstrKind::kInvoke && !ins.resolved_targets.empty()) {
      const std::string calling_name = stem + "_calling";
      std::string calling = timed(calling_name, *ins.time);
      const size_t k = ins.resolved_targets.size();
      std::vector<std::string> waiting;
      for (size_t i = 0; i < k; ++i) {
        waiting.push_back(b.add_location(k == 1 ? stem + "_waiting" : stem + "_waiting_" + std::to_string(i + 1)));
      }
      std::string returning = b.add_location(stem + "_returning", std::nullopt, true);
      for (size_t i = 0; i < k; ++i) {
        const auto& target = ins.resolved_targets[i];
        b.add_edge(calling, waiting[i], {"lc >= tlb_" + calling_name}, channels.call.at(target) + "!", {"lc = 0"});
        b.add_edge(waiting[i], returning, {}, channels.ret.at(target) + "?", {"lc = 0"});
      }
      locs[off] = {calling, returning, ""};
    } else {
      std::string id = timed(stem, *ins.time);
      locs[off] = {id, id, stem};
    }
  }

  b.add_edge(idle, locs.at(m.entry).in, {}, channels.call.at(m.id) + "?", {"lc = 0"});

  // Loops ordered by head; the innermost loop a source leaves decides the
  // exit/continue guards on all of that source's edges.
  std::map<uint32_t, const cfg::LoopInfo*> innermost_exit;
  for (const auto& loop : m.loops) {
    for (const auto& [s, t] : loop.exit_edges) {
      auto& cur = innermost_exit[s];
      if (cur == nullptr || loop.members.size() < cur->members.size()) cur = &loop;
    }
  }
  auto counter = [&](const cfg::LoopInfo& loop) { return "lc_" + stem_of.at(loop.head); };
  auto limit = [&](const cfg::LoopInfo& loop) { return "ll_" + stem_of.at(loop.head); };

  for (const auto& [off, ins] : m.instructions) {
    const InstructionLocations& from = locs.at(off);
    std::vector<std::string> clock_guard;
    if (!from.timed_name.empty()) clock_guard.push_back("lc >= tlb_" + from.timed_name);

    for (const auto& e : m.edges) {
      if (e.source != off) continue;
      const cfg::EdgeKey key{e.source, e.target};
      std::vector<std::string> guards = clock_guard;
      std::vector<std::string> assigns{"lc = 0"};
      const cfg::LoopInfo* decider = nullptr;
      if (auto it = innermost_exit.find(off); it != innermost_exit.end()) decider = it->second;
      for (const auto& loop : m.loops) {
        const bool back = loop.back_edges.contains(key);
        if (&loop == decider) {
          if (loop.exit_edges.contains(key)) {
            guards.push_back(counter(loop) + " == " + limit(loop));
          } else if (loop.members.contains(e.target)) {
            guards.push_back(counter(loop) + " < " + limit(loop));
          }
        } else if (back) {
          guards.push_back(counter(loop) + " < " + limit(loop));
        }
        if (back) assigns.push_back(counter(loop) + " = " + counter(loop) + " + 1");
        if (loop.exit_edges.contains(key)) assigns.push_back(counter(loop) + " = 0");
      }
      b.add_edge(from.out, locs.at(e.target).in, std::move(guards), std::nullopt, std::move(assigns));
    }

    if (m.exits.contains(off)) {
      std::vector<std::string> assigns{"lc = 0"};
      for (const auto& loop : m.loops) {
        if (loop.members.contains(off)) assigns.push_back(counter(loop) + " = 0");
      }
      b.add_edge(from.out, idle, clock_guard, channels.ret.at(m.id) + "!", std::move(assigns));
    }
  }
}

}  // namespace

std::string sanitize_identifier(const std::string& raw) {
  std::string out;
  for (char c : raw) {
    const bool legal = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
    out += legal ? c : '_';
  }
  if (out.empty() || (out[0] >= '0' && out[0] <= '9')) out.insert(out.begin(), '_');
  if (is_reserved_word(out)) out += '_';
  return out;
}

std::string mangle_identifier(const std::string& raw) { return sanitize_identifier(raw); }

std::string IdentifierScope::mangle(const std::string& raw) { return claim(sanitize_identifier(raw), raw); }

std::string IdentifierScope::claim(const std::string& base, const std::string& key) {
  std::string name = base;
  for (int attempt = 0; used_.contains(name); ++attempt) {
    name = base + hash_suffix(attempt == 0 ? key : key + "#" + std::to_string(attempt));
  }
  used_.insert(name);
  return name;
}

TaSystem transform(const cfg::Project& project, const TransformOptions& options) {
  const analysis::CallGraph graph = analysis::build_call_graph(project);
  std::map<std::string, int64_t> counts = analysis::compute_instance_counts(graph);
  for (const auto& [cls, n] : options.instance_overrides) {
    if (!project.classes.contains(cls)) {
      throw Error(ErrorCode::kInvalidArgument, "instance override for unknown class " + cls);
    }
    if (n < 1) throw Error(ErrorCode::kInvalidArgument, "instance count for " + cls + " must be positive");
    counts[cls] = n;
  }
  const std::set<cfg::MethodId> reachable = graph.reachable();
  check_ready(project, reachable);

  TaSystem sys;
  IdentifierScope globals;
  globals.reserve(kControllerName);
  globals.reserve(kGlobalClockName);
  std::map<std::string, std::string> template_name;
  for (const auto& [cls, model] : project.classes) template_name[cls] = globals.mangle(cls);
  Channels channels;
  for (const auto& id : reachable) {
    channels.call[id] = globals.mangle(id.key() + "#call");
    channels.ret[id] = globals.mangle(id.key() + "#return");
  }

  sys.global_declarations = std::string("clock ") + kGlobalClockName + ";\n";
  std::vector<std::string> chans;
  for (const auto& [id, name] : channels.call) {
    chans.push_back(name);
    chans.push_back(channels.ret.at(id));
  }
  for (const auto& c : chans) sys.global_declarations += "chan " + c + ";\n";

  int next_id = 0;
  {
    Template ctl;
    ctl.name = kControllerName;
    TemplateBuilder b(ctl, next_id);
    std::string start = b.add_location("start", std::nullopt, true);
    std::string waiting = b.add_location("waiting");
    std::string finish = b.add_location("finish", std::nullopt, false, true);
    ctl.initial = start;
    const cfg::MethodId main = project.main_method();
    b.add_edge(start, waiting, {}, channels.call.at(main) + "!", {});
    b.add_edge(waiting, finish, {}, channels.ret.at(main) + "?", {});
    // Keeps the terminated system from counting as deadlocked while the
    // urgent location freezes globalClock at the completion time.
    b.add_edge(finish, finish, {}, std::nullopt, {});
    sys.templates.push_back(std::move(ctl));
    sys.instantiation[kControllerName] = 1;
  }

  for (const auto& [cls, model] : project.classes) {
    Template t;
    t.name = template_name.at(cls);
    const int64_t n = counts.contains(cls) ? counts.at(cls) : 1;
    if (n > 1) {
      const std::string type = globals.claim(t.name + "_id", cls + "#id");
      sys.global_declarations += "typedef scalar[" + std::to_string(n) + "] " + type + ";\n";
      t.parameter = "const " + type + " id";
    }
    TemplateBuilder b(t, next_id);
    b.declare("clock lc;");
    t.initial = b.add_location("idle");
    IdentifierScope stems;
    for (const auto& [sig, m] : model.methods) {
      if (reachable.contains(m.id)) build_method(b, stems, m, channels, t.initial);
    }
    sys.instantiation[t.name] = n;
    sys.templates.push_back(std::move(t));
  }
  return sys;
}

}  // namespace bc2ta::ta
