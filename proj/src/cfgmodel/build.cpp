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
// build.cpp -- construction of the control-flow model from raw classes and
// class-hierarchy resolution of call sites.

#include <algorithm>
#include <deque>

#include "bc2ta/cfgmodel.hpp"
#include "bc2ta/error.hpp"

namespace bc2ta::cfg {
namespace {

[[noreturn]] void inconsistent(const std::string& what) {
  throw Error(ErrorCode::kInconsistentModel, "inconsistent model: " + what);
}

MethodModel build_method(const std::string& cls, const frontend::RawMethod& raw) {
  MethodModel m;
  m.id = {cls, raw.name, raw.descriptor};
  m.is_static = raw.is_static;
  m.is_abstract = raw.is_abstract;
  if (raw.instructions.empty()) return m;

  const auto& list = raw.instructions;
  std::map<uint32_t, size_t> index;
  for (size_t i = 0; i < list.size(); ++i) index[list[i].offset] = i;

  std::vector<ControlFlowEdge> edges;
  // Falling off the end is only an error once the instruction is known to
  // be reachable; dead trailing code is tolerated.
  std::optional<uint32_t> falls_off;
  auto fallthrough = [&](size_t i) -> uint32_t {
    if (i + 1 >= list.size()) {
      falls_off = list[i].offset;
      return list[i].offset;
    }
    return list[i + 1].offset;
  };
  for (size_t i = 0; i < list.size(); ++i) {
    const auto& ins = list[i];
    switch (ins.kind) {
      case InstrKind::kSequential:
      case InstrKind::kInvoke:
      case InstrKind::kDummy:
        edges.push_back({ins.offset, fallthrough(i), EdgeTag::kFallthrough});
        break;
      case InstrKind::kCondBranch:
        if (ins.branch_targets.size() != 1) {
          inconsistent(m.id.key() + ": conditional branch at " + std::to_string(ins.offset) +
                       " needs exactly one target");
        }
        edges.push_back({ins.offset, ins.branch_targets[0], EdgeTag::kBranchTaken});
        edges.push_back({ins.offset, fallthrough(i), EdgeTag::kFallthrough});
        break;
      case InstrKind::kGoto:
        if (ins.branch_targets.size() != 1) {
          inconsistent(m.id.key() + ": goto at " + std::to_string(ins.offset) +
                       " needs exactly one target");
        }
        edges.push_back({ins.offset, ins.branch_targets[0], EdgeTag::kBranchTaken});
        break;
      case InstrKind::kSwitch:
        if (ins.branch_targets.empty()) {
          inconsistent(m.id.key() + ": switch at " + std::to_string(ins.offset) + " has no targets");
        }
        for (uint32_t t : ins.branch_targets) {
          edges.push_back({ins.offset, t, EdgeTag::kSwitchCase});
        }
        break;
      default:
        break;
    }
  }
  if (falls_off) {
    std::erase_if(edges, [&](const ControlFlowEdge& e) {
      return e.source == *falls_off && e.target == *falls_off && e.tag == EdgeTag::kFallthrough;
    });
  }
  for (const auto& e : edges) {
    if (!index.contains(e.target)) {
      inconsistent(m.id.key() + ": edge to missing offset " + std::to_string(e.target));
    }
  }

  // Keep only what is reachable from the entry.
  std::map<uint32_t, std::vector<uint32_t>> succ;
  for (const auto& e : edges) succ[e.source].push_back(e.target);
  std::set<uint32_t> reached{list.front().offset};
  std::deque<uint32_t> work{list.front().offset};
  while (!work.empty()) {
    uint32_t at = work.front();
    work.pop_front();
    for (uint32_t t : succ[at]) {
      if (reached.insert(t).second) work.push_back(t);
    }
  }

  if (falls_off && reached.contains(*falls_off)) {
    inconsistent(m.id.key() + ": control falls off the end after offset " +
                 std::to_string(*falls_off));
  }
  m.entry = list.front().offset;
  for (const auto& ins : list) {
    if (!reached.contains(ins.offset)) continue;
    Instruction out;
    out.offset = ins.offset;
    out.mnemonic = ins.mnemonic;
    out.kind = ins.kind;
    out.line = ins.line;
    out.invoke = ins.invoke_ref;
    if (is_exit_kind(ins.kind)) m.exits.insert(ins.offset);
    m.instructions.emplace(ins.offset, std::move(out));
  }
  for (const auto& e : edges) {
    if (reached.contains(e.source)) m.edges.push_back(e);
  }
  return m;
}

// First declaration of `signature` visible from `cls`: the superclass chain
// first, then default methods on super-interfaces.
const MethodModel* lookup_declaration(const Project& p, const std::string& cls,
                                      const std::string& signature) {
  std::vector<std::string> interfaces;
  std::set<std::string> guard;
  for (std::optional<std::string> at = cls; at && guard.insert(*at).second;) {
    auto it = p.classes.find(*at);
    if (it == p.classes.end()) break;
    if (auto m = it->second.methods.find(signature); m != it->second.methods.end()) {
      return &m->second;
    }
    interfaces.insert(interfaces.end(), it->second.interfaces.begin(), it->second.interfaces.end());
    at = it->second.super_name;
  }
  std::deque<std::string> queue(interfaces.begin(), interfaces.end());
  while (!queue.empty()) {
    std::string name = queue.front();
    queue.pop_front();
    if (!guard.insert(name).second) continue;
    auto it = p.classes.find(name);
    if (it == p.classes.end()) continue;
    if (auto m = it->second.methods.find(signature);
        m != it->second.methods.end() && m->second.has_body()) {
      return &m->second;
    }
    for (const auto& sup : it->second.interfaces) queue.push_back(sup);
  }
  return nullptr;
}

bool is_strict_subtype(const Project& p, const std::string& sub, const std::string& super) {
  std::set<std::string> seen{sub};
  std::deque<std::string> queue{sub};
  while (!queue.empty()) {
    auto it = p.classes.find(queue.front());
    queue.pop_front();
    if (it == p.classes.end()) continue;
    std::vector<std::string> parents = it->second.interfaces;
    if (it->second.super_name) parents.push_back(*it->second.super_name);
    for (const auto& parent : parents) {
      if (parent == super) return true;
      if (seen.insert(parent).second) queue.push_back(parent);
    }
  }
  return false;
}

}  // namespace

std::optional<InstrId> InstrId::parse_key(const std::string& key) {
  // <class>#<name><descriptor>#<offset>; the descriptor never contains '#'.
  size_t last = key.rfind('#');
  if (last == std::string::npos || last == 0) return std::nullopt;
  size_t first = key.rfind('#', last - 1);
  if (first == std::string::npos) return std::nullopt;
  std::string sig = key.substr(first + 1, last - first - 1);
  size_t paren = sig.find('(');
  if (paren == std::string::npos || paren == 0) return std::nullopt;
  InstrId id;
  id.method = {key.substr(0, first), sig.substr(0, paren), sig.substr(paren)};
  try {
    size_t used = 0;
    unsigned long v = std::stoul(key.substr(last + 1), &used);
    if (used != key.size() - last - 1) return std::nullopt;
    id.offset = static_cast<uint32_t>(v);
  } catch (const std::exception&) {
    return std::nullopt;
  }
  return id;
}

std::vector<const ControlFlowEdge*> MethodModel::out_edges(uint32_t offset) const {
  std::vector<const ControlFlowEdge*> out;
  for (const auto& e : edges) {
    if (e.source == offset) out.push_back(&e);
  }
  return out;
}

std::vector<const ControlFlowEdge*> MethodModel::in_edges(uint32_t offset) const {
  std::vector<const ControlFlowEdge*> out;
  for (const auto& e : edges) {
    if (e.target == offset) out.push_back(&e);
  }
  return out;
}

const LoopInfo* MethodModel::loop_with_head(uint32_t offset) const {
  for (const auto& l : loops) {
    if (l.head == offset) return &l;
  }
  return nullptr;
}

const MethodModel* Project::find_method(const MethodId& id) const {
  auto c = classes.find(id.cls);
  if (c == classes.end()) return nullptr;
  auto m = c->second.methods.find(id.signature());
  return m == c->second.methods.end() ? nullptr : &m->second;
}

MethodModel* Project::find_method(const MethodId& id) {
  return const_cast<MethodModel*>(std::as_const(*this).find_method(id));
}

std::vector<const MethodModel*> Project::all_methods() const {
  std::vector<const MethodModel*> out;
  for (const auto& [name, cls] : classes) {
    for (const auto& [sig, m] : cls.methods) out.push_back(&m);
  }
  return out;
}

std::vector<MethodModel*> Project::all_methods() {
  std::vector<MethodModel*> out;
  for (auto& [name, cls] : classes) {
    for (auto& [sig, m] : cls.methods) out.push_back(&m);
  }
  return out;
}

std::vector<MethodId> resolve_invocation_targets(const Project& project, const InstrId& site) {
  const MethodModel* method = project.find_method(site.method);
  if (method == nullptr) return {};
  auto it = method->instructions.find(site.offset);
  if (it == method->instructions.end() || !it->second.invoke) return {};
  const InvokeRef& ref = *it->second.invoke;
  const std::string sig = ref.name + ref.descriptor;

  std::vector<MethodId> out;
  auto add = [&](const std::string& receiver) {
    const MethodModel* found = lookup_declaration(project, receiver, sig);
    if (found != nullptr && found->has_body()) out.push_back(found->id);
  };
  add(ref.owner);
  if (ref.dispatch == Dispatch::kVirtual || ref.dispatch == Dispatch::kInterface) {
    // Every possible receiver type dispatches to its nearest declaration.
    for (const auto& [name, cls] : project.classes) {
      if (!cls.is_interface && is_strict_subtype(project, name, ref.owner)) add(name);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Project build_project(const std::vector<frontend::RawClass>& raw,
                      const std::set<std::string>& external_stubs, const std::string& main_class,
                      const std::string& main_method_name,
                      const std::string& main_method_descriptor) {
  Project p;
  p.main_class = main_class;
  p.main_method_name = main_method_name;
  p.main_method_descriptor = main_method_descriptor;
  p.external_stubs = external_stubs;
  for (const auto& rc : raw) {
    ClassModel cls;
    cls.name = rc.name;
    cls.super_name = rc.super_name;
    cls.interfaces = rc.interfaces;
    cls.is_interface = rc.is_interface;
    for (const auto& rm : rc.methods) {
      frontend::check_method_invariants(rc, rm);
      MethodModel m = build_method(rc.name, rm);
      std::string sig = m.id.signature();
      if (!cls.methods.emplace(sig, std::move(m)).second) {
        inconsistent("duplicate method " + rc.name + "#" + sig);
      }
    }
    if (!p.classes.emplace(rc.name, std::move(cls)).second) {
      inconsistent("duplicate class " + rc.name);
    }
  }
  for (const auto& [name, cls] : p.classes) p.external_stubs.erase(name);

  // Resolution needs the complete class set.
  std::vector<std::pair<InstrId, std::vector<MethodId>>> resolved;
  for (const MethodModel* m : std::as_const(p).all_methods()) {
    for (const auto& [off, ins] : m->instructions) {
      if (ins.kind != InstrKind::kInvoke) continue;
      InstrId site{m->id, off};
      resolved.emplace_back(site, resolve_invocation_targets(p, site));
    }
  }
  for (auto& [site, targets] : resolved) {
    Instruction& ins = p.find_method(site.method)->instructions.at(site.offset);
    ins.external_call = targets.empty();
    ins.resolved_targets = std::move(targets);
  }

  const MethodModel* main = p.find_method(p.main_method());
  if (main == nullptr || !main->has_body()) {
    throw Error(ErrorCode::kMainClassNotFound,
                "main method " + p.main_method().key() + " not found or has no body");
  }
  check_model(p);
  return p;
}

void check_model(const Project& p) {
  if (!p.classes.contains(p.main_class)) inconsistent("main class missing");
  for (const auto& [name, cls] : p.classes) {
    std::set<std::string> chain;
    for (std::optional<std::string> at = name; at;) {
      if (!chain.insert(*at).second) inconsistent("cyclic superclass chain at " + name);
      auto it = p.classes.find(*at);
      if (it == p.classes.end()) break;
      at = it->second.super_name;
    }
  }
  for (const MethodModel* m : p.all_methods()) {
    const std::string where = m->id.key();
    if (!m->has_body()) {
      if (!m->edges.empty()) inconsistent(where + ": bodiless method has edges");
      continue;
    }
    if (!m->instructions.contains(m->entry)) inconsistent(where + ": entry missing");
    std::map<uint32_t, int> out_degree;
    for (const auto& e : m->edges) {
      if (!m->instructions.contains(e.source) || !m->instructions.contains(e.target)) {
        inconsistent(where + ": edge endpoint missing");
      }
      ++out_degree[e.source];
    }
    for (const auto& [off, ins] : m->instructions) {
      bool is_exit = m->exits.contains(off);
      if (is_exit != is_exit_kind(ins.kind)) inconsistent(where + ": exit set mismatch at " + std::to_string(off));
      if (!is_exit && out_degree[off] == 0) {
        inconsistent(where + ": instruction " + std::to_string(off) + " has no successor");
      }
      if (is_exit && out_degree[off] != 0) {
        inconsistent(where + ": exit " + std::to_string(off) + " has successors");
      }
      if (ins.time && (ins.time->lb < 0 || ins.time->lb > ins.time->ub)) {
        inconsistent(where + ": bad time bounds at " + std::to_string(off));
      }
      if (ins.kind != InstrKind::kInvoke && !ins.resolved_targets.empty()) {
        inconsistent(where + ": resolved targets on a non-invoke at " + std::to_string(off));
      }
      if ((ins.kind == InstrKind::kGroup) != !ins.group_members.empty()) {
        inconsistent(where + ": group membership mismatch at " + std::to_string(off));
      }
      for (const auto& t : ins.resolved_targets) {
        if (p.find_method(t) == nullptr) inconsistent(where + ": unknown call target " + t.key());
      }
    }
    std::map<uint32_t, std::vector<uint32_t>> succ;
    for (const auto& e : m->edges) succ[e.source].push_back(e.target);
    std::set<uint32_t> reached{m->entry};
    std::deque<uint32_t> work{m->entry};
    while (!work.empty()) {
      uint32_t at = work.front();
      work.pop_front();
      for (uint32_t t : succ[at]) {
        if (reached.insert(t).second) work.push_back(t);
      }
    }
    if (reached.size() != m->instructions.size()) inconsistent(where + ": unreachable instructions");
  }
}

}  // namespace bc2ta::cfg
