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
// serialize.cpp -- statistics and the versioned JSON model format.

#include <fstream>
#include <iomanip>
#include <sstream>

#include "bc2ta/cfgmodel.hpp"
#include "bc2ta/error.hpp"

namespace bc2ta::cfg {

using nlohmann::json;

namespace {

constexpr std::string_view kEdgeTagNames[] = {"fallthrough", "branch_taken", "switch_case",
                                              "back_edge",   "loop_exit",    "loop_continue"};

[[noreturn]] void corrupt(const std::string& what) {
  throw Error(ErrorCode::kCorruptModelFile, "corrupt model file: " + what);
}

json edge_keys_to_json(const std::set<EdgeKey>& keys) {
  json out = json::array();
  for (const auto& [s, t] : keys) out.push_back({s, t});
  return out;
}

std::set<EdgeKey> edge_keys_from_json(const json& j) {
  std::set<EdgeKey> out;
  for (const auto& e : j) out.emplace(e.at(0).get<uint32_t>(), e.at(1).get<uint32_t>());
  return out;
}

json method_id_to_json(const MethodId& id) {
  return {{"class", id.cls}, {"name", id.name}, {"descriptor", id.descriptor}};
}

MethodId method_id_from_json(const json& j) {
  return {j.at("class").get<std::string>(), j.at("name").get<std::string>(),
          j.at("descriptor").get<std::string>()};
}

json instruction_to_json(const Instruction& ins) {
  json j = {{"offset", ins.offset},
            {"mnemonic", ins.mnemonic},
            {"kind", std::string(to_string(ins.kind))},
            {"line", ins.line}};
  if (ins.time) j["time"] = {ins.time->lb, ins.time->ub};
  if (ins.invoke) {
    j["invoke"] = {{"owner", ins.invoke->owner},
                   {"name", ins.invoke->name},
                   {"descriptor", ins.invoke->descriptor},
                   {"dispatch", std::string(to_string(ins.invoke->dispatch))}};
  }
  if (!ins.resolved_targets.empty()) {
    json targets = json::array();
    for (const auto& t : ins.resolved_targets) targets.push_back(method_id_to_json(t));
    j["targets"] = std::move(targets);
  }
  if (ins.external_call) j["external"] = true;
  if (!ins.group_members.empty()) j["groupMembers"] = ins.group_members;
  return j;
}

Instruction instruction_from_json(const json& j) {
  Instruction ins;
  ins.offset = j.at("offset").get<uint32_t>();
  ins.mnemonic = j.at("mnemonic").get<std::string>();
  auto kind = instr_kind_from_string(j.at("kind").get<std::string>());
  if (!kind) corrupt("unknown instruction kind");
  ins.kind = *kind;
  ins.line = j.at("line").get<uint32_t>();
  if (j.contains("time")) ins.time = TimeBounds{j["time"].at(0).get<int64_t>(), j["time"].at(1).get<int64_t>()};
  if (j.contains("invoke")) {
    const json& r = j["invoke"];
    auto dispatch = dispatch_from_string(r.at("dispatch").get<std::string>());
    if (!dispatch) corrupt("unknown dispatch kind");
    ins.invoke = InvokeRef{r.at("owner").get<std::string>(), r.at("name").get<std::string>(),
                           r.at("descriptor").get<std::string>(), *dispatch};
  }
  if (j.contains("targets")) {
    for (const auto& t : j["targets"]) ins.resolved_targets.push_back(method_id_from_json(t));
  }
  ins.external_call = j.value("external", false);
  if (j.contains("groupMembers")) ins.group_members = j["groupMembers"].get<std::vector<uint32_t>>();
  return ins;
}

json method_to_json(const MethodModel& m) {
  json instructions = json::array();
  for (const auto& [off, ins] : m.instructions) instructions.push_back(instruction_to_json(ins));
  json edges = json::array();
  for (const auto& e : m.edges) edges.push_back({e.source, e.target, std::string(to_string(e.tag))});
  json loops = json::array();
  for (const auto& l : m.loops) {
    json lj = {{"head", l.head},
               {"members", l.members},
               {"backEdges", edge_keys_to_json(l.back_edges)},
               {"exitEdges", edge_keys_to_json(l.exit_edges)},
               {"continueEdges", edge_keys_to_json(l.continue_edges)}};
    if (l.limit) lj["limit"] = *l.limit;
    loops.push_back(std::move(lj));
  }
  return {{"name", m.id.name},
          {"descriptor", m.id.descriptor},
          {"static", m.is_static},
          {"abstract", m.is_abstract},
          {"entry", m.entry},
          {"exits", m.exits},
          {"instructions", std::move(instructions)},
          {"edges", std::move(edges)},
          {"loops", std::move(loops)},
          {"irreducibleCycles", m.irreducible_cycles}};
}

MethodModel method_from_json(const std::string& cls, const json& j) {
  MethodModel m;
  m.id = {cls, j.at("name").get<std::string>(), j.at("descriptor").get<std::string>()};
  m.is_static = j.at("static").get<bool>();
  m.is_abstract = j.at("abstract").get<bool>();
  m.entry = j.at("entry").get<uint32_t>();
  m.exits = j.at("exits").get<std::set<uint32_t>>();
  for (const auto& ij : j.at("instructions")) {
    Instruction ins = instruction_from_json(ij);
    uint32_t off = ins.offset;
    if (!m.instructions.emplace(off, std::move(ins)).second) corrupt("duplicate instruction offset");
  }
  for (const auto& ej : j.at("edges")) {
    auto tag = edge_tag_from_string(ej.at(2).get<std::string>());
    if (!tag) corrupt("unknown edge tag");
    m.edges.push_back({ej.at(0).get<uint32_t>(), ej.at(1).get<uint32_t>(), *tag});
  }
  for (const auto& lj : j.at("loops")) {
    LoopInfo l;
    l.head = lj.at("head").get<uint32_t>();
    l.members = lj.at("members").get<std::set<uint32_t>>();
    l.back_edges = edge_keys_from_json(lj.at("backEdges"));
    l.exit_edges = edge_keys_from_json(lj.at("exitEdges"));
    l.continue_edges = edge_keys_from_json(lj.at("continueEdges"));
    if (lj.contains("limit")) l.limit = lj["limit"].get<int64_t>();
    m.loops.push_back(std::move(l));
  }
  m.irreducible_cycles = j.at("irreducibleCycles").get<std::vector<std::vector<uint32_t>>>();
  return m;
}

}  // namespace

std::string_view to_string(EdgeTag tag) { return kEdgeTagNames[static_cast<int>(tag)]; }

std::optional<EdgeTag> edge_tag_from_string(std::string_view text) {
  for (size_t i = 0; i < std::size(kEdgeTagNames); ++i) {
    if (kEdgeTagNames[i] == text) return static_cast<EdgeTag>(i);
  }
  return std::nullopt;
}

StatsReport compute_stats(const Project& project) {
  StatsReport s;
  s.class_count = project.classes.size();
  for (const MethodModel* m : project.all_methods()) {
    ++s.method_count;
    s.loop_count += m->loops.size();
    s.instruction_count += m->instructions.size();
    s.edge_count += m->edges.size();
    for (const auto& [off, ins] : m->instructions) {
      if (ins.kind == InstrKind::kInvoke && !ins.resolved_targets.empty()) {
        ++s.resolvable_call_count;
        s.invocable_implementation_count += ins.resolved_targets.size();
      }
      if (ins.kind == InstrKind::kReturn) ++s.return_instruction_count;
    }
  }
  s.total = s.class_count + s.method_count + s.loop_count + s.instruction_count + s.edge_count;
  return s;
}

std::string format_stats(const StatsReport& s) {
  const std::pair<const char*, uint64_t> cols[] = {
      {"A", s.class_count},           {"B", s.method_count},
      {"C", s.loop_count},            {"D", s.instruction_count},
      {"E", s.edge_count},            {"F", s.resolvable_call_count},
      {"G", s.invocable_implementation_count}, {"H", s.return_instruction_count},
      {"Total", s.total}};
  std::ostringstream head, body;
  for (const auto& [name, value] : cols) {
    size_t width = std::max<size_t>(std::to_string(value).size(), std::string(name).size()) + 2;
    head << std::setw(static_cast<int>(width)) << name;
    body << std::setw(static_cast<int>(width)) << value;
  }
  return head.str() + "\n" + body.str() + "\n";
}

json to_json(const Project& project) {
  json classes = json::array();
  for (const auto& [name, cls] : project.classes) {
    json methods = json::array();
    for (const auto& [sig, m] : cls.methods) methods.push_back(method_to_json(m));
    classes.push_back({{"name", cls.name},
                       {"super", cls.super_name ? json(*cls.super_name) : json(nullptr)},
                       {"interfaces", cls.interfaces},
                       {"isInterface", cls.is_interface},
                       {"methods", std::move(methods)}});
  }
  return {{"formatVersion", kModelFormatVersion},
          {"mainClass", project.main_class},
          {"mainMethod", {{"name", project.main_method_name},
                          {"descriptor", project.main_method_descriptor}}},
          {"externalStubs", project.external_stubs},
          {"annotations", project.annotations},
          {"classes", std::move(classes)}};
}

Project project_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("formatVersion") || !doc["formatVersion"].is_string()) {
    corrupt("missing formatVersion");
  }
  const std::string version = doc["formatVersion"].get<std::string>();
  const std::string ours = kModelFormatVersion;
  if (version.substr(0, version.find('.')) != ours.substr(0, ours.find('.'))) {
    throw Error(ErrorCode::kSerializationVersionMismatch,
                "model format version " + version + " is not readable (supported: " + ours + ")");
  }
  try {
    Project p;
    p.main_class = doc.at("mainClass").get<std::string>();
    p.main_method_name = doc.at("mainMethod").at("name").get<std::string>();
    p.main_method_descriptor = doc.at("mainMethod").at("descriptor").get<std::string>();
    p.external_stubs = doc.at("externalStubs").get<std::set<std::string>>();
    p.annotations = doc.at("annotations");
    for (const auto& cj : doc.at("classes")) {
      ClassModel cls;
      cls.name = cj.at("name").get<std::string>();
      if (!cj.at("super").is_null()) cls.super_name = cj["super"].get<std::string>();
      cls.interfaces = cj.at("interfaces").get<std::vector<std::string>>();
      cls.is_interface = cj.at("isInterface").get<bool>();
      for (const auto& mj : cj.at("methods")) {
        MethodModel m = method_from_json(cls.name, mj);
        std::string sig = m.id.signature();
        if (!cls.methods.emplace(sig, std::move(m)).second) corrupt("duplicate method " + sig);
      }
      std::string name = cls.name;
      if (!p.classes.emplace(name, std::move(cls)).second) corrupt("duplicate class " + name);
    }
    return p;
  } catch (const json::exception& e) {
    corrupt(e.what());
  }
}

void save_model(const Project& project, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << to_json(project).dump(1) << "\n";
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

Project load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    corrupt(path.string() + ": " + e.what());
  }
  Project p = project_from_json(doc);
  try {
    check_model(p);
  } catch (const Error& e) {
    corrupt(path.string() + ": " + e.what());
  }
  return p;
}

}  // namespace bc2ta::cfg
