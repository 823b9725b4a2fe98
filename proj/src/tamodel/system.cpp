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
// system.cpp -- queries, validation and JSON persistence of timed-automata
// systems.

#include <fstream>

#include "bc2ta/error.hpp"
#include "bc2ta/expr.hpp"
#include "bc2ta/tamodel.hpp"

namespace bc2ta::ta {

using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void dangling(const std::string& what) {
  throw Error(ErrorCode::kDanglingReference, "dangling reference: " + what);
}

[[noreturn]] void unmangled(const std::string& what) {
  throw Error(ErrorCode::kUnmangledIdentifier, "not a legal identifier: " + what);
}

// Label text may only contain characters of the expression language.
void check_label_characters(const std::string& text) {
  for (char c : text) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
                    std::string_view(" \t\r\n()[],;:.!<>=+-*/%?&|").find(c) != std::string_view::npos;
    if (!ok) unmangled("'" + text + "' contains '" + std::string(1, c) + "'");
  }
}

enum class Sym { kClock, kChannel, kInt, kBool, kConst, kScalarType, kParameter };

using Symbols = std::map<std::string, Sym>;

void declare_all(const std::string& text, Symbols& table, const Symbols* outer) {
  check_label_characters(text);
  for (const auto& d : parse_declarations(text)) {
    if (!is_identifier(d.name) || is_reserved_word(d.name)) unmangled(d.name);
    auto check_expr = [&](const ExprPtr& e) {
      if (!e) return;
      std::vector<std::string> names;
      collect_names(*e, names);
      for (const auto& n : names) {
        auto it = table.find(n);
        const bool ok = (it != table.end() && it->second == Sym::kConst) ||
                        (outer != nullptr && outer->contains(n) && outer->at(n) == Sym::kConst);
        if (!ok) dangling("'" + n + "' in declaration of " + d.name + " is not a declared constant");
      }
    };
    check_expr(d.lower);
    check_expr(d.upper);
    check_expr(d.init);
    check_expr(d.size);
    Sym kind = Sym::kInt;
    switch (d.kind) {
      case DeclKind::kClock: kind = Sym::kClock; break;
      case DeclKind::kChannel: kind = Sym::kChannel; break;
      case DeclKind::kInt: kind = Sym::kInt; break;
      case DeclKind::kBool: kind = Sym::kBool; break;
      case DeclKind::kConstInt: kind = Sym::kConst; break;
      case DeclKind::kScalarType: kind = Sym::kScalarType; break;
    }
    if (!table.emplace(d.name, kind).second) dangling("'" + d.name + "' declared twice");
  }
}

struct Scope {
  const Symbols& globals;
  const Symbols& locals;

  std::optional<Sym> lookup(const std::string& name) const {
    if (auto it = locals.find(name); it != locals.end()) return it->second;
    if (auto it = globals.find(name); it != globals.end()) return it->second;
    return std::nullopt;
  }
};

void check_expression_names(const Expr& e, const Scope& scope, const std::string& where) {
  std::vector<std::string> names;
  collect_names(e, names);
  for (const auto& n : names) {
    auto sym = scope.lookup(n);
    if (!sym || *sym == Sym::kChannel || *sym == Sym::kScalarType) {
      dangling("'" + n + "' in " + where);
    }
  }
  if (e.op == ExprOp::kLocation || e.op == ExprOp::kDeadlock || e.op == ExprOp::kExists ||
      e.op == ExprOp::kForall) {
    throw Error(ErrorCode::kUnsupportedConstruct, "state predicates are not allowed in " + where);
  }
  for (const auto& a : e.args) check_expression_names(*a, scope, where);
}

// Query formulas may name templates, their locations and global variables.
void check_query_expression(const Expr& e, const TaSystem& sys, const Symbols& globals,
                            std::set<std::string>& bound, const std::string& where) {
  switch (e.op) {
    case ExprOp::kName:
      if (!bound.contains(e.name) && !globals.contains(e.name)) dangling("'" + e.name + "' in " + where);
      return;
    case ExprOp::kLocation: {
      const Template* t = sys.find_template(e.name);
      if (t == nullptr) dangling("template '" + e.name + "' in " + where);
      if (t->find_location_by_name(e.member) == nullptr) {
        dangling("location '" + e.name + "." + e.member + "' in " + where);
      }
      if (e.args.empty() != t->parameter.empty()) {
        dangling("instance selector for '" + e.name + "' in " + where);
      }
      break;
    }
    case ExprOp::kExists:
    case ExprOp::kForall: {
      auto it = globals.find(e.member);
      if (it == globals.end() || it->second != Sym::kScalarType) {
        dangling("quantifier type '" + e.member + "' in " + where);
      }
      const bool fresh = bound.insert(e.name).second;
      check_query_expression(*e.args[0], sys, globals, bound, where);
      if (fresh) bound.erase(e.name);
      return;
    }
    default:
      break;
  }
  for (const auto& a : e.args) check_query_expression(*a, sys, globals, bound, where);
}

}  // namespace

const Location* Template::find_location(const std::string& id) const {
  for (const auto& l : locations) {
    if (l.id == id) return &l;
  }
  return nullptr;
}

const Location* Template::find_location_by_name(const std::string& n) const {
  for (const auto& l : locations) {
    if (l.name == n) return &l;
  }
  return nullptr;
}

const Template* TaSystem::find_template(const std::string& n) const {
  for (const auto& t : templates) {
    if (t.name == n) return &t;
  }
  return nullptr;
}

std::string_view to_string(QueryKind kind) {
  switch (kind) {
    case QueryKind::kInvariant: return "invariant";
    case QueryKind::kReach: return "reach";
    case QueryKind::kLeadsTo: return "leads_to";
  }
  return "invariant";
}

std::string Query::text() const {
  switch (kind) {
    case QueryKind::kInvariant: return "A[] " + expression;
    case QueryKind::kReach: return "E<> " + expression;
    case QueryKind::kLeadsTo: return expression;
  }
  return expression;
}

Query parse_query(const std::string& raw) {
  const std::string text = trim(raw);
  Query q;
  if (text.rfind("A[]", 0) == 0) {
    q.kind = QueryKind::kInvariant;
    q.expression = trim(text.substr(3));
  } else if (text.rfind("E<>", 0) == 0) {
    q.kind = QueryKind::kReach;
    q.expression = trim(text.substr(3));
  } else if (text.find("-->") != std::string::npos) {
    q.kind = QueryKind::kLeadsTo;
    q.expression = text;
    return q;
  } else {
    throw Error(ErrorCode::kUnsupportedQuery,
                "unsupported query '" + text + "' (expected A[] p, E<> p or p --> q)");
  }
  if (q.expression.empty()) throw Error(ErrorCode::kUnsupportedQuery, "empty state formula in '" + text + "'");
  try {
    parse_expression(q.expression);
  } catch (const Error& e) {
    throw Error(ErrorCode::kUnsupportedQuery, e.what());
  }
  return q;
}

std::vector<Query> default_queries(const TaSystem& /*system*/, const QueryOptions& options) {
  const std::string x = std::to_string(options.bound_x);
  std::vector<Query> out;
  if (options.literal_finish_query) {
    out.push_back({QueryKind::kInvariant, std::string(kControllerName) + ".finish and " + kGlobalClockName + " <= " + x,
                   "literal form: always at finish with globalClock at most " + x});
  } else {
    out.push_back({QueryKind::kInvariant,
                   std::string("(") + kControllerName + ".finish imply " + kGlobalClockName + " <= " + x + ")",
                   "every run reaches finish within " + x + " time units"});
  }
  out.push_back({QueryKind::kReach, std::string(kControllerName) + ".finish", "main can terminate"});
  out.push_back({QueryKind::kInvariant, "not deadlock", "no deadlock"});
  for (const auto& lt : options.leads_to) out.push_back({QueryKind::kLeadsTo, trim(lt), "leads-to"});
  return out;
}

void validate_system(const TaSystem& sys) {
  Symbols globals;
  declare_all(sys.global_declarations, globals, nullptr);

  std::set<std::string> template_names, ids;
  for (const auto& t : sys.templates) {
    if (!is_identifier(t.name) || is_reserved_word(t.name)) unmangled("template '" + t.name + "'");
    if (!template_names.insert(t.name).second) dangling("template '" + t.name + "' defined twice");
    if (!sys.instantiation.contains(t.name)) dangling("template '" + t.name + "' has no instance count");

    Symbols locals;
    check_label_characters(t.parameter);
    if (auto p = parse_parameter(t.parameter)) {
      auto it = globals.find(p->type_name);
      if (it == globals.end() || it->second != Sym::kScalarType) {
        dangling("parameter type '" + p->type_name + "' of " + t.name);
      }
      locals[p->name] = Sym::kParameter;
    }
    declare_all(t.local_declarations, locals, &globals);
    const Scope scope{globals, locals};

    std::set<std::string> names;
    for (const auto& l : t.locations) {
      if (!is_identifier(l.id)) unmangled("location id '" + l.id + "'");
      if (!is_identifier(l.name) || is_reserved_word(l.name)) unmangled("location '" + l.name + "' in " + t.name);
      if (!ids.insert(l.id).second) dangling("location id '" + l.id + "' used twice");
      if (!names.insert(l.name).second) dangling("location '" + l.name + "' defined twice in " + t.name);
      if (l.invariant) {
        check_label_characters(*l.invariant);
        check_expression_names(*parse_expression(*l.invariant), scope, "invariant of " + t.name + "." + l.name);
      }
    }
    if (t.find_location(t.initial) == nullptr) dangling("initial location of " + t.name);
    for (const auto& e : t.edges) {
      if (t.find_location(e.source) == nullptr || t.find_location(e.target) == nullptr) {
        dangling("edge endpoint " + e.source + " -> " + e.target + " in " + t.name);
      }
      const std::string where = "edge " + e.source + " -> " + e.target + " of " + t.name;
      if (e.guard) {
        check_label_characters(*e.guard);
        check_expression_names(*parse_expression(*e.guard), scope, where);
      }
      if (e.sync) {
        check_label_characters(*e.sync);
        SyncLabel s = parse_sync(*e.sync);
        if (scope.lookup(s.channel) != Sym::kChannel) dangling("channel '" + s.channel + "' in " + where);
      }
      for (const auto& a : e.assignments) {
        check_label_characters(a);
        Assignment asg = parse_assignment(a);
        auto sym = scope.lookup(asg.target);
        if (!sym) dangling("'" + asg.target + "' in " + where);
        if (*sym != Sym::kInt && *sym != Sym::kBool && *sym != Sym::kClock) {
          throw Error(ErrorCode::kUnsupportedConstruct, "cannot assign to '" + asg.target + "' in " + where);
        }
        check_expression_names(*asg.value, scope, where);
      }
    }
  }
  for (const auto& [name, n] : sys.instantiation) {
    if (!template_names.contains(name)) dangling("instance count for unknown template '" + name + "'");
    if (n < 1) throw Error(ErrorCode::kUnsupportedConstruct, "template '" + name + "' needs at least one instance");
  }
  for (const auto& q : sys.queries) {
    if (q.kind == QueryKind::kLeadsTo) continue;  // passed through for the external checker
    check_label_characters(q.expression);
    std::set<std::string> bound;
    check_query_expression(*parse_expression(q.expression), sys, globals, bound, "query '" + q.text() + "'");
  }
}

json to_json(const TaSystem& sys) {
  json templates = json::array();
  for (const auto& t : sys.templates) {
    json locations = json::array();
    for (const auto& l : t.locations) {
      json lj = {{"id", l.id}, {"name", l.name}, {"committed", l.committed}, {"urgent", l.urgent}};
      if (l.invariant) lj["invariant"] = *l.invariant;
      locations.push_back(std::move(lj));
    }
    json edges = json::array();
    for (const auto& e : t.edges) {
      json ej = {{"source", e.source}, {"target", e.target}, {"assignments", e.assignments}};
      if (e.guard) ej["guard"] = *e.guard;
      if (e.sync) ej["sync"] = *e.sync;
      edges.push_back(std::move(ej));
    }
    templates.push_back({{"name", t.name},
                         {"parameter", t.parameter},
                         {"declarations", t.local_declarations},
                         {"initial", t.initial},
                         {"locations", std::move(locations)},
                         {"edges", std::move(edges)}});
  }
  json queries = json::array();
  for (const auto& q : sys.queries) {
    queries.push_back({{"kind", std::string(to_string(q.kind))}, {"expression", q.expression}, {"comment", q.comment}});
  }
  return {{"formatVersion", kSystemFormatVersion},
          {"globalDeclarations", sys.global_declarations},
          {"templates", std::move(templates)},
          {"instantiation", sys.instantiation},
          {"queries", std::move(queries)}};
}

TaSystem system_from_json(const json& doc) {
  auto corrupt = [](const std::string& what) -> Error {
    return Error(ErrorCode::kCorruptModelFile, "corrupt system file: " + what);
  };
  if (!doc.is_object() || !doc.contains("formatVersion") || !doc["formatVersion"].is_string()) {
    throw corrupt("missing formatVersion");
  }
  const std::string version = doc["formatVersion"].get<std::string>();
  const std::string ours = kSystemFormatVersion;
  if (version.substr(0, version.find('.')) != ours.substr(0, ours.find('.'))) {
    throw Error(ErrorCode::kSerializationVersionMismatch,
                "system format version " + version + " is not readable (supported: " + ours + ")");
  }
  try {
    TaSystem sys;
    sys.global_declarations = doc.at("globalDeclarations").get<std::string>();
    for (const auto& tj : doc.at("templates")) {
      Template t;
      t.name = tj.at("name").get<std::string>();
      t.parameter = tj.at("parameter").get<std::string>();
      t.local_declarations = tj.at("declarations").get<std::string>();
      t.initial = tj.at("initial").get<std::string>();
      for (const auto& lj : tj.at("locations")) {
        Location l;
        l.id = lj.at("id").get<std::string>();
        l.name = lj.at("name").get<std::string>();
        l.committed = lj.at("committed").get<bool>();
        l.urgent = lj.at("urgent").get<bool>();
        if (lj.contains("invariant")) l.invariant = lj["invariant"].get<std::string>();
        t.locations.push_back(std::move(l));
      }
      for (const auto& ej : tj.at("edges")) {
        TaEdge e;
        e.source = ej.at("source").get<std::string>();
        e.target = ej.at("target").get<std::string>();
        e.assignments = ej.at("assignments").get<std::vector<std::string>>();
        if (ej.contains("guard")) e.guard = ej["guard"].get<std::string>();
        if (ej.contains("sync")) e.sync = ej["sync"].get<std::string>();
        t.edges.push_back(std::move(e));
      }
      sys.templates.push_back(std::move(t));
    }
    sys.instantiation = doc.at("instantiation").get<std::map<std::string, int64_t>>();
    for (const auto& qj : doc.at("queries")) {
      Query q;
      const std::string kind = qj.at("kind").get<std::string>();
      if (kind == "invariant") {
        q.kind = QueryKind::kInvariant;
      } else if (kind == "reach") {
        q.kind = QueryKind::kReach;
      } else if (kind == "leads_to") {
        q.kind = QueryKind::kLeadsTo;
      } else {
        throw corrupt("unknown query kind " + kind);
      }
      q.expression = qj.at("expression").get<std::string>();
      q.comment = qj.at("comment").get<std::string>();
      sys.queries.push_back(std::move(q));
    }
    return sys;
  } catch (const json::exception& e) {
    throw corrupt(e.what());
  }
}

void save_system(const TaSystem& system, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << to_json(system).dump(1) << "\n";
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

TaSystem load_system(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kCorruptModelFile, "corrupt system file " + path.string() + ": " + e.what());
  }
  return system_from_json(doc);
}

}  // namespace bc2ta::ta
