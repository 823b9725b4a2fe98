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
// uppaal_xml.cpp -- writer and reader for UPPAAL's Flat System 1.2 format.

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <sstream>

#include "bc2ta/error.hpp"
#include "bc2ta/expr.hpp"
#include "bc2ta/uppaalio.hpp"

namespace bc2ta::uppaal {
namespace {

namespace pt = boost::property_tree;

std::string escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

// Grid layout; coordinates carry no meaning for the semantics.
struct Point {
  int x;
  int y;
};

Point grid(size_t index) { return {static_cast<int>(index % 8) * 170, static_cast<int>(index / 8) * 136}; }

std::string at(Point p, int dx = 0, int dy = 0) {
  return " x=\"" + std::to_string(p.x + dx) + "\" y=\"" + std::to_string(p.y + dy) + "\"";
}

[[noreturn]] void unsupported(const std::string& what) {
  throw Error(ErrorCode::kUnsupportedConstruct, "unsupported UPPAAL construct: " + what);
}

void only_children(const pt::ptree& node, std::initializer_list<std::string_view> allowed,
                   const std::string& where) {
  for (const auto& [key, child] : node) {
    if (key == "<xmlattr>" || key == "<xmlcomment>") continue;
    bool ok = false;
    for (auto a : allowed) ok |= key == a;
    if (!ok) unsupported("<" + key + "> in " + where);
  }
}

std::string attr(const pt::ptree& node, const std::string& name, const std::string& where) {
  auto v = node.get_optional<std::string>("<xmlattr>." + name);
  if (!v) throw Error(ErrorCode::kXmlSyntaxError, "missing attribute '" + name + "' in " + where);
  return *v;
}

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
}

// Accepts exactly "system A, B, C;" (comments allowed).
std::vector<std::string> parse_system_line(const std::string& raw) {
  std::string text;
  for (size_t i = 0; i < raw.size(); ++i) {
    if (raw.compare(i, 2, "//") == 0) {
      while (i < raw.size() && raw[i] != '\n') ++i;
    } else if (raw.compare(i, 2, "/*") == 0) {
      size_t end = raw.find("*/", i + 2);
      if (end == std::string::npos) throw Error(ErrorCode::kXmlSyntaxError, "unterminated comment in system block");
      i = end + 1;
    } else {
      text += raw[i];
    }
  }
  text = trim(text);
  if (text.rfind("system", 0) != 0 || text.empty() || text.back() != ';') {
    unsupported("system block other than a single 'system ...;' line: '" + text + "'");
  }
  std::vector<std::string> names = ta::split_top_level(text.substr(6, text.size() - 7));
  for (const auto& n : names) {
    if (!ta::is_identifier(n)) unsupported("process list entry '" + n + "'");
  }
  if (names.empty()) unsupported("empty system line");
  return names;
}

}  // namespace

std::string emit_xml(const ta::TaSystem& sys) {
  ta::validate_system(sys);
  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"utf-8\"?>\n";
  o << "<!DOCTYPE nta PUBLIC '" << kDtdPublicId << "' '" << kDtdSystemId << "'>\n";
  o << "<nta>\n";
  o << "\t<declaration>" << escape(sys.global_declarations) << "</declaration>\n";
  for (const auto& t : sys.templates) {
    o << "\t<template>\n";
    o << "\t\t<name" << at({0, 0}) << ">" << escape(t.name) << "</name>\n";
    if (!t.parameter.empty()) o << "\t\t<parameter>" << escape(t.parameter) << "</parameter>\n";
    if (!t.local_declarations.empty()) {
      o << "\t\t<declaration>" << escape(t.local_declarations) << "</declaration>\n";
    }
    std::map<std::string, Point> where;
    for (size_t i = 0; i < t.locations.size(); ++i) {
      const ta::Location& l = t.locations[i];
      const Point p = grid(i);
      where[l.id] = p;
      o << "\t\t<location id=\"" << escape(l.id) << "\"" << at(p) << ">\n";
      o << "\t\t\t<name" << at(p, -20, -34) << ">" << escape(l.name) << "</name>\n";
      if (l.invariant) {
        o << "\t\t\t<label kind=\"invariant\"" << at(p, -20, 17) << ">" << escape(*l.invariant) << "</label>\n";
      }
      if (l.urgent) o << "\t\t\t<urgent/>\n";
      if (l.committed) o << "\t\t\t<committed/>\n";
      o << "\t\t</location>\n";
    }
    o << "\t\t<init ref=\"" << escape(t.initial) << "\"/>\n";
    for (const auto& e : t.edges) {
      const Point a = where.at(e.source), b = where.at(e.target);
      const Point mid{(a.x + b.x) / 2, (a.y + b.y) / 2};
      o << "\t\t<transition>\n";
      o << "\t\t\t<source ref=\"" << escape(e.source) << "\"/>\n";
      o << "\t\t\t<target ref=\"" << escape(e.target) << "\"/>\n";
      if (e.guard) o << "\t\t\t<label kind=\"guard\"" << at(mid, 0, -34) << ">" << escape(*e.guard) << "</label>\n";
      if (e.sync) {
        o << "\t\t\t<label kind=\"synchronisation\"" << at(mid, 0, -17) << ">" << escape(*e.sync) << "</label>\n";
      }
      if (!e.assignments.empty()) {
        o << "\t\t\t<label kind=\"assignment\"" << at(mid) << ">" << escape(join(e.assignments, ", "))
          << "</label>\n";
      }
      if (e.source == e.target) {
        o << "\t\t\t<nail" << at(a, -40, -60) << "/>\n";
        o << "\t\t\t<nail" << at(a, 40, -60) << "/>\n";
      }
      o << "\t\t</transition>\n";
    }
    o << "\t</template>\n";
  }
  std::vector<std::string> names;
  for (const auto& t : sys.templates) names.push_back(t.name);
  o << "\t<system>system " << escape(join(names, ", ")) << ";</system>\n";
  o << "</nta>\n";
  return o.str();
}

std::string emit_queries(const std::vector<ta::Query>& queries) {
  std::string out;
  for (const auto& q : queries) {
    if (!q.comment.empty()) out += "/*\n" + q.comment + "\n*/\n";
    out += q.text() + "\n";
    out += "\n";
  }
  return out;
}

ta::TaSystem parse_xml(std::string_view text) {
  pt::ptree doc;
  try {
    std::istringstream in{std::string(text)};
    pt::read_xml(in, doc);
  } catch (const pt::xml_parser_error& e) {
    throw Error(ErrorCode::kXmlSyntaxError, std::string("malformed XML: ") + e.what());
  }
  auto nta = doc.get_child_optional("nta");
  if (!nta) throw Error(ErrorCode::kXmlSyntaxError, "missing <nta> root element");
  only_children(doc, {"nta"}, "document");
  only_children(*nta, {"declaration", "template", "system"}, "<nta>");

  ta::TaSystem sys;
  sys.global_declarations = nta->get<std::string>("declaration", "");
  std::vector<std::string> listed;
  bool have_system = false;
  for (const auto& [key, node] : *nta) {
    if (key == "system") {
      if (have_system) unsupported("more than one <system> block");
      have_system = true;
      listed = parse_system_line(node.data());
      continue;
    }
    if (key != "template") continue;
    only_children(node, {"name", "parameter", "declaration", "location", "init", "transition"}, "<template>");
    ta::Template t;
    t.name = trim(node.get<std::string>("name", ""));
    const std::string where = "template '" + t.name + "'";
    t.parameter = node.get<std::string>("parameter", "");
    t.local_declarations = node.get<std::string>("declaration", "");
    for (const auto& [ckey, child] : node) {
      if (ckey == "location") {
        only_children(child, {"name", "label", "urgent", "committed"}, "<location> in " + where);
        ta::Location l;
        l.id = attr(child, "id", where);
        l.name = trim(child.get<std::string>("name", ""));
        for (const auto& [lkey, label] : child) {
          if (lkey == "label") {
            const std::string kind = attr(label, "kind", where);
            if (kind != "invariant") unsupported("location label kind '" + kind + "' in " + where);
            if (l.invariant) unsupported("two invariants on one location in " + where);
            l.invariant = label.data();
          } else if (lkey == "urgent") {
            l.urgent = true;
          } else if (lkey == "committed") {
            l.committed = true;
          }
        }
        t.locations.push_back(std::move(l));
      } else if (ckey == "init") {
        t.initial = attr(child, "ref", where);
      } else if (ckey == "transition") {
        only_children(child, {"source", "target", "label", "nail"}, "<transition> in " + where);
        ta::TaEdge e;
        auto source = child.get_child_optional("source");
        auto target = child.get_child_optional("target");
        if (!source || !target) throw Error(ErrorCode::kXmlSyntaxError, "transition without source/target in " + where);
        e.source = attr(*source, "ref", where);
        e.target = attr(*target, "ref", where);
        for (const auto& [lkey, label] : child) {
          if (lkey != "label") continue;
          const std::string kind = attr(label, "kind", where);
          if (kind == "guard") {
            if (e.guard) unsupported("two guards on one transition in " + where);
            e.guard = label.data();
          } else if (kind == "synchronisation") {
            if (e.sync) unsupported("two synchronisations on one transition in " + where);
            e.sync = label.data();
          } else if (kind == "assignment") {
            for (auto& a : ta::split_top_level(label.data())) e.assignments.push_back(std::move(a));
          } else {
            unsupported("transition label kind '" + kind + "' in " + where);
          }
        }
        t.edges.push_back(std::move(e));
      }
    }
    if (t.initial.empty()) throw Error(ErrorCode::kDanglingReference, "no initial location in " + where);
    sys.templates.push_back(std::move(t));
  }
  if (!have_system) throw Error(ErrorCode::kXmlSyntaxError, "missing <system> block");

  // Instance counts come from the scalar parameter type of each template.
  std::map<std::string, int64_t> constants;
  std::map<std::string, int64_t> scalar_sizes;
  for (const auto& d : ta::parse_declarations(sys.global_declarations)) {
    if (d.kind == ta::DeclKind::kConstInt) constants[d.name] = ta::evaluate_constant(*d.init, constants);
    if (d.kind == ta::DeclKind::kScalarType) scalar_sizes[d.name] = ta::evaluate_constant(*d.size, constants);
  }
  std::vector<ta::Template> ordered;
  for (const auto& name : listed) {
    auto it = std::find_if(sys.templates.begin(), sys.templates.end(),
                           [&](const ta::Template& t) { return t.name == name; });
    if (it == sys.templates.end()) throw Error(ErrorCode::kDanglingReference, "system line names unknown template '" + name + "'");
    int64_t n = 1;
    if (auto p = ta::parse_parameter(it->parameter)) {
      auto size = scalar_sizes.find(p->type_name);
      if (size == scalar_sizes.end()) {
        throw Error(ErrorCode::kDanglingReference, "parameter type '" + p->type_name + "' of " + name);
      }
      n = size->second;
    }
    if (!sys.instantiation.emplace(name, n).second) unsupported("template '" + name + "' listed twice");
    ordered.push_back(*it);
  }
  if (ordered.size() != sys.templates.size()) unsupported("templates that are never instantiated");
  sys.templates = std::move(ordered);
  ta::validate_system(sys);
  return sys;
}

}  // namespace bc2ta::uppaal
