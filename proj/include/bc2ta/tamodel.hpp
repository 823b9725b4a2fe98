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
// tamodel.hpp -- networks of timed automata and the translation from the
// enriched control-flow model.

#ifndef BC2TA_TAMODEL_HPP_
#define BC2TA_TAMODEL_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "bc2ta/cfgmodel.hpp"
#include "json.hpp"

namespace bc2ta::ta {

struct Location {
  std::string id;  // unique across the whole system, "id<n>"
  std::string name;
  std::optional<std::string> invariant;
  bool committed = false;
  bool urgent = false;

  bool operator==(const Location&) const = default;
};

struct TaEdge {
  std::string source;  // location ids
  std::string target;
  std::optional<std::string> guard;
  std::optional<std::string> sync;
  std::vector<std::string> assignments;

  bool operator==(const TaEdge&) const = default;
};

struct Template {
  std::string name;
  std::string parameter;  // "const <Type> id" for multi-instance templates
  std::string local_declarations;
  std::vector<Location> locations;
  std::vector<TaEdge> edges;
  std::string initial;

  bool operator==(const Template&) const = default;

  const Location* find_location(const std::string& id) const;
  const Location* find_location_by_name(const std::string& name) const;
};

enum class QueryKind { kInvariant, kReach, kLeadsTo };

std::string_view to_string(QueryKind kind);

struct Query {
  QueryKind kind = QueryKind::kInvariant;
  // State formula for A[] and E<>; the whole "p --> q" text for leads-to.
  std::string expression;
  std::string comment;

  bool operator==(const Query&) const = default;

  std::string text() const;
};

// Accepts "A[] p", "E<> p" and "p --> q"; anything else is kUnsupportedQuery.
Query parse_query(const std::string& text);

struct TaSystem {
  std::string global_declarations;
  std::vector<Template> templates;  // listed in this order in the system line
  std::map<std::string, int64_t> instantiation;
  std::vector<Query> queries;

  bool operator==(const TaSystem&) const = default;

  const Template* find_template(const std::string& name) const;
};

inline constexpr const char* kControllerName = "controller";
inline constexpr const char* kGlobalClockName = "globalClock";

// Legal-identifier rewriting with per-scope collision handling.
class IdentifierScope {
 public:
  // Reserves an exact name (fails silently if already taken).
  void reserve(const std::string& name) { used_.insert(name); }
  bool contains(const std::string& name) const { return used_.contains(name); }
  // Sanitizes `raw`, then claims it; a name already claimed in this scope
  // gets "_x<hash>" appended, derived from `raw`.
  std::string mangle(const std::string& raw);
  // Claims `base` (already legal), disambiguating with a hash of `key`.
  std::string claim(const std::string& base, const std::string& key);

 private:
  std::set<std::string> used_;
};

// Scope-free mangling: substitution, leading-digit and reserved-word fixes.
std::string sanitize_identifier(const std::string& raw);
std::string mangle_identifier(const std::string& raw);

struct TransformOptions {
  // Class name -> instance count, replacing the call-graph computation.
  std::map<std::string, int64_t> instance_overrides;
};

TaSystem transform(const cfg::Project& project, const TransformOptions& options = {});

struct QueryOptions {
  int64_t bound_x = 20;
  bool literal_finish_query = false;
  std::vector<std::string> leads_to;  // passed through verbatim
};

std::vector<Query> default_queries(const TaSystem& system, const QueryOptions& options);

// Structural and reference checks over every label, declaration and query.
// Throws kUnmangledIdentifier, kDanglingReference or kUnsupportedConstruct.
void validate_system(const TaSystem& system);

inline constexpr const char* kSystemFormatVersion = "1.0";

nlohmann::json to_json(const TaSystem& system);
TaSystem system_from_json(const nlohmann::json& doc);
void save_system(const TaSystem& system, const std::filesystem::path& path);
TaSystem load_system(const std::filesystem::path& path);

}  // namespace bc2ta::ta

#endif  // BC2TA_TAMODEL_HPP_
