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
// timing.cpp -- timing tables and per-instruction bound assignment.

#include <fstream>

#include "bc2ta/analyses.hpp"
#include "bc2ta/error.hpp"

namespace bc2ta::analysis {
namespace {

cfg::TimeBounds bounds_from_json(const nlohmann::json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer()) {
    throw Error(ErrorCode::kInvalidBounds, where + ": expected [lb, ub] integers");
  }
  cfg::TimeBounds b{j[0].get<int64_t>(), j[1].get<int64_t>()};
  if (b.lb < 0 || b.lb > b.ub) {
    throw Error(ErrorCode::kInvalidBounds, where + ": bounds [" + std::to_string(b.lb) + ", " +
                                               std::to_string(b.ub) + "] are not 0 <= lb <= ub");
  }
  return b;
}

void check_bounds(const cfg::TimeBounds& b, const std::string& where) {
  if (b.lb < 0 || b.lb > b.ub) {
    throw Error(ErrorCode::kInvalidBounds, where + ": bounds are not 0 <= lb <= ub");
  }
}

}  // namespace

TimingTable parse_timing_table(const nlohmann::json& doc) {
  if (!doc.is_object()) throw Error(ErrorCode::kInvalidArgument, "timing table must be a JSON object");
  TimingTable t;
  for (const auto& [key, value] : doc.items()) {
    if (key != "default" && key != "mnemonics" && key != "sites") {
      throw Error(ErrorCode::kInvalidArgument, "unknown timing table section '" + key + "'");
    }
  }
  if (doc.contains("default")) t.default_bounds = bounds_from_json(doc["default"], "default");
  if (doc.contains("mnemonics")) {
    for (const auto& [mnemonic, value] : doc["mnemonics"].items()) {
      t.per_mnemonic[mnemonic] = bounds_from_json(value, "mnemonic " + mnemonic);
    }
  }
  if (doc.contains("sites")) {
    for (const auto& [key, value] : doc["sites"].items()) {
      auto id = cfg::InstrId::parse_key(key);
      if (!id) throw Error(ErrorCode::kInvalidArgument, "malformed timing site key '" + key + "'");
      t.per_site[*id] = bounds_from_json(value, "site " + key);
    }
  }
  return t;
}

TimingTable load_timing_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  try {
    return parse_timing_table(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, path.string() + ": " + e.what());
  }
}

cfg::Project augment_timing(cfg::Project project, const TimingTable& table) {
  check_bounds(table.default_bounds, "default");
  for (const auto& [m, b] : table.per_mnemonic) check_bounds(b, "mnemonic " + m);
  for (const auto& [site, b] : table.per_site) {
    check_bounds(b, "site " + site.key());
    const cfg::MethodModel* m = project.find_method(site.method);
    if (m == nullptr || !m->instructions.contains(site.offset)) {
      throw Error(ErrorCode::kInvalidArgument, "timing site " + site.key() + " names no instruction");
    }
  }

  for (cfg::MethodModel* m : project.all_methods()) {
    for (auto& [off, ins] : m->instructions) {
      if (auto site = table.per_site.find({m->id, off}); site != table.per_site.end()) {
        ins.time = site->second;
        continue;
      }
      // Dummies and groups keep what they carry; a dummy without bounds
      // falls back to its original call mnemonic.
      if (ins.kind == InstrKind::kDummy || ins.kind == InstrKind::kGroup) {
        if (ins.time) continue;
        std::string mnemonic = ins.mnemonic;
        if (ins.kind == InstrKind::kDummy && mnemonic.starts_with("dummy_")) mnemonic.erase(0, 6);
        auto it = table.per_mnemonic.find(mnemonic);
        ins.time = ins.kind == InstrKind::kDummy && it != table.per_mnemonic.end()
                       ? it->second
                       : table.default_bounds;
        continue;
      }
      auto it = table.per_mnemonic.find(ins.mnemonic);
      ins.time = it != table.per_mnemonic.end() ? it->second : table.default_bounds;
    }
  }
  return project;
}

}  // namespace bc2ta::analysis
