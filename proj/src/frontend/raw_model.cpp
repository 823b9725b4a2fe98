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
// raw_model.cpp -- descriptor parsing and queries over decoded classes.

#include <set>
#include <string>

#include "bc2ta/error.hpp"
#include "bc2ta/frontend.hpp"

namespace bc2ta::frontend {
namespace {

// Consumes one field type starting at pos; returns false if malformed.
bool field_type(std::string_view d, size_t& pos) {
  while (pos < d.size() && d[pos] == '[') ++pos;
  if (pos >= d.size()) return false;
  switch (d[pos]) {
    case 'B': case 'C': case 'D': case 'F': case 'I': case 'J': case 'S': case 'Z':
      ++pos;
      return true;
    case 'L': {
      size_t end = d.find(';', pos);
      if (end == std::string_view::npos || end == pos + 1) return false;
      pos = end + 1;
      return true;
    }
    default:
      return false;
  }
}

}  // namespace

bool is_valid_method_descriptor(std::string_view d) {
  if (d.empty() || d[0] != '(') return false;
  size_t pos = 1;
  while (pos < d.size() && d[pos] != ')') {
    if (!field_type(d, pos)) return false;
  }
  if (pos >= d.size()) return false;
  ++pos;
  if (pos < d.size() && d[pos] == 'V') return pos + 1 == d.size();
  return field_type(d, pos) && pos == d.size();
}

void check_method_invariants(const RawClass& owner, const RawMethod& method) {
  const std::string where = owner.name + "." + method.name + method.descriptor;
  if (method.is_abstract && !method.instructions.empty()) {
    throw Error(ErrorCode::kInconsistentModel, "abstract method " + where + " has code");
  }
  std::set<uint32_t> offsets;
  uint32_t prev = 0;
  bool first = true;
  for (const auto& ins : method.instructions) {
    if (!first && ins.offset <= prev) {
      throw Error(ErrorCode::kDuplicateOffset,
                  where + ": offset " + std::to_string(ins.offset) + " is not increasing");
    }
    first = false;
    prev = ins.offset;
    offsets.insert(ins.offset);
  }
  for (const auto& ins : method.instructions) {
    for (uint32_t t : ins.branch_targets) {
      if (!offsets.contains(t)) {
        throw Error(ErrorCode::kDanglingBranchTarget,
                    where + ": branch at " + std::to_string(ins.offset) +
                        " targets missing offset " + std::to_string(t));
      }
    }
  }
}

}  // namespace bc2ta::frontend
