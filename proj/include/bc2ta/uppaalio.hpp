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
// uppaalio.hpp -- UPPAAL XML (Flat System 1.2) and query-file I/O.

#ifndef BC2TA_UPPAALIO_HPP_
#define BC2TA_UPPAALIO_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "bc2ta/tamodel.hpp"

namespace bc2ta::uppaal {

inline constexpr const char* kDtdPublicId = "-//Uppaal Team//DTD Flat System 1.2//EN";
inline constexpr const char* kDtdSystemId =
    "http://www.it.uu.se/research/group/darts/uppaal/flat-1_2.dtd";

// Deterministic: equal systems give byte-identical text. Queries are not
// embedded; they go to the sibling .q file.
std::string emit_xml(const ta::TaSystem& system);

std::string emit_queries(const std::vector<ta::Query>& queries);

// Reads files in the subset emit_xml writes. The result carries no queries.
ta::TaSystem parse_xml(std::string_view text);

}  // namespace bc2ta::uppaal

#endif  // BC2TA_UPPAALIO_HPP_
