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
// frontend.hpp -- class-file and textual-IR readers producing raw per-method
// instruction lists.

#ifndef BC2TA_FRONTEND_HPP_
#define BC2TA_FRONTEND_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bc2ta {

// Control-flow role of an instruction. kDummy and kGroup only appear after
// model enrichment.
enum class InstrKind {
  kSequential,
  kCondBranch,
  kGoto,
  kSwitch,
  kInvoke,
  kReturn,
  kThrow,
  kTerminal,
  kDummy,
  kGroup,
};

enum class Dispatch { kStatic, kVirtual, kSpecial, kInterface };

std::string_view to_string(InstrKind kind);
std::optional<InstrKind> instr_kind_from_string(std::string_view text);
std::string_view to_string(Dispatch dispatch);
std::optional<Dispatch> dispatch_from_string(std::string_view text);

// True for kinds that end a method body (no intra-method successors).
inline bool is_exit_kind(InstrKind kind) {
  return kind == InstrKind::kReturn || kind == InstrKind::kThrow ||
         kind == InstrKind::kTerminal;
}

struct InvokeRef {
  std::string owner;
  std::string name;
  std::string descriptor;
  Dispatch dispatch = Dispatch::kStatic;

  bool operator==(const InvokeRef&) const = default;
};

namespace frontend {

struct RawInstruction {
  uint32_t offset = 0;
  std::string mnemonic;
  InstrKind kind = InstrKind::kSequential;
  // Conditional branches list only the taken target; the fall-through is
  // implied. Switches list the default first, then the distinct case
  // targets in table order.
  std::vector<uint32_t> branch_targets;
  std::optional<InvokeRef> invoke_ref;
  uint32_t line = 0;

  bool operator==(const RawInstruction&) const = default;
};

struct RawMethod {
  std::string name;
  std::string descriptor;
  bool is_static = false;
  bool is_abstract = false;
  std::vector<RawInstruction> instructions;
  std::map<uint32_t, uint32_t> line_table;

  bool operator==(const RawMethod&) const = default;
};

struct RawClass {
  std::string name;
  std::optional<std::string> super_name;
  std::vector<std::string> interfaces;
  std::vector<RawMethod> methods;
  bool is_interface = false;

  bool operator==(const RawClass&) const = default;
};

// Static description of one JVM opcode.
struct OpcodeInfo {
  uint8_t code = 0;
  std::string_view mnemonic;
  InstrKind kind = InstrKind::kSequential;
  bool supported = false;
};

// Every opcode from 0x00 to 0xc9; unsupported ones (jsr, ret, invokedynamic,
// jsr_w) are present with supported = false.
std::span<const OpcodeInfo> opcode_table();
const OpcodeInfo* find_opcode(std::string_view mnemonic);

inline constexpr uint16_t kMaxClassFileMajorVersion = 61;

RawClass parse_class_file(std::span<const uint8_t> data);

std::vector<RawClass> parse_text_ir(std::string_view text);

// Pretty-prints classes in the textual IR; parse_text_ir inverts it.
std::string render_text_ir(std::span<const RawClass> classes);

// Structural checks every parsed method satisfies: strictly increasing
// offsets, branch targets resolve, abstract methods have no code.
void check_method_invariants(const RawClass& owner, const RawMethod& method);

bool is_valid_method_descriptor(std::string_view descriptor);

struct LoadedClasses {
  std::vector<RawClass> classes;  // sorted by name
  std::set<std::string> external_stubs;
};

// Resolves main_class and everything it transitively references (invoke
// owners, super classes, interfaces) from the given roots. Roots may be
// directories (searched for <name>.class and *.jbct files), jar/zip
// archives, single .class files or single .jbct files. Classes outside the
// include filter, and platform classes that are not on the roots, become
// external stubs.
LoadedClasses load_project(const std::vector<std::filesystem::path>& roots,
                           const std::string& main_class,
                           const std::vector<std::string>& include_filter);

}  // namespace frontend
}  // namespace bc2ta

#endif  // BC2TA_FRONTEND_HPP_
