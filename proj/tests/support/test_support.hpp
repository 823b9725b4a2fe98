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
// test_support.hpp -- fixtures, reference oracles and generators shared by
// the unit tests and the acceptance suite.

#ifndef BC2TA_TESTS_TEST_SUPPORT_HPP_
#define BC2TA_TESTS_TEST_SUPPORT_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "bc2ta/analyses.hpp"
#include "bc2ta/cfgmodel.hpp"
#include "bc2ta/tamodel.hpp"

namespace bc2ta::testing {

std::filesystem::path fixture_path(const std::string& name);
std::string read_text(const std::filesystem::path& path);

// A scratch directory removed when the object dies.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

struct FixtureSpec {
  const char* file;
  const char* main_class;
};

// The fixtures whose pipeline completes (mutual recursion is excluded).
const std::vector<FixtureSpec>& translatable_fixtures();

cfg::Project derive_fixture(const std::string& file, const std::string& main_class);
cfg::Project derive_ir_text(const std::string& text, const std::string& main_class);
cfg::Project augment_default(cfg::Project project, bool group = false, int64_t loop_limit = 5);
ta::TaSystem system_for(const std::string& file, const std::string& main_class, bool group = false);

// Little-endian-free byte assembly for hand-made class files.
struct Bytes {
  std::vector<uint8_t> data;
  void u1(uint32_t v) { data.push_back(static_cast<uint8_t>(v)); }
  void u2(uint32_t v) {
    u1(v >> 8);
    u1(v);
  }
  void u4(uint32_t v) {
    u2(v >> 16);
    u2(v);
  }
  void append(const std::vector<uint8_t>& more) { data.insert(data.end(), more.begin(), more.end()); }
  size_t size() const { return data.size(); }
};

// Writes version-52-style class files from scratch, independent of the
// parser under test.
class ClassFileWriter {
 public:
  static constexpr uint16_t kPublic = 0x0001;
  static constexpr uint16_t kStatic = 0x0008;
  static constexpr uint16_t kInterface = 0x0200;
  static constexpr uint16_t kAbstract = 0x0400;

  ClassFileWriter(std::string name, std::optional<std::string> super_name, uint16_t major = 52);

  void set_flags(uint16_t flags) { flags_ = flags; }
  void set_magic(uint32_t magic) { magic_ = magic; }
  void add_interface(const std::string& name);

  uint16_t utf8(const std::string& text);
  uint16_t class_ref(const std::string& name);
  uint16_t method_ref(const std::string& owner, const std::string& name, const std::string& descriptor,
                      bool interface_method = false);
  uint16_t field_ref(const std::string& owner, const std::string& name, const std::string& descriptor);
  uint16_t integer(int32_t v);
  uint16_t long_constant(int64_t v);

  // `lines` holds (start_pc, line) pairs; an abstract method passes no code.
  void add_method(uint16_t flags, const std::string& name, const std::string& descriptor,
                  std::optional<std::vector<uint8_t>> code,
                  const std::vector<std::pair<uint16_t, uint16_t>>& lines = {});
  void add_field(const std::string& name, const std::string& descriptor);

  std::vector<uint8_t> bytes() const;

 private:
  uint16_t add_constant(std::vector<uint8_t> encoded, int slots = 1);

  std::string name_;
  std::optional<std::string> super_name_;
  uint16_t major_;
  uint16_t flags_ = kPublic;
  uint32_t magic_ = 0xCAFEBABE;
  std::vector<std::vector<uint8_t>> constants_;
  uint16_t next_index_ = 1;
  std::vector<uint16_t> interfaces_;
  std::vector<std::vector<uint8_t>> fields_;
  std::vector<std::vector<uint8_t>> methods_;
};

// --- graph oracles --------------------------------------------------------

// d dominates n iff n is unreachable from the root once d is removed.
std::vector<std::optional<size_t>> brute_force_idom(const analysis::Digraph& g);
// Loops from the textbook definition: for each back edge (n, h) with h
// dominating n, h plus every node that reaches n without passing h. Loops
// sharing a head are merged.
std::vector<analysis::NaturalLoop> brute_force_loops(const analysis::Digraph& g);

// All rooted digraphs on n nodes (root 0), enumerated by adjacency bitmask.
analysis::Digraph graph_from_mask(size_t n, uint64_t mask);
analysis::Digraph random_cfg(std::mt19937& rng, size_t n);

// Longest entry-to-exit execution time of the main method, with loop bodies
// taken exactly `limit` times, computed over the enriched control-flow model.
int64_t longest_path_oracle(const cfg::Project& project);

// Text IR of an acyclic-call-graph program with at least `min_instructions`
// instructions. The main class is "Synth".
std::string synthetic_ir(size_t min_instructions, uint32_t seed);

}  // namespace bc2ta::testing

#endif  // BC2TA_TESTS_TEST_SUPPORT_HPP_
