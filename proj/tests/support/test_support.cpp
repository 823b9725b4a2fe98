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
// test_support.cpp -- fixture helpers, graph and timing oracles, and
// program generators for the tests.

#include "test_support.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

#include "bc2ta/frontend.hpp"

#ifndef BC2TA_FIXTURE_DIR
#error "BC2TA_FIXTURE_DIR must point at the fixtures directory"
#endif

namespace bc2ta::testing {

std::filesystem::path fixture_path(const std::string& name) {
  return std::filesystem::path(BC2TA_FIXTURE_DIR) / name;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TempDir::TempDir() {
  static std::mt19937_64 rng{std::random_device{}()};
  for (;;) {
    path_ = std::filesystem::temp_directory_path() / ("bc2ta-test-" + std::to_string(rng()));
    if (std::filesystem::create_directory(path_)) return;
  }
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

const std::vector<FixtureSpec>& translatable_fixtures() {
  static const std::vector<FixtureSpec> kFixtures{
      {"main_math.jbct", "Main"},       {"straight_line.jbct", "Line"},
      {"branch.jbct", "Branch"},        {"single_loop.jbct", "Loop"},
      {"nested_loops.jbct", "Nested"},  {"direct_recursion.jbct", "Rec"},
      {"polymorphic.jbct", "Poly"},
  };
  return kFixtures;
}

cfg::Project derive_fixture(const std::string& file, const std::string& main_class) {
  const auto loaded = frontend::load_project({fixture_path(file)}, main_class, {});
  return cfg::build_project(loaded.classes, loaded.external_stubs, main_class);
}

cfg::Project derive_ir_text(const std::string& text, const std::string& main_class) {
  TempDir dir;
  const auto file = dir / "input.jbct";
  std::ofstream(file) << text;
  const auto loaded = frontend::load_project({file}, main_class, {});
  return cfg::build_project(loaded.classes, loaded.external_stubs, main_class);
}

cfg::Project augment_default(cfg::Project project, bool group, int64_t loop_limit) {
  analysis::AugmentOptions opts;
  opts.default_loop_limit = loop_limit;
  opts.group = group;
  return analysis::augment(std::move(project), opts).project;
}

ta::TaSystem system_for(const std::string& file, const std::string& main_class, bool group) {
  return ta::transform(augment_default(derive_fixture(file, main_class), group));
}

// --- class files ------------------------------------------------------------

ClassFileWriter::ClassFileWriter(std::string name, std::optional<std::string> super_name, uint16_t major)
    : name_(std::move(name)), super_name_(std::move(super_name)), major_(major) {}

uint16_t ClassFileWriter::add_constant(std::vector<uint8_t> encoded, int slots) {
  for (size_t i = 0; i < constants_.size(); ++i) {
    if (constants_[i] == encoded) {
      // Recompute the index of an identical earlier constant.
      uint16_t index = 1;
      for (size_t k = 0; k < i; ++k) index += (constants_[k][0] == 5 || constants_[k][0] == 6) ? 2 : 1;
      return index;
    }
  }
  const uint16_t index = next_index_;
  constants_.push_back(std::move(encoded));
  next_index_ += static_cast<uint16_t>(slots);
  return index;
}

uint16_t ClassFileWriter::utf8(const std::string& text) {
  Bytes b;
  b.u1(1);
  b.u2(static_cast<uint32_t>(text.size()));
  b.data.insert(b.data.end(), text.begin(), text.end());
  return add_constant(b.data);
}

uint16_t ClassFileWriter::class_ref(const std::string& name) {
  const uint16_t n = utf8(name);
  Bytes b;
  b.u1(7);
  b.u2(n);
  return add_constant(b.data);
}

uint16_t ClassFileWriter::method_ref(const std::string& owner, const std::string& name,
                                     const std::string& descriptor, bool interface_method) {
  const uint16_t c = class_ref(owner);
  const uint16_t n = utf8(name);
  const uint16_t d = utf8(descriptor);
  Bytes nat;
  nat.u1(12);
  nat.u2(n);
  nat.u2(d);
  const uint16_t nt = add_constant(nat.data);
  Bytes b;
  b.u1(interface_method ? 11 : 10);
  b.u2(c);
  b.u2(nt);
  return add_constant(b.data);
}

uint16_t ClassFileWriter::field_ref(const std::string& owner, const std::string& name, const std::string& descriptor) {
  const uint16_t c = class_ref(owner);
  Bytes nat;
  nat.u1(12);
  nat.u2(utf8(name));
  nat.u2(utf8(descriptor));
  const uint16_t nt = add_constant(nat.data);
  Bytes b;
  b.u1(9);
  b.u2(c);
  b.u2(nt);
  return add_constant(b.data);
}

uint16_t ClassFileWriter::integer(int32_t v) {
  Bytes b;
  b.u1(3);
  b.u4(static_cast<uint32_t>(v));
  return add_constant(b.data);
}

uint16_t ClassFileWriter::long_constant(int64_t v) {
  Bytes b;
  b.u1(5);
  b.u4(static_cast<uint32_t>(static_cast<uint64_t>(v) >> 32));
  b.u4(static_cast<uint32_t>(v));
  return add_constant(b.data, 2);
}

void ClassFileWriter::add_interface(const std::string& name) { interfaces_.push_back(class_ref(name)); }

void ClassFileWriter::add_field(const std::string& name, const std::string& descriptor) {
  Bytes f;
  f.u2(0x0002);
  f.u2(utf8(name));
  f.u2(utf8(descriptor));
  f.u2(1);  // one ConstantValue-like attribute the parser has to skip
  f.u2(utf8("Synthetic"));
  f.u4(0);
  fields_.push_back(f.data);
}

void ClassFileWriter::add_method(uint16_t flags, const std::string& name, const std::string& descriptor,
                                 std::optional<std::vector<uint8_t>> code,
                                 const std::vector<std::pair<uint16_t, uint16_t>>& lines) {
  Bytes m;
  m.u2(flags);
  m.u2(utf8(name));
  m.u2(utf8(descriptor));
  if (!code) {
    m.u2(0);
    methods_.push_back(m.data);
    return;
  }
  Bytes attr;
  attr.u2(8);   // max_stack
  attr.u2(8);   // max_locals
  attr.u4(static_cast<uint32_t>(code->size()));
  attr.append(*code);
  attr.u2(0);  // exception table
  if (lines.empty()) {
    attr.u2(0);
  } else {
    attr.u2(1);
    attr.u2(utf8("LineNumberTable"));
    attr.u4(static_cast<uint32_t>(2 + 4 * lines.size()));
    attr.u2(static_cast<uint32_t>(lines.size()));
    for (const auto& [pc, line] : lines) {
      attr.u2(pc);
      attr.u2(line);
    }
  }
  m.u2(1);
  m.u2(utf8("Code"));
  m.u4(static_cast<uint32_t>(attr.size()));
  m.append(attr.data);
  methods_.push_back(m.data);
}

std::vector<uint8_t> ClassFileWriter::bytes() const {
  // Indices for this/super must exist before the pool is written.
  auto* self = const_cast<ClassFileWriter*>(this);
  const uint16_t this_index = self->class_ref(name_);
  const uint16_t super_index = super_name_ ? self->class_ref(*super_name_) : 0;
  Bytes out;
  out.u4(magic_);
  out.u2(0);
  out.u2(major_);
  out.u2(next_index_);
  for (const auto& c : constants_) out.append(c);
  out.u2(flags_);
  out.u2(this_index);
  out.u2(super_index);
  out.u2(static_cast<uint32_t>(interfaces_.size()));
  for (uint16_t i : interfaces_) out.u2(i);
  out.u2(static_cast<uint32_t>(fields_.size()));
  for (const auto& f : fields_) out.append(f);
  out.u2(static_cast<uint32_t>(methods_.size()));
  for (const auto& m : methods_) out.append(m);
  out.u2(0);  // class attributes
  return out.data;
}

// --- graph oracles ----------------------------------------------------------

namespace {

std::vector<bool> reachable_without(const analysis::Digraph& g, std::optional<size_t> removed) {
  std::vector<bool> seen(g.size(), false);
  if (removed == g.root) return seen;
  std::vector<size_t> stack{g.root};
  seen[g.root] = true;
  while (!stack.empty()) {
    const size_t u = stack.back();
    stack.pop_back();
    for (size_t v : g.succ[u]) {
      if (v == removed || seen[v]) continue;
      seen[v] = true;
      stack.push_back(v);
    }
  }
  return seen;
}

}  // namespace

std::vector<std::optional<size_t>> brute_force_idom(const analysis::Digraph& g) {
  const size_t n = g.size();
  const auto reach = reachable_without(g, std::nullopt);
  // dom[d][v]: d dominates v.
  std::vector<std::vector<bool>> dom(n, std::vector<bool>(n, false));
  for (size_t d = 0; d < n; ++d) {
    if (!reach[d]) continue;
    const auto without = reachable_without(g, d);
    for (size_t v = 0; v < n; ++v) dom[d][v] = reach[v] && (v == d || !without[v]);
  }
  std::vector<std::optional<size_t>> idom(n);
  for (size_t v = 0; v < n; ++v) {
    if (!reach[v]) continue;
    if (v == g.root) {
      idom[v] = v;
      continue;
    }
    // The strict dominator that every other strict dominator dominates.
    for (size_t d = 0; d < n; ++d) {
      if (d == v || !dom[d][v]) continue;
      bool closest = true;
      for (size_t e = 0; e < n; ++e) {
        if (e != v && e != d && dom[e][v] && !dom[e][d]) closest = false;
      }
      if (closest) idom[v] = d;
    }
  }
  return idom;
}

std::vector<analysis::NaturalLoop> brute_force_loops(const analysis::Digraph& g) {
  const size_t n = g.size();
  const auto reach = reachable_without(g, std::nullopt);
  std::map<size_t, analysis::NaturalLoop> by_head;
  for (size_t u = 0; u < n; ++u) {
    if (!reach[u]) continue;
    for (size_t h : g.succ[u]) {
      // h dominates u?
      const bool dominated = (h == u) || !reachable_without(g, h)[u];
      if (!dominated) continue;
      auto& loop = by_head[h];
      loop.head = h;
      loop.back_edges.insert({u, h});
      loop.members.insert(h);
      // Nodes from which u is reachable without passing h.
      for (size_t m = 0; m < n; ++m) {
        if (!reach[m] || m == h) continue;
        std::vector<bool> seen(n, false);
        std::vector<size_t> stack{m};
        seen[m] = true;
        bool hits = false;
        while (!stack.empty() && !hits) {
          const size_t x = stack.back();
          stack.pop_back();
          if (x == u) hits = true;
          for (size_t y : g.succ[x]) {
            if (y != h && !seen[y]) {
              seen[y] = true;
              stack.push_back(y);
            }
          }
        }
        if (hits) loop.members.insert(m);
      }
    }
  }
  std::vector<analysis::NaturalLoop> out;
  for (auto& [h, loop] : by_head) out.push_back(std::move(loop));
  return out;
}

analysis::Digraph graph_from_mask(size_t n, uint64_t mask) {
  analysis::Digraph g;
  g.succ.resize(n);
  for (size_t u = 0; u < n; ++u) {
    for (size_t v = 0; v < n; ++v) {
      if (mask >> (u * n + v) & 1) g.succ[u].push_back(v);
    }
  }
  return g;
}

analysis::Digraph random_cfg(std::mt19937& rng, size_t n) {
  analysis::Digraph g;
  g.succ.resize(n);
  std::uniform_int_distribution<size_t> pick(0, n - 1);
  std::uniform_int_distribution<int> coin(0, 99);
  // A spine keeps most nodes reachable; extra edges add joins, branches and
  // both forward and backward jumps.
  for (size_t u = 0; u + 1 < n; ++u) {
    if (coin(rng) < 85) g.succ[u].push_back(u + 1);
  }
  for (size_t u = 0; u < n; ++u) {
    const int extra = coin(rng) < 50 ? 1 : (coin(rng) < 30 ? 2 : 0);
    for (int k = 0; k < extra; ++k) {
      const size_t v = pick(rng);
      if (std::find(g.succ[u].begin(), g.succ[u].end(), v) == g.succ[u].end()) g.succ[u].push_back(v);
    }
  }
  return g;
}

// --- longest path -----------------------------------------------------------

namespace {

struct PathOracle {
  const cfg::Project& project;
  std::map<cfg::MethodId, int64_t> memo;

  int64_t method(const cfg::MethodId& id) {
    if (auto it = memo.find(id); it != memo.end()) return it->second;
    const cfg::MethodModel& m = *project.find_method(id);
    std::map<std::pair<uint32_t, std::vector<int64_t>>, int64_t> best;
    const int64_t kDead = INT64_MIN / 4;

    // Innermost loop each source leaves.
    std::map<uint32_t, size_t> decider;
    for (size_t l = 0; l < m.loops.size(); ++l) {
      for (const auto& [s, t] : m.loops[l].exit_edges) {
        auto it = decider.find(s);
        if (it == decider.end() || m.loops[l].members.size() < m.loops[it->second].members.size()) decider[s] = l;
      }
    }

    std::function<int64_t(uint32_t, const std::vector<int64_t>&)> walk =
        [&](uint32_t at, const std::vector<int64_t>& counters) -> int64_t {
      const auto key = std::make_pair(at, counters);
      if (auto it = best.find(key); it != best.end()) return it->second;
      const cfg::Instruction& ins = m.instructions.at(at);
      int64_t cost = ins.time ? ins.time->ub : 0;
      if (ins.kind == InstrKind::kInvoke && !ins.resolved_targets.empty()) {
        int64_t worst = 0;
        for (const auto& t : ins.resolved_targets) worst = std::max(worst, method(t));
        cost += worst;
      }
      int64_t tail = kDead;
      if (m.exits.contains(at)) tail = 0;
      for (const auto& e : m.edges) {
        if (e.source != at) continue;
        const cfg::EdgeKey k{e.source, e.target};
        std::vector<int64_t> next = counters;
        bool enabled = true;
        for (size_t l = 0; l < m.loops.size(); ++l) {
          const auto& loop = m.loops[l];
          const int64_t limit = loop.limit.value_or(0);
          const bool back = loop.back_edges.contains(k);
          auto d = decider.find(at);
          if (d != decider.end() && d->second == l) {
            if (loop.exit_edges.contains(k)) {
              enabled &= counters[l] == limit;
            } else if (loop.members.contains(e.target)) {
              enabled &= counters[l] < limit;
            }
          } else if (back) {
            enabled &= counters[l] < limit;
          }
          if (back) ++next[l];
          if (loop.exit_edges.contains(k)) next[l] = 0;
        }
        if (enabled) tail = std::max(tail, walk(e.target, next));
      }
      const int64_t total = tail == kDead ? kDead : cost + tail;
      best[key] = total;
      return total;
    };
    const int64_t result = walk(m.entry, std::vector<int64_t>(m.loops.size(), 0));
    memo[id] = result;
    return result;
  }
};

}  // namespace

int64_t longest_path_oracle(const cfg::Project& project) {
  PathOracle oracle{project, {}};
  return oracle.method(project.main_method());
}

// --- synthetic programs -----------------------------------------------------

std::string synthetic_ir(size_t min_instructions, uint32_t seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> choice(0, 9);
  constexpr int kMethodsPerClass = 20;
  const size_t per_method = 110;
  const size_t methods_needed = (min_instructions + per_method - 1) / per_method + 1;
  const int classes = static_cast<int>((methods_needed + kMethodsPerClass - 1) / kMethodsPerClass);

  std::ostringstream out;
  size_t total = 0;
  auto cls_name = [](int c) { return "C" + std::to_string(c); };

  out << "class Synth {\n  method main([Ljava/lang/String;)V static {\n";
  uint32_t pc = 0;
  for (int k = 0; k < kMethodsPerClass; ++k) {
    out << "    " << pc << ": iconst_1 @line " << (k + 3) << "\n";
    out << "    " << pc + 1 << ": invokestatic " << cls_name(0) << ".m" << k << "(I)V\n";
    pc += 4;
    total += 2;
  }
  out << "    " << pc << ": return\n  }\n}\n";
  ++total;

  for (int c = 0; c < classes; ++c) {
    out << "\nclass " << cls_name(c) << " {\n";
    for (int k = 0; k < kMethodsPerClass; ++k) {
      out << "  method m" << k << "(I)V static {\n";
      pc = 0;
      uint32_t line = 10;
      size_t count = 0;
      auto emit = [&](const std::string& text, uint32_t size) {
        out << "    " << pc << ": " << text;
        if (count % 4 == 0) out << " @line " << line++;
        out << "\n";
        pc += size;
        ++count;
      };
      while (count + 1 < per_method) {
        switch (choice(rng)) {
          case 0:
          case 1: {  // diamond: if (x > 0) a else b
            const uint32_t start = pc;
            const uint32_t else_at = start + 3 + 2 + 3;
            const uint32_t join = else_at + 2;
            emit("iload_0", 1);
            emit("ifle " + std::to_string(else_at + 1), 3);
            emit("iconst_1", 1);
            emit("istore_1", 1);
            emit("goto " + std::to_string(join + 1), 3);
            emit("iconst_2", 1);
            emit("istore_1", 1);
            break;
          }
          case 2: {  // for (i = 0; i < 4; i++) acc += i
            emit("iconst_0", 1);
            emit("istore_2", 1);
            const uint32_t head = pc;
            const uint32_t exit = head + 1 + 1 + 3 + 1 + 1 + 1 + 1 + 3 + 3;
            emit("iload_2", 1);
            emit("iconst_4", 1);
            emit("if_icmpge " + std::to_string(exit), 3);
            emit("iload_1", 1);
            emit("iload_2", 1);
            emit("iadd", 1);
            emit("istore_1", 1);
            emit("iinc 2 1", 3);
            emit("goto " + std::to_string(head), 3);
            break;
          }
          case 3: {  // call into the next layer
            if (c + 1 < classes) {
              emit("iload_0", 1);
              emit("invokestatic " + cls_name(c + 1) + ".m" + std::to_string((k + choice(rng)) % kMethodsPerClass) +
                       "(I)V",
                   3);
            } else {
              emit("iload_0", 1);
              emit("invokestatic java/lang/Math.abs(I)I", 3);
              emit("pop", 1);
            }
            break;
          }
          default:
            emit("iload_0", 1);
            emit("iconst_3", 1);
            emit("imul", 1);
            emit("istore_1", 1);
            break;
        }
      }
      emit("return", 1);
      total += count;
      out << "  }\n";
    }
    out << "}\n";
  }
  if (total < min_instructions) throw std::logic_error("synthetic generator fell short");
  return out.str();
}

}  // namespace bc2ta::testing
