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
// analyses_test.cpp -- dominators, loops, limits, recursion, timing,
// grouping and instance counts.

#include <algorithm>
#include <functional>
#include <random>

#include "bc2ta/error.hpp"
#include "doctest.h"
#include "test_support.hpp"

namespace bc2ta {
namespace {

using analysis::Digraph;
using cfg::MethodId;

ErrorCode error_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::kIo;
}

void check_against_oracles(const Digraph& g) {
  const auto idom = analysis::immediate_dominators(g);
  REQUIRE(idom == testing::brute_force_idom(g));
  CHECK(analysis::natural_loops(g, idom) == testing::brute_force_loops(g));
}

TEST_CASE("dominators and loops match the path definitions on small digraphs") {
  for (size_t n = 1; n <= 3; ++n) {
    for (uint64_t mask = 0; mask < (uint64_t{1} << (n * n)); ++mask) {
      CAPTURE(n);
      CAPTURE(mask);
      check_against_oracles(testing::graph_from_mask(n, mask));
    }
  }
  std::mt19937 rng(7);
  for (int i = 0; i < 300; ++i) check_against_oracles(testing::random_cfg(rng, 4 + i % 9));
}

TEST_CASE("dominator basics") {
  Digraph g;
  g.succ = {{1, 2}, {3}, {3}, {}};  // diamond
  const auto idom = analysis::immediate_dominators(g);
  CHECK(idom[3] == 0u);
  CHECK(analysis::dominates(idom, 0, 3));
  CHECK_FALSE(analysis::dominates(idom, 1, 3));
  Digraph unreachable;
  unreachable.succ = {{}, {0}};
  CHECK_FALSE(analysis::immediate_dominators(unreachable)[1].has_value());
}

TEST_CASE("irreducible regions") {
  Digraph g;
  g.succ = {{1, 2}, {2}, {1, 3}, {}};
  const auto idom = analysis::immediate_dominators(g);
  CHECK(analysis::natural_loops(g, idom).empty());
  CHECK(analysis::irreducible_regions(g, idom) == std::vector<std::vector<size_t>>{{1, 2}});
  Digraph reducible;
  reducible.succ = {{1}, {2, 3}, {1}, {}};
  CHECK(analysis::irreducible_regions(reducible, analysis::immediate_dominators(reducible)).empty());
}

TEST_CASE("loops on the nested fixture") {
  const auto p = analysis::detect_all_loops(testing::derive_fixture("nested_loops.jbct", "Nested"));
  const auto& m = *p.find_method(p.main_method());
  REQUIRE(m.loops.size() == 2);
  const auto& outer = m.loops[0].members.size() > m.loops[1].members.size() ? m.loops[0] : m.loops[1];
  const auto& inner = &outer == &m.loops[0] ? m.loops[1] : m.loops[0];
  CHECK(std::includes(outer.members.begin(), outer.members.end(), inner.members.begin(), inner.members.end()));
  CHECK(outer.members.contains(inner.head));
  for (const auto* loop : {&outer, &inner}) {
    CHECK(loop->back_edges.size() == 1);
    CHECK(loop->exit_edges.size() == 1);
    for (const auto& [s, t] : loop->exit_edges) {
      CHECK(loop->members.contains(s));
      CHECK_FALSE(loop->members.contains(t));
    }
  }
  for (const auto& e : m.edges) {
    const cfg::EdgeKey k{e.source, e.target};
    if (outer.back_edges.contains(k) || inner.back_edges.contains(k)) CHECK(e.tag == cfg::EdgeTag::kBackEdge);
  }
  CHECK(cfg::compute_stats(p).loop_count == 2);
}

TEST_CASE("loop limits") {
  const auto p = analysis::detect_all_loops(testing::derive_fixture("single_loop.jbct", "Loop"));
  const cfg::InstrId head{p.main_method(), p.find_method(p.main_method())->loops.at(0).head};
  auto limited = analysis::apply_loop_limits(p, {{head, 9}}, 5);
  CHECK(limited.find_method(p.main_method())->loops[0].limit == 9);
  limited = analysis::apply_loop_limits(p, {}, 3);
  CHECK(limited.find_method(p.main_method())->loops[0].limit == 3);

  const cfg::InstrId not_head{p.main_method(), 0};
  CHECK(error_of([&] { analysis::apply_loop_limits(p, {{not_head, 2}}, 5); }) == ErrorCode::kUnknownLoopHead);
  CHECK(error_of([&] { analysis::apply_loop_limits(p, {}, 0); }) == ErrorCode::kInvalidArgument);

  const auto parsed = analysis::parse_loop_limits(nlohmann::json{{head.key(), 4}});
  CHECK(parsed.at(head) == 4);
  CHECK(error_of([] { analysis::parse_loop_limits(nlohmann::json{{"Loop#main()V#4", 0}}); }) ==
        ErrorCode::kInvalidArgument);
  CHECK(error_of([] { analysis::parse_loop_limits(nlohmann::json{{"garbage", 1}}); }) == ErrorCode::kInvalidArgument);
  CHECK(error_of([] { analysis::parse_loop_limits(nlohmann::json::array()); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("direct recursion becomes a dummy call") {
  const auto p = testing::derive_fixture("direct_recursion.jbct", "Rec");
  const auto result = analysis::augment(p, {});
  REQUIRE(result.recursion.direct.size() == 1);
  const MethodId fact = result.recursion.direct[0];
  CHECK(fact.name == "fact");
  bool saw_dummy = false;
  for (const auto& [off, ins] : result.project.find_method(fact)->instructions) {
    if (ins.kind == InstrKind::kDummy) {
      saw_dummy = true;
      CHECK(ins.resolved_targets.empty());
      CHECK(ins.mnemonic.starts_with("dummy_invoke"));
      CHECK(ins.time.has_value());
    }
  }
  CHECK(saw_dummy);
  const auto graph = analysis::build_call_graph(result.project);
  CHECK(analysis::detect_recursion(graph).empty());
  CHECK_NOTHROW(analysis::compute_instance_counts(graph));
}

TEST_CASE("mutual recursion aborts with the cycle named") {
  const auto p = testing::derive_fixture("mutual_recursion.jbct", "Parity");
  try {
    analysis::augment(p, {});
    FAIL("augment should fail");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kIndirectRecursion);
    const std::string what = e.what();
    CHECK(what.find("Parity#isEven") != std::string::npos);
    CHECK(what.find("Parity#isOdd") != std::string::npos);
  }
  analysis::AugmentOptions report;
  report.on_indirect_recursion = analysis::RecursionPolicy::kReport;
  const auto result = analysis::augment(p, report);
  REQUIRE(result.recursion.indirect.size() == 1);
  const auto& cycle = result.recursion.indirect[0];
  CHECK(cycle.front() == cycle.back());
  CHECK(cycle.size() == 3);
  CHECK(error_of([&] { analysis::compute_instance_counts(analysis::build_call_graph(result.project)); }) ==
        ErrorCode::kCyclicCallGraph);
}

TEST_CASE("timing tables") {
  const auto base = analysis::detect_all_loops(testing::derive_fixture("straight_line.jbct", "Line"));
  const auto& main = *base.find_method(base.main_method());
  const cfg::InstrId first{main.id, main.entry};
  const auto table = analysis::parse_timing_table(nlohmann::json{
      {"default", {2, 3}}, {"mnemonics", {{"return", {0, 1}}}}, {"sites", {{first.key(), {7, 9}}}}});
  const auto timed = analysis::augment_timing(base, table);
  for (const auto& [off, ins] : timed.find_method(main.id)->instructions) {
    CAPTURE(off);
    if (off == main.entry) {
      CHECK(ins.time == cfg::TimeBounds{7, 9});
    } else if (ins.mnemonic == "return") {
      CHECK(ins.time == cfg::TimeBounds{0, 1});
    } else {
      CHECK(ins.time == cfg::TimeBounds{2, 3});
    }
  }
  CHECK(error_of([] { analysis::parse_timing_table(nlohmann::json{{"default", {3, 2}}}); }) ==
        ErrorCode::kInvalidBounds);
  CHECK(error_of([] { analysis::parse_timing_table(nlohmann::json{{"default", {-1, 2}}}); }) ==
        ErrorCode::kInvalidBounds);
  CHECK(error_of([] { analysis::parse_timing_table(nlohmann::json{{"other", {1, 2}}}); }) ==
        ErrorCode::kInvalidArgument);
  analysis::TimingTable missing;
  missing.per_site[{main.id, 9999}] = {1, 1};
  CHECK(error_of([&] { analysis::augment_timing(base, missing); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("grouping preserves structure and the longest path") {
  for (const auto& f : testing::translatable_fixtures()) {
    CAPTURE(f.file);
    const auto plain = testing::augment_default(testing::derive_fixture(f.file, f.main_class), false);
    const auto grouped = testing::augment_default(testing::derive_fixture(f.file, f.main_class), true);
    CHECK_NOTHROW(cfg::check_model(grouped));
    CHECK(testing::longest_path_oracle(grouped) == testing::longest_path_oracle(plain));
    const auto before = cfg::compute_stats(plain);
    const auto after = cfg::compute_stats(grouped);
    CHECK(after.instruction_count <= before.instruction_count);
    CHECK(after.resolvable_call_count == before.resolvable_call_count);
    CHECK(after.loop_count == before.loop_count);
    for (const auto* m : grouped.all_methods()) {
      for (const auto& [off, ins] : m->instructions) {
        if (ins.kind != InstrKind::kGroup) continue;
        CHECK(ins.group_members.size() >= 2);
        CHECK(ins.group_members.front() == off);
        CHECK(m->loop_with_head(off) == nullptr);
        // Members were straight-line instructions of the original method.
        int64_t sum = 0;
        for (uint32_t member : ins.group_members) {
          const auto& orig = plain.find_method(m->id)->instructions.at(member);
          CHECK(orig.kind != InstrKind::kInvoke);
          CHECK(orig.kind != InstrKind::kCondBranch);
          CHECK(orig.kind != InstrKind::kSwitch);
          CHECK_FALSE(is_exit_kind(orig.kind));
          sum += orig.time->ub;
        }
        CHECK(ins.time->ub == sum);
      }
    }
    // Grouping twice changes nothing further.
    CHECK(analysis::group_nodes(grouped) == grouped);
  }
}

TEST_CASE("grouping keeps the longest path on synthetic programs") {
  for (uint32_t seed : {1u, 2u, 3u}) {
    const std::string ir = testing::synthetic_ir(1500, seed);
    const auto plain = testing::augment_default(testing::derive_ir_text(ir, "Synth"), false, 4);
    const auto grouped = testing::augment_default(testing::derive_ir_text(ir, "Synth"), true, 4);
    CHECK(testing::longest_path_oracle(grouped) == testing::longest_path_oracle(plain));
    CHECK(cfg::compute_stats(grouped).instruction_count < cfg::compute_stats(plain).instruction_count);
  }
}

// --- instance counts -------------------------------------------------------

// Maximum number of activations of each class on any call stack, found by
// enumerating every call path.
std::map<std::string, int64_t> stack_depth_oracle(const analysis::CallGraph& g) {
  std::map<MethodId, std::vector<MethodId>> adj;
  for (const auto& e : g.edges) adj[e.caller].push_back(e.callee);
  std::map<std::string, int64_t> best;
  std::map<std::string, int64_t> current;
  std::function<void(const MethodId&)> walk = [&](const MethodId& m) {
    ++current[m.cls];
    for (const auto& [cls, n] : current) best[cls] = std::max(best[cls], n);
    for (const auto& callee : adj[m]) walk(callee);
    --current[m.cls];
  };
  walk(g.entry);
  return best;
}

TEST_CASE("instance counts match call-stack enumeration on random acyclic graphs") {
  std::mt19937 rng(99);
  for (int round = 0; round < 200; ++round) {
    analysis::CallGraph g;
    const int n = 2 + static_cast<int>(rng() % 8);
    std::vector<MethodId> methods;
    for (int i = 0; i < n; ++i) methods.push_back({"C" + std::to_string(rng() % 3), "m" + std::to_string(i), "()V"});
    g.entry = methods[0];
    g.nodes.insert(methods.begin(), methods.end());
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (rng() % 3 == 0) g.edges.push_back({methods[i], static_cast<uint32_t>(j), methods[j]});
      }
    }
    auto expected = stack_depth_oracle(g);
    auto actual = analysis::compute_instance_counts(g);
    // Classes only reachable off the call stacks still get one instance.
    for (const auto& [cls, k] : actual) {
      if (!expected.contains(cls)) CHECK(k == 1);
    }
    for (const auto& [cls, k] : expected) CHECK(actual[cls] == k);
  }
}

TEST_CASE("instance counts on fixtures") {
  const auto p = testing::augment_default(testing::derive_fixture("main_math.jbct", "Main"));
  const auto counts = analysis::compute_instance_counts(analysis::build_call_graph(p));
  CHECK(counts.at("Main") == 1);
  CHECK(counts.at("Math") == 1);
}

}  // namespace
}  // namespace bc2ta
