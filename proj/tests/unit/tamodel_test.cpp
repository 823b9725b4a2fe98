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
// tamodel_test.cpp -- expressions, the translation to timed automata,
// validation and system persistence.

#include <algorithm>
#include <functional>
#include <regex>

#include "bc2ta/error.hpp"
#include "bc2ta/expr.hpp"
#include "doctest.h"
#include "test_support.hpp"

namespace bc2ta {
namespace {

using ta::ExprOp;

ErrorCode error_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::kIo;
}

std::map<std::string, int64_t> constants_of(const std::string& decls, std::map<std::string, int64_t> base = {}) {
  for (const auto& d : ta::parse_declarations(decls)) {
    if (d.kind == ta::DeclKind::kConstInt) base[d.name] = ta::evaluate_constant(*d.init, base);
  }
  return base;
}

const ta::TaEdge* edge_between(const ta::Template& t, const std::string& from, const std::string& to) {
  for (const auto& e : t.edges) {
    if (e.source == from && e.target == to) return &e;
  }
  return nullptr;
}

// Location whose name encodes bytecode offset `off`.
const ta::Location* location_at(const ta::Template& t, uint32_t off, const std::string& suffix = "") {
  const std::regex name("l_\\d+_" + std::to_string(off) + suffix);
  for (const auto& l : t.locations) {
    if (std::regex_match(l.name, name)) return &l;
  }
  return nullptr;
}

bool has(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

TEST_CASE("expression parsing and precedence") {
  auto e = ta::parse_expression("a + b * 2 <= c && !d || e imply f");
  CHECK(e->op == ExprOp::kImply);
  CHECK(e->args[0]->op == ExprOp::kOr);
  CHECK(e->args[0]->args[0]->op == ExprOp::kAnd);
  CHECK(e->args[0]->args[0]->args[0]->op == ExprOp::kLe);
  CHECK(e->args[0]->args[0]->args[0]->args[0]->op == ExprOp::kAdd);
  e = ta::parse_expression("Math(1).l_3_4 and not deadlock");
  CHECK(e->op == ExprOp::kAnd);
  CHECK(e->args[0]->op == ExprOp::kLocation);
  CHECK(e->args[0]->name == "Math");
  CHECK(e->args[0]->member == "l_3_4");
  CHECK(e->args[1]->op == ExprOp::kNot);
  CHECK(e->args[1]->args[0]->op == ExprOp::kDeadlock);
  e = ta::parse_expression("forall (i : T) exists (j : T) i == j");
  CHECK(e->op == ExprOp::kForall);
  CHECK(e->member == "T");
  for (const char* bad : {"a +", "(a", "a $ b", "1 2", "x[1]", ""}) {
    CAPTURE(bad);
    CHECK(error_of([&] { ta::parse_expression(bad); }) == ErrorCode::kUnsupportedConstruct);
  }
}

TEST_CASE("assignments, syncs and declarations") {
  const auto a = ta::parse_assignment("lc_x = lc_x + 1");
  CHECK(a.target == "lc_x");
  CHECK(a.value->op == ExprOp::kAdd);
  CHECK(ta::parse_sync("go!").send);
  CHECK_FALSE(ta::parse_sync("go?").send);
  CHECK(ta::parse_sync(" go ? ").channel == "go");
  CHECK(error_of([] { ta::parse_sync("go"); }) == ErrorCode::kUnsupportedConstruct);
  CHECK(ta::split_top_level("a = f(1, 2), b = 3") == std::vector<std::string>{"a = f(1, 2)", "b = 3"});

  const auto decls = ta::parse_declarations(
      "clock x, y; chan c; const int K = 2 + 3; int[0,K] n = 1; bool flag; typedef scalar[3] T;");
  REQUIRE(decls.size() == 7);
  CHECK(decls[0].kind == ta::DeclKind::kClock);
  CHECK(decls[1].name == "y");
  CHECK(decls[2].kind == ta::DeclKind::kChannel);
  CHECK(decls[3].kind == ta::DeclKind::kConstInt);
  CHECK(ta::evaluate_constant(*decls[3].init, {}) == 5);
  CHECK(decls[4].kind == ta::DeclKind::kInt);
  CHECK(ta::evaluate_constant(*decls[4].upper, {{"K", 5}}) == 5);
  CHECK(decls[5].kind == ta::DeclKind::kBool);
  CHECK(decls[6].kind == ta::DeclKind::kScalarType);
  CHECK(error_of([] { ta::evaluate_constant(*ta::parse_expression("x + 1"), {}); }) ==
        ErrorCode::kUnsupportedConstruct);

  const auto p = ta::parse_parameter("const Math_id id");
  REQUIRE(p);
  CHECK(p->type_name == "Math_id");
  CHECK(p->name == "id");
  CHECK_FALSE(ta::parse_parameter(""));
}

TEST_CASE("identifier mangling") {
  CHECK(ta::sanitize_identifier("java/lang/Math#<init>()V") == "java_lang_Math__init___V");
  CHECK(ta::sanitize_identifier("9lives") == "_9lives");
  CHECK(ta::sanitize_identifier("clock") == "clock_");
  CHECK(ta::sanitize_identifier("") == "_");
  CHECK(ta::is_reserved_word("imply"));
  CHECK_FALSE(ta::is_identifier("a.b"));

  ta::IdentifierScope scope;
  const auto a = scope.mangle("a/b");
  const auto b = scope.mangle("a.b");  // sanitises to the same text
  CHECK(a == "a_b");
  CHECK(b != a);
  CHECK(b.starts_with("a_b_x"));
  CHECK(ta::is_identifier(b));
  // Deterministic across scopes.
  ta::IdentifierScope again;
  again.mangle("a/b");
  CHECK(again.mangle("a.b") == b);
}

TEST_CASE("queries") {
  auto q = ta::parse_query("A[] (controller.finish imply globalClock <= 5)");
  CHECK(q.kind == ta::QueryKind::kInvariant);
  CHECK(q.expression == "(controller.finish imply globalClock <= 5)");
  CHECK(ta::parse_query("E<> controller.finish").kind == ta::QueryKind::kReach);
  CHECK(ta::parse_query("a --> b").kind == ta::QueryKind::kLeadsTo);
  CHECK(ta::parse_query(q.text()) == ta::Query{q.kind, q.expression, ""});
  CHECK(error_of([] { ta::parse_query("E[] p"); }) == ErrorCode::kUnsupportedQuery);

  ta::QueryOptions opts;
  opts.bound_x = 42;
  opts.leads_to = {"Main.idle --> controller.finish"};
  const auto qs = ta::default_queries({}, opts);
  REQUIRE(qs.size() == 4);
  CHECK(qs[0].text() == "A[] (controller.finish imply globalClock <= 42)");
  CHECK(qs[1].text() == "E<> controller.finish");
  CHECK(qs[2].text() == "A[] not deadlock");
  CHECK(qs[3].kind == ta::QueryKind::kLeadsTo);
  opts.literal_finish_query = true;
  CHECK(ta::default_queries({}, opts)[0].text() == "A[] controller.finish and globalClock <= 42");
}

// --- translation -----------------------------------------------------------

struct MainMath {
  cfg::Project project = testing::augment_default(testing::derive_fixture("main_math.jbct", "Main"));
  ta::TaSystem system = ta::transform(project);
};

TEST_CASE("one template per class plus the controller") {
  const MainMath f;
  std::set<std::string> names;
  for (const auto& t : f.system.templates) names.insert(t.name);
  CHECK(names == std::set<std::string>{"Main", "Math", "controller"});
  CHECK(f.system.templates.size() == 3);
  CHECK(f.system.instantiation == std::map<std::string, int64_t>{{"Main", 1}, {"Math", 1}, {"controller", 1}});
  CHECK_NOTHROW(ta::validate_system(f.system));

  const auto* ctl = f.system.find_template("controller");
  REQUIRE(ctl);
  CHECK(ctl->find_location(ctl->initial)->committed);
  CHECK(ctl->find_location_by_name("finish")->urgent);
}

TEST_CASE("calls expand to calling, waiting and returning locations") {
  const MainMath f;
  const auto& main = *f.system.find_template("Main");
  const auto& math = *f.system.find_template("Math");
  const auto& main_method = *f.project.find_method(f.project.main_method());
  int calls = 0;
  for (const auto& [off, ins] : main_method.instructions) {
    if (ins.kind != InstrKind::kInvoke || ins.resolved_targets.empty()) continue;
    ++calls;
    CAPTURE(off);
    const auto* calling = location_at(main, off, "_calling");
    const auto* waiting = location_at(main, off, "_waiting");
    const auto* returning = location_at(main, off, "_returning");
    REQUIRE(calling);
    REQUIRE(waiting);
    REQUIRE(returning);
    CHECK(calling->invariant.has_value());
    CHECK_FALSE(waiting->invariant.has_value());
    CHECK(returning->committed);
    const std::string chan = ta::sanitize_identifier(ins.resolved_targets[0].key());
    const auto* send = edge_between(main, calling->id, waiting->id);
    const auto* receive = edge_between(main, waiting->id, returning->id);
    REQUIRE(send);
    REQUIRE(receive);
    CHECK(send->sync == chan + "_call!");
    CHECK(receive->sync == chan + "_return?");
    // The callee side: idle receives the call and every exit returns.
    int accepts = 0, returns = 0;
    for (const auto& e : math.edges) {
      accepts += e.source == math.initial && e.sync == chan + "_call?";
      returns += e.target == math.initial && e.sync == chan + "_return!";
    }
    CHECK(accepts == 1);
    CHECK(returns >= 1);
  }
  CHECK(calls == 5);

  // The constructor call specifically.
  bool init_seen = false;
  for (const auto& e : main.edges) init_seen |= e.sync == "Math__init___V_call!";
  CHECK(init_seen);
}

TEST_CASE("guard constants never exceed invariant constants") {
  for (const auto& fx : testing::translatable_fixtures()) {
    for (bool group : {false, true}) {
      CAPTURE(fx.file);
      const auto sys = testing::system_for(fx.file, fx.main_class, group);
      const auto globals = constants_of(sys.global_declarations);
      const std::regex inv(R"(lc <= (\w+))");
      const std::regex grd(R"(lc >= (\w+))");
      int timed = 0;
      for (const auto& t : sys.templates) {
        const auto consts = constants_of(t.local_declarations, globals);
        for (const auto& l : t.locations) {
          if (!l.invariant) continue;
          std::smatch m;
          REQUIRE(std::regex_search(*l.invariant, m, inv));
          const int64_t upper = consts.at(m[1]);
          for (const auto& e : t.edges) {
            if (e.source != l.id || !e.guard) continue;
            std::smatch g;
            if (!std::regex_search(*e.guard, g, grd)) continue;
            CHECK(consts.at(g[1]) <= upper);
            ++timed;
          }
        }
      }
      CHECK(timed > 0);
    }
  }
}

TEST_CASE("loop guards: exit on ==, continue on <, count on back edges") {
  const MainMath f;
  const auto& main_method = *f.project.find_method(f.project.main_method());
  REQUIRE(main_method.loops.size() == 1);
  const auto& loop = main_method.loops[0];
  const auto& main = *f.system.find_template("Main");
  const auto consts = constants_of(main.local_declarations);
  const auto* head = location_at(main, loop.head);
  REQUIRE(head);
  const std::string counter = "lc_" + head->name;
  const std::string limit = "ll_" + head->name;
  CHECK(consts.at(limit) == 5);
  REQUIRE(loop.exit_edges.size() == 1);
  const auto [xs, xt] = *loop.exit_edges.begin();
  const auto* src = location_at(main, xs);
  const auto* exit_target = location_at(main, xt);
  REQUIRE(src);
  REQUIRE(exit_target);
  const auto* exit = edge_between(main, src->id, exit_target->id);
  REQUIRE(exit);
  CHECK(exit->guard->find(counter + " == " + limit) != std::string::npos);
  CHECK(has(exit->assignments, counter + " = 0"));
  for (const auto& [cs, ct] : loop.continue_edges) {
    const auto* cont = edge_between(main, location_at(main, cs)->id, location_at(main, ct)->id);
    REQUIRE(cont);
    CHECK(cont->guard->find(counter + " < " + limit) != std::string::npos);
    CHECK_FALSE(has(cont->assignments, counter + " = 0"));
  }
  REQUIRE(loop.back_edges.size() == 1);
  const auto [bs, bt] = *loop.back_edges.begin();
  const auto* back = edge_between(main, location_at(main, bs)->id, head->id);
  REQUIRE(back);
  CHECK(back->guard->find(counter + " < " + limit) != std::string::npos);
  CHECK(has(back->assignments, counter + " = " + counter + " + 1"));
  // No other edge touches the counter.
  int touching = 0;
  for (const auto& e : main.edges) {
    for (const auto& a : e.assignments) touching += a.starts_with(counter + " =");
  }
  CHECK(touching == 2);
}

TEST_CASE("multi-instance templates take a scalar parameter") {
  const MainMath f;
  ta::TransformOptions opts;
  opts.instance_overrides["Math"] = 3;
  const auto sys = ta::transform(f.project, opts);
  CHECK(sys.instantiation.at("Math") == 3);
  const auto& math = *sys.find_template("Math");
  CHECK(math.parameter == "const Math_id id");
  CHECK(sys.global_declarations.find("typedef scalar[3] Math_id;") != std::string::npos);
  CHECK_NOTHROW(ta::validate_system(sys));
  opts.instance_overrides = {{"Nope", 2}};
  CHECK(error_of([&] { ta::transform(f.project, opts); }) == ErrorCode::kInvalidArgument);
  opts.instance_overrides = {{"Math", 0}};
  CHECK(error_of([&] { ta::transform(f.project, opts); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("transform preconditions") {
  auto raw = testing::derive_fixture("single_loop.jbct", "Loop");
  CHECK(error_of([&] { ta::transform(raw); }) == ErrorCode::kUntimedInstruction);
  auto timed = analysis::augment_timing(analysis::detect_all_loops(raw), {});
  CHECK(error_of([&] { ta::transform(timed); }) == ErrorCode::kUnlimitedLoop);
}

TEST_CASE("validation catches broken systems") {
  const MainMath f;
  auto sys = f.system;
  sys.templates[1].edges[0].guard = "lc >= missing_const";
  CHECK(error_of([&] { ta::validate_system(sys); }) == ErrorCode::kDanglingReference);
  sys = f.system;
  sys.templates[1].locations[1].name = "bad.name";
  CHECK(error_of([&] { ta::validate_system(sys); }) == ErrorCode::kUnmangledIdentifier);
  sys = f.system;
  sys.templates[1].edges[0].target = "id99999";
  CHECK(error_of([&] { ta::validate_system(sys); }) == ErrorCode::kDanglingReference);
  sys = f.system;
  sys.queries = {ta::parse_query("E<> Main.nowhere")};
  CHECK(error_of([&] { ta::validate_system(sys); }) == ErrorCode::kDanglingReference);
  sys = f.system;
  sys.instantiation.erase("Math");
  CHECK(error_of([&] { ta::validate_system(sys); }) == ErrorCode::kDanglingReference);
  sys = f.system;
  sys.templates[1].edges[0].assignments.push_back("lc = lc @ 1");
  CHECK_THROWS_AS(ta::validate_system(sys), Error);
}

TEST_CASE("system JSON round-trips on all fixtures") {
  testing::TempDir dir;
  for (const auto& fx : testing::translatable_fixtures()) {
    CAPTURE(fx.file);
    auto sys = testing::system_for(fx.file, fx.main_class, true);
    sys.queries = ta::default_queries(sys, {});
    CHECK(ta::system_from_json(ta::to_json(sys)) == sys);
    ta::save_system(sys, dir / "s.json");
    CHECK(ta::load_system(dir / "s.json") == sys);
  }
  auto doc = ta::to_json(testing::system_for("branch.jbct", "Branch"));
  doc["formatVersion"] = "0.1";
  CHECK(error_of([&] { ta::system_from_json(doc); }) == ErrorCode::kSerializationVersionMismatch);
}

TEST_CASE("translation is deterministic") {
  for (const auto& fx : testing::translatable_fixtures()) {
    CHECK(testing::system_for(fx.file, fx.main_class) == testing::system_for(fx.file, fx.main_class));
  }
}

}  // namespace
}  // namespace bc2ta
