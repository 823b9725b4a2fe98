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
// capi_test.cpp -- the extern-C interface: handles, status codes, owned
// strings and agreement with the C++ pipeline.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "bc2ta/bc2ta.h"
#include "bc2ta/error.hpp"
#include "bc2ta/uppaalio.hpp"
#include "doctest.h"
#include "test_support.hpp"

namespace bc2ta {
namespace {

// Takes ownership of a library string.
std::string take(char* text) {
  REQUIRE(text != nullptr);
  std::string out(text);
  bc2ta_string_free(text);
  return out;
}

bc2ta_project* derive(const std::string& file, const char* main_class) {
  const std::string root = testing::fixture_path(file).string();
  const char* roots[] = {root.c_str()};
  bc2ta_project* p = nullptr;
  REQUIRE(bc2ta_project_derive(roots, 1, main_class, nullptr, nullptr, nullptr, 0, &p) == BC2TA_OK);
  REQUIRE(p != nullptr);
  return p;
}

bc2ta_system* pipeline(const std::string& file, const char* main_class, int group = 0) {
  bc2ta_project* p = derive(file, main_class);
  bc2ta_augment_options opts;
  bc2ta_augment_options_init(&opts);
  opts.group = group;
  bc2ta_project* aug = nullptr;
  REQUIRE(bc2ta_project_augment(p, &opts, &aug, nullptr) == BC2TA_OK);
  bc2ta_system* sys = nullptr;
  REQUIRE(bc2ta_transform(aug, nullptr, 0, &sys) == BC2TA_OK);
  bc2ta_project_free(aug);
  bc2ta_project_free(p);
  return sys;
}

TEST_CASE("status codes mirror the library error codes") {
  CHECK(std::string(bc2ta_status_name(BC2TA_OK)) == "Ok");
  CHECK(std::string(bc2ta_status_name(BC2TA_INTERNAL_ERROR)) == "InternalError");
  CHECK(std::string(bc2ta_status_name(static_cast<bc2ta_status>(999))) == "Unknown");
  for (int c = 0; c <= static_cast<int>(ErrorCode::kIo); ++c) {
    CAPTURE(c);
    CHECK(bc2ta_status_name(static_cast<bc2ta_status>(c + 1)) == error_code_name(static_cast<ErrorCode>(c)));
  }
  CHECK(BC2TA_IO_ERROR == static_cast<int>(ErrorCode::kIo) + 1);
  CHECK(BC2TA_INDIRECT_RECURSION == static_cast<int>(ErrorCode::kIndirectRecursion) + 1);
  CHECK(std::string(bc2ta_version()).size() > 0);
}

TEST_CASE("failures set the last error and successes clear it") {
  bc2ta_project* p = nullptr;
  CHECK(bc2ta_project_load("/nonexistent/model.json", &p) == BC2TA_IO_ERROR);
  CHECK(p == nullptr);
  CHECK(std::string(bc2ta_last_error()).size() > 0);

  CHECK(bc2ta_project_load(nullptr, &p) == BC2TA_INVALID_ARGUMENT);
  CHECK(std::string(bc2ta_last_error()).find("null") != std::string::npos);

  const std::string root = testing::fixture_path("main_math.jbct").string();
  const char* roots[] = {root.c_str()};
  CHECK(bc2ta_project_derive(roots, 1, "Nope", nullptr, nullptr, nullptr, 0, &p) == BC2TA_MAIN_CLASS_NOT_FOUND);
  CHECK(bc2ta_project_derive(roots, 1, "Main", nullptr, nullptr, nullptr, 0, &p) == BC2TA_OK);
  CHECK(std::string(bc2ta_last_error()).empty());
  bc2ta_project_free(p);
  bc2ta_project_free(nullptr);
  bc2ta_system_free(nullptr);
  bc2ta_string_free(nullptr);
}

TEST_CASE("project stats and save/load round trip") {
  bc2ta_project* p = derive("main_math.jbct", "Main");
  bc2ta_stats s{};
  REQUIRE(bc2ta_project_stats(p, &s) == BC2TA_OK);
  const auto expected = cfg::compute_stats(testing::derive_fixture("main_math.jbct", "Main"));
  CHECK(s.classes == expected.class_count);
  CHECK(s.methods == expected.method_count);
  CHECK(s.instructions == expected.instruction_count);
  CHECK(s.resolvable_calls == 5);
  CHECK(s.implementations == 5);
  CHECK(s.total == s.classes + s.methods + s.loops + s.instructions + s.edges);
  const std::string text = take([&] {
    char* t = nullptr;
    REQUIRE(bc2ta_project_stats_text(p, &t) == BC2TA_OK);
    return t;
  }());
  CHECK(text == cfg::format_stats(expected));

  testing::TempDir dir;
  const std::string path = (dir / "model.json").string();
  REQUIRE(bc2ta_project_save(p, path.c_str()) == BC2TA_OK);
  bc2ta_project* back = nullptr;
  REQUIRE(bc2ta_project_load(path.c_str(), &back) == BC2TA_OK);
  bc2ta_stats s2{};
  REQUIRE(bc2ta_project_stats(back, &s2) == BC2TA_OK);
  CHECK(s2.total == s.total);
  bc2ta_project_free(back);
  bc2ta_project_free(p);
}

TEST_CASE("augment reports recursion and validates options") {
  bc2ta_project* p = derive("mutual_recursion.jbct", "Parity");
  bc2ta_augment_options opts;
  bc2ta_augment_options_init(&opts);
  CHECK(opts.default_loop_limit == 5);
  bc2ta_project* out = nullptr;
  char* report = nullptr;
  CHECK(bc2ta_project_augment(p, &opts, &out, &report) == BC2TA_INDIRECT_RECURSION);
  CHECK(out == nullptr);
  const std::string text = take(report);
  CHECK(text.find("Parity#isEven") != std::string::npos);
  CHECK(text.find("Parity#isOdd") != std::string::npos);

  opts.on_indirect_recursion = BC2TA_RECURSION_REPORT;
  report = nullptr;
  CHECK(bc2ta_project_augment(p, &opts, &out, &report) != BC2TA_INVALID_ARGUMENT);
  if (out != nullptr) bc2ta_project_free(out);
  bc2ta_string_free(report);

  opts = {};
  bc2ta_augment_options_init(&opts);
  opts.default_loop_limit = 0;
  CHECK(bc2ta_project_augment(p, &opts, &out, nullptr) == BC2TA_INVALID_ARGUMENT);
  bc2ta_project_free(p);
}

TEST_CASE("transform overrides are validated") {
  bc2ta_project* p = derive("straight_line.jbct", "Line");
  bc2ta_augment_options opts;
  bc2ta_augment_options_init(&opts);
  bc2ta_project* aug = nullptr;
  REQUIRE(bc2ta_project_augment(p, &opts, &aug, nullptr) == BC2TA_OK);
  bc2ta_system* sys = nullptr;
  const char* bad[] = {"Line"};
  CHECK(bc2ta_transform(aug, bad, 1, &sys) == BC2TA_INVALID_ARGUMENT);
  const char* zero[] = {"Line=0"};
  CHECK(bc2ta_transform(aug, zero, 1, &sys) == BC2TA_INVALID_ARGUMENT);
  const char* junk[] = {"Line=2x"};
  CHECK(bc2ta_transform(aug, junk, 1, &sys) == BC2TA_INVALID_ARGUMENT);
  CHECK(bc2ta_transform(p, nullptr, 0, &sys) != BC2TA_OK);  // not augmented
  CHECK(bc2ta_transform(aug, nullptr, 0, &sys) == BC2TA_OK);
  bc2ta_system_free(sys);
  bc2ta_project_free(aug);
  bc2ta_project_free(p);
}

TEST_CASE("emitted XML matches the C++ emitter and reloads") {
  bc2ta_system* sys = pipeline("main_math.jbct", "Main");
  const std::string xml = take([&] {
    char* t = nullptr;
    REQUIRE(bc2ta_emit_xml(sys, &t) == BC2TA_OK);
    return t;
  }());
  CHECK(xml == uppaal::emit_xml(testing::system_for("main_math.jbct", "Main")));

  bc2ta_system* back = nullptr;
  REQUIRE(bc2ta_system_load_xml(xml.c_str(), &back) == BC2TA_OK);
  char* again = nullptr;
  REQUIRE(bc2ta_emit_xml(back, &again) == BC2TA_OK);
  CHECK(take(again) == xml);
  CHECK(bc2ta_system_load_xml("<nta>", &back) == BC2TA_XML_SYNTAX_ERROR);

  testing::TempDir dir;
  const std::string path = (dir / "system.json").string();
  REQUIRE(bc2ta_system_save(sys, path.c_str()) == BC2TA_OK);
  bc2ta_system* loaded = nullptr;
  REQUIRE(bc2ta_system_load(path.c_str(), &loaded) == BC2TA_OK);
  REQUIRE(bc2ta_emit_xml(loaded, &again) == BC2TA_OK);
  CHECK(take(again) == xml);
  bc2ta_system_free(loaded);
  bc2ta_system_free(back);
  bc2ta_system_free(sys);
}

TEST_CASE("default queries through the C interface") {
  bc2ta_system* sys = pipeline("single_loop.jbct", "Loop");
  bc2ta_query_options q;
  bc2ta_query_options_init(&q);
  q.bound_x = 1000;
  const char* extra[] = {"controller.start --> controller.finish"};
  q.leads_to = extra;
  q.leads_to_count = 1;
  REQUIRE(bc2ta_system_set_default_queries(sys, &q) == BC2TA_OK);
  size_t n = 0;
  REQUIRE(bc2ta_system_query_count(sys, &n) == BC2TA_OK);
  REQUIRE(n >= 3);
  std::vector<std::string> texts;
  for (size_t i = 0; i < n; ++i) {
    char* t = nullptr;
    REQUIRE(bc2ta_system_query_text(sys, i, &t) == BC2TA_OK);
    texts.push_back(take(t));
  }
  CHECK(std::find(texts.begin(), texts.end(), "A[] not deadlock") != texts.end());
  CHECK(texts.back() == "controller.start --> controller.finish");
  char* t = nullptr;
  CHECK(bc2ta_system_query_text(sys, n, &t) == BC2TA_INVALID_ARGUMENT);
  const std::string qfile = take([&] {
    char* s = nullptr;
    REQUIRE(bc2ta_emit_queries(sys, &s) == BC2TA_OK);
    return s;
  }());
  for (const auto& text : texts) CHECK(qfile.find(text) != std::string::npos);
  bc2ta_system_free(sys);
}

TEST_CASE("checking, bounds and exploration through the C interface") {
  bc2ta_system* sys = pipeline("main_math.jbct", "Main");
  bc2ta_check_options opts;
  bc2ta_check_options_init(&opts);
  CHECK(opts.want_trace == 1);
  int64_t w = 0;
  REQUIRE(bc2ta_min_wcet_bound(sys, 100000, &opts, &w) == BC2TA_OK);
  CHECK(w == testing::longest_path_oracle(testing::augment_default(testing::derive_fixture("main_math.jbct", "Main"))));
  int64_t unused = 0;
  CHECK(bc2ta_min_wcet_bound(sys, w - 1, &opts, &unused) == BC2TA_BOUND_EXCEEDS_CAP);

  bc2ta_verdict v{};
  REQUIRE(bc2ta_check(sys, "A[] not deadlock", &opts, &v) == BC2TA_OK);
  CHECK(v.satisfied == 1);
  CHECK(v.trace == nullptr);
  CHECK(v.states_explored > 0);

  const std::string below = "A[] (controller.finish imply globalClock <= " + std::to_string(w - 1) + ")";
  REQUIRE(bc2ta_check(sys, below.c_str(), &opts, &v) == BC2TA_OK);
  CHECK(v.satisfied == 0);
  const std::string trace = take(v.trace);
  CHECK(trace.find("globalClock=" + std::to_string(w)) != std::string::npos);

  opts.want_trace = 0;
  REQUIRE(bc2ta_check(sys, below.c_str(), &opts, &v) == BC2TA_OK);
  CHECK(v.trace == nullptr);

  CHECK(bc2ta_check(sys, "controller.start --> controller.finish", &opts, &v) == BC2TA_UNSUPPORTED_QUERY);
  CHECK(bc2ta_check(sys, "A[] nosuch.loc", &opts, &v) == BC2TA_DANGLING_REFERENCE);
  opts.state_limit = 2;
  CHECK(bc2ta_check(sys, "A[] not deadlock", &opts, &v) == BC2TA_STATE_LIMIT_EXCEEDED);

  bc2ta_space_stats a{}, b{};
  REQUIRE(bc2ta_explore(sys, 0, 0, 0, &a) == BC2TA_OK);
  REQUIRE(bc2ta_explore(sys, 0, 0, 0, &b) == BC2TA_OK);
  CHECK(a.states == b.states);
  CHECK(a.transitions == b.transitions);
  CHECK(a.symmetry_reduced == 0);
  CHECK(bc2ta_explore(sys, 0, 0, 1, &a) == BC2TA_STATE_LIMIT_EXCEEDED);
  bc2ta_system_free(sys);
}

}  // namespace
}  // namespace bc2ta
