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
// uppaalio_test.cpp -- UPPAAL XML writing and reading, and query files.

#include <functional>

#include "bc2ta/error.hpp"
#include "bc2ta/uppaalio.hpp"
#include "doctest.h"
#include "test_support.hpp"

namespace bc2ta {
namespace {

ErrorCode error_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::kIo;
}

TEST_CASE("XML emit and parse are inverse on every fixture") {
  for (const auto& fx : testing::translatable_fixtures()) {
    for (bool group : {false, true}) {
      CAPTURE(fx.file);
      const auto sys = testing::system_for(fx.file, fx.main_class, group);
      const std::string xml = uppaal::emit_xml(sys);
      CHECK(uppaal::parse_xml(xml) == sys);
      CHECK(uppaal::emit_xml(uppaal::parse_xml(xml)) == xml);
      CHECK(uppaal::emit_xml(testing::system_for(fx.file, fx.main_class, group)) == xml);
    }
  }
}

TEST_CASE("multi-instance systems survive the XML round trip") {
  auto project = testing::augment_default(testing::derive_fixture("main_math.jbct", "Main"));
  ta::TransformOptions opts;
  opts.instance_overrides["Math"] = 2;
  const auto sys = ta::transform(project, opts);
  const std::string xml = uppaal::emit_xml(sys);
  CHECK(xml.find("<system>") != std::string::npos);
  CHECK(xml.find("Math(const Math_id id)") == std::string::npos);
  CHECK(xml.find("<parameter>const Math_id id</parameter>") != std::string::npos);
  CHECK(uppaal::parse_xml(xml) == sys);
}

TEST_CASE("emitted XML matches the frozen snapshot") {
  const auto sys = testing::system_for("straight_line.jbct", "Line");
  const std::string golden = testing::read_text(std::filesystem::path(BC2TA_GOLDEN_DIR) / "straight_line.xml");
  CHECK(uppaal::emit_xml(sys) == golden);
}

TEST_CASE("document shape") {
  const std::string xml = uppaal::emit_xml(testing::system_for("branch.jbct", "Branch"));
  CHECK(xml.starts_with("<?xml version=\"1.0\" encoding=\"utf-8\"?>\n"));
  CHECK(xml.find(uppaal::kDtdPublicId) != std::string::npos);
  CHECK(xml.find(uppaal::kDtdSystemId) != std::string::npos);
  CHECK(xml.find("&lt;=") != std::string::npos);
  CHECK(xml.find("<= ") == std::string::npos);
  CHECK(xml.find("<queries>") == std::string::npos);
}

TEST_CASE("reader errors") {
  CHECK(error_of([] { uppaal::parse_xml("<nta><template>"); }) == ErrorCode::kXmlSyntaxError);
  CHECK(error_of([] { uppaal::parse_xml("not xml at all"); }) == ErrorCode::kXmlSyntaxError);
  const std::string xml = uppaal::emit_xml(testing::system_for("branch.jbct", "Branch"));
  std::string branchpoint = xml;
  branchpoint.replace(branchpoint.find("<init"), 0, "<branchpoint id=\"b1\" x=\"0\" y=\"0\"/>\n");
  CHECK(error_of([&] { uppaal::parse_xml(branchpoint); }) == ErrorCode::kUnsupportedConstruct);
  std::string missing_ref = xml;
  missing_ref.replace(missing_ref.find("<source ref=\""), 13, "<source xref=\"");
  CHECK(error_of([&] { uppaal::parse_xml(missing_ref); }) == ErrorCode::kXmlSyntaxError);
}

TEST_CASE("query files") {
  const std::vector<ta::Query> qs = {{ta::QueryKind::kInvariant, "not deadlock", "no deadlock"},
                                     {ta::QueryKind::kReach, "controller.finish", ""}};
  const std::string text = uppaal::emit_queries(qs);
  CHECK(text == "/*\nno deadlock\n*/\nA[] not deadlock\n\nE<> controller.finish\n\n");
}

}  // namespace
}  // namespace bc2ta
