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
// expr.hpp -- the subset of the UPPAAL expression and declaration language
// that generated systems use: guards, invariants, assignments, sync labels,
// queries and global/local declarations.

#ifndef BC2TA_EXPR_HPP_
#define BC2TA_EXPR_HPP_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bc2ta::ta {

enum class ExprOp {
  kInt,
  kBool,
  kName,         // variable, clock or constant
  kLocation,     // Template.loc or Template(arg).loc
  kDeadlock,
  kNot,
  kNeg,
  kAdd,
  kSub,
  kMul,
  kDiv,
  kMod,
  kLt,
  kLe,
  kEq,
  kNe,
  kGe,
  kGt,
  kAnd,
  kOr,
  kImply,
  kExists,       // exists (name : Type) body
  kForall,
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  ExprOp op = ExprOp::kInt;
  int64_t value = 0;
  std::string name;       // kName, kLocation (template), quantifier variable
  std::string member;     // kLocation: location name; quantifiers: bound type
  std::vector<ExprPtr> args;  // operands; kLocation: optional instance argument
};

// All parse functions throw Error(kUnsupportedConstruct) on text outside the
// supported subset.
ExprPtr parse_expression(std::string_view text);

struct Assignment {
  std::string target;
  ExprPtr value;
};

Assignment parse_assignment(std::string_view text);

struct SyncLabel {
  std::string channel;
  bool send = false;
};

SyncLabel parse_sync(std::string_view text);

// Splits on commas outside parentheses and brackets; pieces are trimmed.
std::vector<std::string> split_top_level(std::string_view text);

enum class DeclKind { kClock, kChannel, kInt, kBool, kConstInt, kScalarType };

struct Declaration {
  DeclKind kind = DeclKind::kInt;
  std::string name;
  ExprPtr lower;  // kInt range, optional
  ExprPtr upper;
  ExprPtr init;   // initialiser or constant value
  ExprPtr size;   // kScalarType
};

std::vector<Declaration> parse_declarations(std::string_view text);

struct Parameter {
  std::string type_name;
  std::string name;
};

// "const <Type> <name>"; empty text yields no parameter.
std::optional<Parameter> parse_parameter(std::string_view text);

bool is_identifier(std::string_view text);
bool is_reserved_word(std::string_view text);

// Folds an integer expression over named constants; throws
// kUnsupportedConstruct when it refers to anything else.
int64_t evaluate_constant(const Expr& expr, const std::map<std::string, int64_t>& constants);

// Every identifier an expression refers to (names, template names, bound types).
void collect_names(const Expr& expr, std::vector<std::string>& out);

}  // namespace bc2ta::ta

#endif  // BC2TA_EXPR_HPP_
