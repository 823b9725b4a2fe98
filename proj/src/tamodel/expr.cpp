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
// expr.cpp -- tokenizer and recursive-descent parser for the expression and
// declaration subset.

#include "bc2ta/expr.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "bc2ta/error.hpp"

namespace bc2ta::ta {
namespace {

[[noreturn]] void unsupported(std::string_view text, const std::string& why) {
  throw Error(ErrorCode::kUnsupportedConstruct, "'" + std::string(text) + "': " + why);
}

enum class Tok { kIdent, kInt, kSym, kEnd };

struct Token {
  Tok kind = Tok::kEnd;
  std::string text;
  int64_t value = 0;
};

std::vector<Token> tokenize(std::string_view text) {
  static const char* const kTwoChar[] = {"<=", ">=", "==", "!=", "&&", "||"};
  std::vector<Token> out;
  size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
      while (i < text.size() && text[i] != '\n') ++i;
    } else if (c == '/' && i + 1 < text.size() && text[i + 1] == '*') {
      size_t end = text.find("*/", i + 2);
      if (end == std::string_view::npos) unsupported(text, "unterminated comment");
      i = end + 2;
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
      out.push_back({Tok::kIdent, std::string(text.substr(i, j - i)), 0});
      i = j;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      int64_t v = 0;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) {
        if (v > (INT64_MAX - 9) / 10) unsupported(text, "integer literal too large");
        v = v * 10 + (text[j] - '0');
        ++j;
      }
      if (j < text.size() && (std::isalpha(static_cast<unsigned char>(text[j])) || text[j] == '_')) {
        unsupported(text, "identifier cannot start with a digit");
      }
      out.push_back({Tok::kInt, std::string(text.substr(i, j - i)), v});
      i = j;
    } else {
      std::string sym(1, c);
      if (i + 1 < text.size()) {
        std::string two(text.substr(i, 2));
        for (const char* t : kTwoChar) {
          if (two == t) sym = two;
        }
      }
      if (sym.size() == 1 && std::string_view("()[],;:.!<>=+-*/%?").find(c) == std::string_view::npos) {
        unsupported(text, std::string("unexpected character '") + c + "'");
      }
      out.push_back({Tok::kSym, sym, 0});
      i += sym.size();
    }
  }
  out.push_back({Tok::kEnd, "", 0});
  return out;
}

ExprPtr make(ExprOp op, std::vector<ExprPtr> args = {}) {
  auto e = std::make_shared<Expr>();
  e->op = op;
  e->args = std::move(args);
  return e;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text), toks_(tokenize(text)) {}

  bool at_end() const { return peek().kind == Tok::kEnd; }
  const Token& peek(size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
  bool is_sym(std::string_view s, size_t ahead = 0) const {
    return peek(ahead).kind == Tok::kSym && peek(ahead).text == s;
  }
  bool is_word(std::string_view s) const { return peek().kind == Tok::kIdent && peek().text == s; }
  bool accept_sym(std::string_view s) {
    if (!is_sym(s)) return false;
    ++pos_;
    return true;
  }
  bool accept_word(std::string_view s) {
    if (!is_word(s)) return false;
    ++pos_;
    return true;
  }
  void expect_sym(std::string_view s) {
    if (!accept_sym(s)) fail("expected '" + std::string(s) + "'");
  }
  std::string expect_ident() {
    if (peek().kind != Tok::kIdent || is_reserved_word(peek().text)) fail("expected an identifier");
    return toks_[pos_++].text;
  }
  [[noreturn]] void fail(const std::string& why) const {
    unsupported(text_, why + (at_end() ? " at end" : " near '" + peek().text + "'"));
  }

  ExprPtr expression() { return imply(); }

  ExprPtr imply() {
    ExprPtr lhs = disjunction();
    if (accept_word("imply")) return make(ExprOp::kImply, {lhs, imply()});
    return lhs;
  }
  ExprPtr disjunction() {
    ExprPtr lhs = conjunction();
    while (accept_word("or") || accept_sym("||")) lhs = make(ExprOp::kOr, {lhs, conjunction()});
    return lhs;
  }
  ExprPtr conjunction() {
    ExprPtr lhs = negation();
    while (accept_word("and") || accept_sym("&&")) lhs = make(ExprOp::kAnd, {lhs, negation()});
    return lhs;
  }
  ExprPtr negation() {
    if (accept_word("not")) return make(ExprOp::kNot, {negation()});
    return equality();
  }
  ExprPtr equality() {
    ExprPtr lhs = relation();
    for (;;) {
      if (accept_sym("==")) {
        lhs = make(ExprOp::kEq, {lhs, relation()});
      } else if (accept_sym("!=")) {
        lhs = make(ExprOp::kNe, {lhs, relation()});
      } else {
        return lhs;
      }
    }
  }
  ExprPtr relation() {
    ExprPtr lhs = additive();
    for (;;) {
      ExprOp op;
      if (accept_sym("<=")) {
        op = ExprOp::kLe;
      } else if (accept_sym(">=")) {
        op = ExprOp::kGe;
      } else if (accept_sym("<")) {
        op = ExprOp::kLt;
      } else if (accept_sym(">")) {
        op = ExprOp::kGt;
      } else {
        return lhs;
      }
      lhs = make(op, {lhs, additive()});
    }
  }
  ExprPtr additive() {
    ExprPtr lhs = multiplicative();
    for (;;) {
      if (accept_sym("+")) {
        lhs = make(ExprOp::kAdd, {lhs, multiplicative()});
      } else if (accept_sym("-")) {
        lhs = make(ExprOp::kSub, {lhs, multiplicative()});
      } else {
        return lhs;
      }
    }
  }
  ExprPtr multiplicative() {
    ExprPtr lhs = unary();
    for (;;) {
      if (accept_sym("*")) {
        lhs = make(ExprOp::kMul, {lhs, unary()});
      } else if (accept_sym("/")) {
        lhs = make(ExprOp::kDiv, {lhs, unary()});
      } else if (accept_sym("%")) {
        lhs = make(ExprOp::kMod, {lhs, unary()});
      } else {
        return lhs;
      }
    }
  }
  ExprPtr unary() {
    if (accept_sym("!")) return make(ExprOp::kNot, {unary()});
    if (accept_sym("-")) return make(ExprOp::kNeg, {unary()});
    return primary();
  }
  ExprPtr primary() {
    const Token& t = peek();
    if (t.kind == Tok::kInt) {
      ++pos_;
      auto e = std::make_shared<Expr>();
      e->op = ExprOp::kInt;
      e->value = t.value;
      return e;
    }
    if (accept_sym("(")) {
      ExprPtr inner = expression();
      expect_sym(")");
      return inner;
    }
    if (t.kind != Tok::kIdent) fail("expected an operand");
    if (accept_word("true") || accept_word("false")) {
      auto e = std::make_shared<Expr>();
      e->op = ExprOp::kBool;
      e->value = toks_[pos_ - 1].text == "true";
      return e;
    }
    if (accept_word("deadlock")) return make(ExprOp::kDeadlock);
    if (is_word("exists") || is_word("forall")) {
      const bool exists = toks_[pos_++].text == "exists";
      expect_sym("(");
      auto e = std::make_shared<Expr>();
      e->op = exists ? ExprOp::kExists : ExprOp::kForall;
      e->name = expect_ident();
      expect_sym(":");
      e->member = expect_ident();
      expect_sym(")");
      e->args.push_back(expression());
      return e;
    }
    std::string name = expect_ident();
    auto e = std::make_shared<Expr>();
    if (accept_sym("(")) {
      e->args.push_back(expression());
      expect_sym(")");
      expect_sym(".");
      e->op = ExprOp::kLocation;
      e->name = std::move(name);
      e->member = expect_ident();
      return e;
    }
    if (accept_sym(".")) {
      e->op = ExprOp::kLocation;
      e->name = std::move(name);
      e->member = expect_ident();
      return e;
    }
    if (is_sym("[")) fail("arrays are not supported");
    e->op = ExprOp::kName;
    e->name = std::move(name);
    return e;
  }

  void expect_end() {
    if (!at_end()) fail("unexpected trailing input");
  }

  std::vector<Declaration> declarations() {
    std::vector<Declaration> out;
    while (!at_end()) {
      if (accept_sym(";")) continue;
      if (accept_word("clock") || accept_word("chan")) {
        const DeclKind kind = toks_[pos_ - 1].text == "clock" ? DeclKind::kClock : DeclKind::kChannel;
        do {
          Declaration d;
          d.kind = kind;
          d.name = expect_ident();
          out.push_back(std::move(d));
        } while (accept_sym(","));
        expect_sym(";");
      } else if (accept_word("typedef")) {
        if (!accept_word("scalar")) fail("only scalar typedefs are supported");
        Declaration d;
        d.kind = DeclKind::kScalarType;
        expect_sym("[");
        d.size = expression();
        expect_sym("]");
        d.name = expect_ident();
        expect_sym(";");
        out.push_back(std::move(d));
      } else if (accept_word("const")) {
        if (!accept_word("int")) fail("only integer constants are supported");
        do {
          Declaration d;
          d.kind = DeclKind::kConstInt;
          d.name = expect_ident();
          expect_sym("=");
          d.init = expression();
          out.push_back(std::move(d));
        } while (accept_sym(","));
        expect_sym(";");
      } else if (accept_word("int") || accept_word("bool")) {
        const bool is_bool = toks_[pos_ - 1].text == "bool";
        ExprPtr lower, upper;
        if (!is_bool && accept_sym("[")) {
          lower = expression();
          expect_sym(",");
          upper = expression();
          expect_sym("]");
        }
        do {
          Declaration d;
          d.kind = is_bool ? DeclKind::kBool : DeclKind::kInt;
          d.lower = lower;
          d.upper = upper;
          d.name = expect_ident();
          if (is_sym("[")) fail("arrays are not supported");
          if (accept_sym("=")) d.init = expression();
          out.push_back(std::move(d));
        } while (accept_sym(","));
        expect_sym(";");
      } else {
        fail("unsupported declaration");
      }
    }
    return out;
  }

  size_t pos_ = 0;

 private:
  std::string_view text_;
  std::vector<Token> toks_;
};

void collect(const Expr& e, std::set<std::string>& bound, std::vector<std::string>& out) {
  switch (e.op) {
    case ExprOp::kName:
      if (!bound.contains(e.name)) out.push_back(e.name);
      break;
    case ExprOp::kLocation:
      out.push_back(e.name);
      break;
    case ExprOp::kExists:
    case ExprOp::kForall: {
      out.push_back(e.member);
      const bool fresh = bound.insert(e.name).second;
      for (const auto& a : e.args) collect(*a, bound, out);
      if (fresh) bound.erase(e.name);
      return;
    }
    default:
      break;
  }
  for (const auto& a : e.args) collect(*a, bound, out);
}

}  // namespace

ExprPtr parse_expression(std::string_view text) {
  Parser p(text);
  ExprPtr e = p.expression();
  p.expect_end();
  return e;
}

Assignment parse_assignment(std::string_view text) {
  Parser p(text);
  Assignment a;
  a.target = p.expect_ident();
  if (!p.accept_sym("=")) p.fail("expected '=' in assignment");
  a.value = p.expression();
  p.expect_end();
  return a;
}

SyncLabel parse_sync(std::string_view text) {
  Parser p(text);
  SyncLabel s;
  s.channel = p.expect_ident();
  if (p.accept_sym("!")) {
    s.send = true;
  } else if (p.accept_sym("?")) {
    s.send = false;
  } else {
    p.fail("expected '!' or '?'");
  }
  p.expect_end();
  return s;
}

std::vector<std::string> split_top_level(std::string_view text) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  auto flush = [&] {
    size_t b = cur.find_first_not_of(" \t\r\n");
    size_t e = cur.find_last_not_of(" \t\r\n");
    out.push_back(b == std::string::npos ? "" : cur.substr(b, e - b + 1));
    cur.clear();
  };
  for (char c : text) {
    if (c == '(' || c == '[') ++depth;
    if (c == ')' || c == ']') --depth;
    if (c == ',' && depth == 0) {
      flush();
    } else {
      cur += c;
    }
  }
  flush();
  if (out.size() == 1 && out[0].empty()) out.clear();
  return out;
}

std::vector<Declaration> parse_declarations(std::string_view text) {
  Parser p(text);
  return p.declarations();
}

std::optional<Parameter> parse_parameter(std::string_view text) {
  Parser p(text);
  if (p.at_end()) return std::nullopt;
  Parameter out;
  if (!p.accept_word("const")) p.fail("parameters must be 'const <Type> <name>'");
  out.type_name = p.expect_ident();
  out.name = p.expect_ident();
  p.expect_end();
  return out;
}

bool is_identifier(std::string_view text) {
  if (text.empty() || std::isdigit(static_cast<unsigned char>(text[0]))) return false;
  return std::all_of(text.begin(), text.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

bool is_reserved_word(std::string_view text) {
  static const std::set<std::string_view> kWords = {
      "and",     "assign",   "bool",    "broadcast", "case",     "chan",    "clock",
      "commit",  "const",    "continue", "deadlock", "default",  "do",      "double",
      "else",    "exists",   "false",   "for",       "forall",   "guard",   "if",
      "imply",   "init",     "int",     "meta",      "not",      "or",      "priority",
      "process", "progress", "return",  "scalar",    "select",   "state",   "struct",
      "switch",  "sync",     "system",  "trans",     "true",     "typedef", "urgent",
      "void",    "while",    "break",   "A",         "E",        "M",       "sum"};
  return kWords.contains(text);
}

int64_t evaluate_constant(const Expr& e, const std::map<std::string, int64_t>& constants) {
  auto arg = [&](size_t i) { return evaluate_constant(*e.args[i], constants); };
  switch (e.op) {
    case ExprOp::kInt:
    case ExprOp::kBool:
      return e.value;
    case ExprOp::kName: {
      auto it = constants.find(e.name);
      if (it == constants.end()) unsupported(e.name, "not a constant");
      return it->second;
    }
    case ExprOp::kNeg: return -arg(0);
    case ExprOp::kNot: return !arg(0);
    case ExprOp::kAdd: return arg(0) + arg(1);
    case ExprOp::kSub: return arg(0) - arg(1);
    case ExprOp::kMul: return arg(0) * arg(1);
    case ExprOp::kDiv:
    case ExprOp::kMod: {
      int64_t d = arg(1);
      if (d == 0) unsupported("/", "division by zero in constant expression");
      return e.op == ExprOp::kDiv ? arg(0) / d : arg(0) % d;
    }
    case ExprOp::kLt: return arg(0) < arg(1);
    case ExprOp::kLe: return arg(0) <= arg(1);
    case ExprOp::kEq: return arg(0) == arg(1);
    case ExprOp::kNe: return arg(0) != arg(1);
    case ExprOp::kGe: return arg(0) >= arg(1);
    case ExprOp::kGt: return arg(0) > arg(1);
    case ExprOp::kAnd: return arg(0) && arg(1);
    case ExprOp::kOr: return arg(0) || arg(1);
    case ExprOp::kImply: return !arg(0) || arg(1);
    default:
      unsupported(e.name, "not a constant expression");
  }
}

void collect_names(const Expr& expr, std::vector<std::string>& out) {
  std::set<std::string> bound;
  collect(expr, bound, out);
}

}  // namespace bc2ta::ta
