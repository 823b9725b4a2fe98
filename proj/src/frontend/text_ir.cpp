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
// text_ir.cpp -- the line-oriented bytecode transcription format (.jbct).

#include <cctype>
#include <charconv>
#include <sstream>

#include "bc2ta/error.hpp"
#include "bc2ta/frontend.hpp"

namespace bc2ta::frontend {
namespace {

struct Token {
  std::string text;
  int line = 0;
  int column = 0;
};

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  size_t i = 0;
  auto advance = [&](size_t n) {
    for (size_t k = 0; k < n; ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (text.compare(i, 2, "//") == 0) {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    if (c == '{' || c == '}') {
      out.push_back({std::string(1, c), line, col});
      advance(1);
      continue;
    }
    Token tok{"", line, col};
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) &&
           text[i] != '{' && text[i] != '}' && text.compare(i, 2, "//") != 0) {
      tok.text.push_back(text[i]);
      advance(1);
    }
    out.push_back(std::move(tok));
  }
  return out;
}

class IrParser {
 public:
  explicit IrParser(std::string_view text) : tokens_(tokenize(text)) {}

  std::vector<RawClass> parse_all() {
    std::vector<RawClass> classes;
    std::set<std::string> names;
    while (!at_end()) {
      RawClass cls = parse_class();
      if (!names.insert(cls.name).second) fail(last_, "duplicate class '" + cls.name + "'");
      classes.push_back(std::move(cls));
    }
    return classes;
  }

 private:
  [[noreturn]] void fail(const Token& at, const std::string& what) const {
    throw Error(ErrorCode::kSyntaxError, "line " + std::to_string(at.line) + ", column " +
                                             std::to_string(at.column) + ": " + what);
  }

  bool at_end() const { return pos_ >= tokens_.size(); }

  const Token& peek() const {
    static const Token kEof{"<end of input>", 0, 0};
    if (at_end()) return tokens_.empty() ? kEof : tokens_.back();
    return tokens_[pos_];
  }

  const Token& next() {
    if (at_end()) fail(peek(), "unexpected end of input");
    last_ = tokens_[pos_];
    return tokens_[pos_++];
  }

  void expect(std::string_view word) {
    const Token& t = next();
    if (t.text != word) fail(t, "expected '" + std::string(word) + "', found '" + t.text + "'");
  }

  bool accept(std::string_view word) {
    if (!at_end() && peek().text == word) {
      next();
      return true;
    }
    return false;
  }

  bool starts_instruction_or_end() const {
    const std::string& t = peek().text;
    if (t == "@line" || t == "}") return true;
    if (t.back() == ':') return true;
    return pos_ + 1 < tokens_.size() && tokens_[pos_ + 1].text == ":";
  }

  uint32_t number(const Token& t, std::string_view text) {
    uint32_t v = 0;
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || p != text.data() + text.size() || text.empty()) {
      fail(t, "expected a non-negative integer, found '" + std::string(text) + "'");
    }
    return v;
  }

  std::vector<std::string> name_list() {
    std::vector<std::string> names;
    std::string joined;
    do {
      joined += next().text;
    } while (!joined.empty() && joined.back() == ',' && !at_end());
    std::stringstream ss(joined);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (!item.empty()) names.push_back(item);
    }
    return names;
  }

  RawClass parse_class() {
    expect("class");
    RawClass cls;
    cls.name = next().text;
    cls.super_name = "java/lang/Object";
    if (cls.name == "java/lang/Object") cls.super_name.reset();
    if (accept("extends")) cls.super_name = next().text;
    if (accept("implements")) cls.interfaces = name_list();
    if (accept("interface")) cls.is_interface = true;
    expect("{");
    std::set<std::string> sigs;
    while (!accept("}")) {
      RawMethod m = parse_method();
      if (!sigs.insert(m.name + m.descriptor).second) {
        fail(last_, "duplicate method '" + m.name + m.descriptor + "' in class " + cls.name);
      }
      cls.methods.push_back(std::move(m));
    }
    return cls;
  }

  RawMethod parse_method() {
    expect("method");
    const Token& sig = next();
    RawMethod m;
    size_t paren = sig.text.find('(');
    if (paren == std::string::npos || paren == 0) fail(sig, "expected <name><descriptor>");
    m.name = sig.text.substr(0, paren);
    m.descriptor = sig.text.substr(paren);
    if (!is_valid_method_descriptor(m.descriptor)) {
      fail(sig, "invalid method descriptor '" + m.descriptor + "'");
    }
    for (;;) {
      if (accept("static")) {
        m.is_static = true;
      } else if (accept("abstract")) {
        m.is_abstract = true;
      } else {
        break;
      }
    }
    expect("{");
    uint32_t current_line = 0;
    // Branch targets are checked after the whole body is known.
    std::vector<std::pair<Token, uint32_t>> pending_targets;
    while (!accept("}")) {
      RawInstruction ins;
      const Token& off_tok = next();
      std::string_view off_text = off_tok.text;
      if (!off_text.empty() && off_text.back() == ':') {
        off_text.remove_suffix(1);
      } else {
        expect(":");
      }
      ins.offset = number(off_tok, off_text);
      if (!m.instructions.empty()) {
        if (ins.offset == m.instructions.back().offset) {
          throw Error(ErrorCode::kDuplicateOffset,
                      "line " + std::to_string(off_tok.line) + ": duplicate offset " +
                          std::to_string(ins.offset) + " in " + m.name + m.descriptor);
        }
        if (ins.offset < m.instructions.back().offset) {
          fail(off_tok, "offset " + std::to_string(ins.offset) + " is not increasing");
        }
      }
      const Token& mn = next();
      const OpcodeInfo* op = find_opcode(mn.text);
      if (op == nullptr) fail(mn, "unknown mnemonic '" + mn.text + "'");
      if (!op->supported) {
        throw Error(ErrorCode::kUnsupportedOpcode, "line " + std::to_string(mn.line) +
                                                       ": unsupported opcode '" + mn.text + "'");
      }
      ins.mnemonic = mn.text;
      ins.kind = op->kind;
      switch (op->kind) {
        case InstrKind::kCondBranch:
        case InstrKind::kGoto: {
          const Token& t = next();
          ins.branch_targets.push_back(number(t, t.text));
          pending_targets.emplace_back(t, ins.branch_targets.back());
          break;
        }
        case InstrKind::kSwitch: {
          const Token& first = peek();
          for (const auto& item : name_list()) {
            uint32_t target = number(first, item);
            bool seen = false;
            for (uint32_t x : ins.branch_targets) seen |= x == target;
            if (!seen) ins.branch_targets.push_back(target);
            pending_targets.emplace_back(first, target);
          }
          break;
        }
        case InstrKind::kInvoke: {
          const Token& t = next();
          size_t p = t.text.find('(');
          size_t dot = p == std::string::npos ? p : t.text.rfind('.', p);
          if (p == std::string::npos || dot == std::string::npos || dot == 0 || dot + 1 == p) {
            fail(t, "expected <Owner>.<name><descriptor>, found '" + t.text + "'");
          }
          InvokeRef ref;
          ref.owner = t.text.substr(0, dot);
          ref.name = t.text.substr(dot + 1, p - dot - 1);
          ref.descriptor = t.text.substr(p);
          if (!is_valid_method_descriptor(ref.descriptor)) {
            fail(t, "invalid descriptor '" + ref.descriptor + "'");
          }
          ref.dispatch = mn.text == "invokestatic"    ? Dispatch::kStatic
                         : mn.text == "invokespecial" ? Dispatch::kSpecial
                         : mn.text == "invokevirtual" ? Dispatch::kVirtual
                                                      : Dispatch::kInterface;
          ins.invoke_ref = std::move(ref);
          break;
        }
        default:
          // Data operands (constants, field and type references) carry no
          // control flow and are skipped.
          while (!at_end() && !starts_instruction_or_end()) next();
          break;
      }
      if (accept("@line")) {
        const Token& t = next();
        current_line = number(t, t.text);
        m.line_table[ins.offset] = current_line;
      }
      ins.line = current_line;
      m.instructions.push_back(std::move(ins));
    }
    std::set<uint32_t> offsets;
    for (const auto& ins : m.instructions) offsets.insert(ins.offset);
    for (const auto& [tok, target] : pending_targets) {
      if (!offsets.contains(target)) {
        throw Error(ErrorCode::kDanglingBranchTarget,
                    "line " + std::to_string(tok.line) + ", column " + std::to_string(tok.column) +
                        ": branch target " + std::to_string(target) + " in " + m.name +
                        m.descriptor + " is not an instruction offset");
      }
    }
    if (m.is_abstract && !m.instructions.empty()) fail(sig, "abstract method with a body");
    return m;
  }

  std::vector<Token> tokens_;
  size_t pos_ = 0;
  Token last_;
};

}  // namespace

std::vector<RawClass> parse_text_ir(std::string_view text) {
  return IrParser(text).parse_all();
}

std::string render_text_ir(std::span<const RawClass> classes) {
  std::ostringstream out;
  bool first_class = true;
  for (const RawClass& cls : classes) {
    if (!first_class) out << "\n";
    first_class = false;
    out << "class " << cls.name;
    if (cls.super_name) out << " extends " << *cls.super_name;
    if (!cls.interfaces.empty()) {
      out << " implements ";
      for (size_t i = 0; i < cls.interfaces.size(); ++i) {
        out << (i ? "," : "") << cls.interfaces[i];
      }
    }
    if (cls.is_interface) out << " interface";
    out << " {\n";
    for (const RawMethod& m : cls.methods) {
      out << "  method " << m.name << m.descriptor;
      if (m.is_static) out << " static";
      if (m.is_abstract) out << " abstract";
      out << " {\n";
      for (const RawInstruction& ins : m.instructions) {
        out << "    " << ins.offset << ": " << ins.mnemonic;
        if (ins.invoke_ref) {
          out << " " << ins.invoke_ref->owner << "." << ins.invoke_ref->name
              << ins.invoke_ref->descriptor;
        }
        if (!ins.branch_targets.empty()) {
          out << " ";
          for (size_t i = 0; i < ins.branch_targets.size(); ++i) {
            out << (i ? "," : "") << ins.branch_targets[i];
          }
        }
        if (auto it = m.line_table.find(ins.offset); it != m.line_table.end()) {
          out << " @line " << it->second;
        }
        out << "\n";
      }
      out << "  }\n";
    }
    out << "}\n";
  }
  return out.str();
}

}  // namespace bc2ta::frontend
