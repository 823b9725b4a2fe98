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
// class_file.cpp -- class-file decoding down to control-flow-relevant
// instruction data.
//
// For the file layout see the JVM specification, chapter 4.

#include <cstring>
#include <string>
#include <vector>

#include "bc2ta/error.hpp"
#include "bc2ta/frontend.hpp"

namespace bc2ta::frontend {
namespace {

enum ConstantTag : uint8_t {
  kUtf8 = 1,
  kInteger = 3,
  kFloat = 4,
  kLong = 5,
  kDouble = 6,
  kClass = 7,
  kString = 8,
  kFieldref = 9,
  kMethodref = 10,
  kInterfaceMethodref = 11,
  kNameAndType = 12,
  kMethodHandle = 15,
  kMethodType = 16,
  kDynamic = 17,
  kInvokeDynamic = 18,
  kModule = 19,
  kPackage = 20,
};

constexpr uint16_t kAccStatic = 0x0008;
constexpr uint16_t kAccNative = 0x0100;
constexpr uint16_t kAccInterface = 0x0200;
constexpr uint16_t kAccAbstract = 0x0400;

[[noreturn]] void malformed(const std::string& what) {
  throw Error(ErrorCode::kMalformedClassFile, "malformed class file: " + what);
}

class ByteReader {
 public:
  explicit ByteReader(std::span<const uint8_t> data) : data_(data) {}

  uint8_t u1() {
    need(1);
    return data_[pos_++];
  }
  uint16_t u2() {
    need(2);
    uint16_t v = static_cast<uint16_t>(data_[pos_] << 8 | data_[pos_ + 1]);
    pos_ += 2;
    return v;
  }
  uint32_t u4() {
    need(4);
    uint32_t v = static_cast<uint32_t>(data_[pos_]) << 24 |
                 static_cast<uint32_t>(data_[pos_ + 1]) << 16 |
                 static_cast<uint32_t>(data_[pos_ + 2]) << 8 | data_[pos_ + 3];
    pos_ += 4;
    return v;
  }
  std::span<const uint8_t> bytes(size_t n) {
    need(n);
    auto out = data_.subspan(pos_, n);
    pos_ += n;
    return out;
  }
  void skip(size_t n) { bytes(n); }
  size_t pos() const { return pos_; }

 private:
  void need(size_t n) const {
    if (data_.size() - pos_ < n) malformed("truncated at byte " + std::to_string(pos_));
  }

  std::span<const uint8_t> data_;
  size_t pos_ = 0;
};

struct Constant {
  uint8_t tag = 0;
  std::string utf8;
  uint16_t a = 0;  // class name index, or class index of a ref, ...
  uint16_t b = 0;  // name-and-type index, or descriptor index
};

class ConstantPool {
 public:
  explicit ConstantPool(ByteReader& in) {
    uint16_t count = in.u2();
    if (count == 0) malformed("empty constant pool");
    entries_.resize(count);
    for (uint16_t i = 1; i < count; ++i) {
      Constant& c = entries_[i];
      c.tag = in.u1();
      switch (c.tag) {
        case kUtf8: {
          uint16_t len = in.u2();
          auto raw = in.bytes(len);
          c.utf8.assign(reinterpret_cast<const char*>(raw.data()), raw.size());
          break;
        }
        case kInteger:
        case kFloat:
          in.skip(4);
          break;
        case kLong:
        case kDouble:
          in.skip(8);
          ++i;  // eight-byte constants take two slots
          break;
        case kClass:
        case kString:
        case kMethodType:
        case kModule:
        case kPackage:
          c.a = in.u2();
          break;
        case kFieldref:
        case kMethodref:
        case kInterfaceMethodref:
        case kNameAndType:
        case kDynamic:
        case kInvokeDynamic:
          c.a = in.u2();
          c.b = in.u2();
          break;
        case kMethodHandle:
          in.skip(3);
          break;
        default:
          malformed("unknown constant tag " + std::to_string(c.tag) + " at index " +
                    std::to_string(i));
      }
    }
  }

  const Constant& at(uint16_t index, uint8_t tag) const {
    if (index == 0 || index >= entries_.size() || entries_[index].tag != tag) {
      malformed("bad constant-pool reference #" + std::to_string(index));
    }
    return entries_[index];
  }

  const std::string& utf8(uint16_t index) const { return at(index, kUtf8).utf8; }
  const std::string& class_name(uint16_t index) const {
    return utf8(at(index, kClass).a);
  }

  InvokeRef method_ref(uint16_t index, Dispatch dispatch) const {
    if (index == 0 || index >= entries_.size()) malformed("bad method reference");
    const Constant& ref = entries_[index];
    if (ref.tag != kMethodref && ref.tag != kInterfaceMethodref) {
      malformed("invoke operand #" + std::to_string(index) + " is not a method reference");
    }
    const Constant& nat = at(ref.b, kNameAndType);
    InvokeRef out{class_name(ref.a), utf8(nat.a), utf8(nat.b), dispatch};
    if (!is_valid_method_descriptor(out.descriptor)) {
      malformed("invalid method descriptor '" + out.descriptor + "'");
    }
    return out;
  }

 private:
  std::vector<Constant> entries_;
};

int32_t read_s4(std::span<const uint8_t> code, size_t at) {
  if (at + 4 > code.size()) malformed("truncated switch table");
  return static_cast<int32_t>(static_cast<uint32_t>(code[at]) << 24 |
                              static_cast<uint32_t>(code[at + 1]) << 16 |
                              static_cast<uint32_t>(code[at + 2]) << 8 | code[at + 3]);
}

int32_t read_s2(std::span<const uint8_t> code, size_t at) {
  if (at + 2 > code.size()) malformed("truncated branch operand");
  return static_cast<int16_t>(code[at] << 8 | code[at + 1]);
}

uint32_t branch_target(size_t at, int64_t delta, size_t code_length) {
  int64_t target = static_cast<int64_t>(at) + delta;
  if (target < 0 || target >= static_cast<int64_t>(code_length)) {
    malformed("branch at " + std::to_string(at) + " leaves the method");
  }
  return static_cast<uint32_t>(target);
}

void push_unique(std::vector<uint32_t>& targets, uint32_t t) {
  for (uint32_t x : targets) {
    if (x == t) return;
  }
  targets.push_back(t);
}

// Fixed operand byte counts; tableswitch, lookupswitch and wide are handled
// separately.
size_t operand_length(uint8_t op) {
  switch (op) {
    case 0x10: case 0x12: case 0x15: case 0x16: case 0x17: case 0x18:
    case 0x19: case 0x36: case 0x37: case 0x38: case 0x39: case 0x3a:
    case 0xbc: case 0xa9:
      return 1;
    case 0x11: case 0x13: case 0x14: case 0x84: case 0xb2: case 0xb3:
    case 0xb4: case 0xb5: case 0xb6: case 0xb7: case 0xb8: case 0xbb:
    case 0xbd: case 0xc0: case 0xc1: case 0xa7: case 0xa8: case 0xc6:
    case 0xc7:
      return 2;
    case 0xc5:
      return 3;
    case 0xb9: case 0xba: case 0xc8: case 0xc9:
      return 4;
    default:
      if (op >= 0x99 && op <= 0xa6) return 2;
      return 0;
  }
}

std::vector<RawInstruction> decode_code(std::span<const uint8_t> code,
                                        const ConstantPool& pool) {
  const auto table = opcode_table();
  std::vector<RawInstruction> out;
  size_t pc = 0;
  while (pc < code.size()) {
    uint8_t op = code[pc];
    if (op >= table.size()) {
      throw Error(ErrorCode::kUnsupportedOpcode,
                  "unsupported opcode 0x" + std::to_string(op) + " at offset " + std::to_string(pc));
    }
    const OpcodeInfo& info = table[op];
    if (!info.supported) {
      throw Error(ErrorCode::kUnsupportedOpcode, "unsupported opcode '" +
                                                     std::string(info.mnemonic) +
                                                     "' at offset " + std::to_string(pc));
    }
    RawInstruction ins;
    ins.offset = static_cast<uint32_t>(pc);
    ins.mnemonic = std::string(info.mnemonic);
    ins.kind = info.kind;
    size_t next = pc + 1;

    if (op == 0xaa || op == 0xab) {  // tableswitch / lookupswitch
      size_t at = (pc + 4) & ~size_t{3};
      int32_t def = read_s4(code, at);
      push_unique(ins.branch_targets, branch_target(pc, def, code.size()));
      if (op == 0xaa) {
        int32_t low = read_s4(code, at + 4);
        int32_t high = read_s4(code, at + 8);
        if (high < low) malformed("tableswitch with high < low");
        int64_t n = static_cast<int64_t>(high) - low + 1;
        at += 12;
        for (int64_t i = 0; i < n; ++i, at += 4) {
          push_unique(ins.branch_targets, branch_target(pc, read_s4(code, at), code.size()));
        }
      } else {
        int32_t npairs = read_s4(code, at + 4);
        if (npairs < 0) malformed("lookupswitch with negative pair count");
        at += 8;
        for (int32_t i = 0; i < npairs; ++i, at += 8) {
          push_unique(ins.branch_targets,
                      branch_target(pc, read_s4(code, at + 4), code.size()));
        }
      }
      next = at;
    } else if (op == 0xc4) {  // wide
      if (pc + 1 >= code.size()) malformed("truncated wide instruction");
      uint8_t inner = code[pc + 1];
      if (inner == 0xa9) {
        throw Error(ErrorCode::kUnsupportedOpcode,
                    "unsupported opcode 'ret' at offset " + std::to_string(pc));
      }
      next = pc + (inner == 0x84 ? 6 : 4);
    } else {
      size_t len = operand_length(op);
      if (pc + 1 + len > code.size()) malformed("truncated instruction at " + std::to_string(pc));
      if (info.kind == InstrKind::kCondBranch || op == 0xa7) {
        ins.branch_targets.push_back(branch_target(pc, read_s2(code, pc + 1), code.size()));
      } else if (op == 0xc8) {
        ins.branch_targets.push_back(branch_target(pc, read_s4(code, pc + 1), code.size()));
      } else if (info.kind == InstrKind::kInvoke) {
        auto index = static_cast<uint16_t>(code[pc + 1] << 8 | code[pc + 2]);
        Dispatch dispatch = op == 0xb6   ? Dispatch::kVirtual
                            : op == 0xb7 ? Dispatch::kSpecial
                            : op == 0xb8 ? Dispatch::kStatic
                                         : Dispatch::kInterface;
        ins.invoke_ref = pool.method_ref(index, dispatch);
      }
      next = pc + 1 + len;
    }
    if (next > code.size()) malformed("instruction at " + std::to_string(pc) + " overruns code");
    out.push_back(std::move(ins));
    pc = next;
  }
  return out;
}

void apply_line_table(RawMethod& method) {
  std::map<uint32_t, uint32_t> kept;
  for (const auto& ins : method.instructions) {
    auto it = method.line_table.find(ins.offset);
    if (it != method.line_table.end()) kept.emplace(it->first, it->second);
  }
  method.line_table = std::move(kept);
  uint32_t line = 0;
  for (auto& ins : method.instructions) {
    auto it = method.line_table.find(ins.offset);
    if (it != method.line_table.end()) line = it->second;
    ins.line = line;
  }
}

RawMethod parse_method(ByteReader& in, const ConstantPool& pool) {
  RawMethod m;
  uint16_t flags = in.u2();
  m.name = pool.utf8(in.u2());
  m.descriptor = pool.utf8(in.u2());
  if (!is_valid_method_descriptor(m.descriptor)) {
    malformed("invalid descriptor '" + m.descriptor + "' on method " + m.name);
  }
  m.is_static = flags & kAccStatic;
  m.is_abstract = flags & kAccAbstract;
  uint16_t attr_count = in.u2();
  for (uint16_t a = 0; a < attr_count; ++a) {
    const std::string& attr_name = pool.utf8(in.u2());
    uint32_t len = in.u4();
    auto body = in.bytes(len);
    if (attr_name != "Code") continue;
    ByteReader code_in(body);
    code_in.u2();  // max_stack
    code_in.u2();  // max_locals
    uint32_t code_len = code_in.u4();
    auto code = code_in.bytes(code_len);
    m.instructions = decode_code(code, pool);
    // Exception handlers are read past but do not contribute edges.
    uint16_t handlers = code_in.u2();
    code_in.skip(size_t{handlers} * 8);
    uint16_t code_attrs = code_in.u2();
    for (uint16_t c = 0; c < code_attrs; ++c) {
      const std::string& name = pool.utf8(code_in.u2());
      uint32_t clen = code_in.u4();
      auto cbody = code_in.bytes(clen);
      if (name != "LineNumberTable") continue;
      ByteReader lines(cbody);
      uint16_t n = lines.u2();
      for (uint16_t i = 0; i < n; ++i) {
        uint16_t start_pc = lines.u2();
        uint16_t line = lines.u2();
        m.line_table[start_pc] = line;
      }
    }
  }
  if (m.is_abstract || (flags & kAccNative)) m.instructions.clear();
  apply_line_table(m);
  return m;
}

}  // namespace

RawClass parse_class_file(std::span<const uint8_t> data) {
  ByteReader in(data);
  if (data.size() < 4 || in.u4() != 0xCAFEBABE) malformed("bad magic");
  in.u2();  // minor
  uint16_t major = in.u2();
  if (major > kMaxClassFileMajorVersion) {
    throw Error(ErrorCode::kUnsupportedVersion,
                "class-file major version " + std::to_string(major) + " exceeds supported " +
                    std::to_string(kMaxClassFileMajorVersion));
  }
  ConstantPool pool(in);
  RawClass cls;
  uint16_t flags = in.u2();
  cls.is_interface = flags & kAccInterface;
  cls.name = pool.class_name(in.u2());
  if (uint16_t super = in.u2(); super != 0) cls.super_name = pool.class_name(super);
  uint16_t n_interfaces = in.u2();
  for (uint16_t i = 0; i < n_interfaces; ++i) cls.interfaces.push_back(pool.class_name(in.u2()));
  uint16_t n_fields = in.u2();
  for (uint16_t f = 0; f < n_fields; ++f) {
    in.skip(6);
    uint16_t attrs = in.u2();
    for (uint16_t a = 0; a < attrs; ++a) {
      in.u2();
      in.skip(in.u4());
    }
  }
  uint16_t n_methods = in.u2();
  for (uint16_t i = 0; i < n_methods; ++i) cls.methods.push_back(parse_method(in, pool));
  // Class attributes are read past but not needed.
  uint16_t n_attrs = in.u2();
  for (uint16_t a = 0; a < n_attrs; ++a) {
    in.u2();
    in.skip(in.u4());
  }
  if (cls.name.empty()) malformed("empty class name");
  for (const auto& m : cls.methods) check_method_invariants(cls, m);
  return cls;
}

}  // namespace bc2ta::frontend
