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
// opcodes.cpp -- JVM opcode table and instruction kind names.

#include <algorithm>
#include <array>

#include "bc2ta/error.hpp"
#include "bc2ta/frontend.hpp"

namespace bc2ta {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedClassFile: return "MalformedClassFile";
    case ErrorCode::kUnsupportedVersion: return "UnsupportedVersion";
    case ErrorCode::kUnsupportedOpcode: return "UnsupportedOpcode";
    case ErrorCode::kSyntaxError: return "SyntaxError";
    case ErrorCode::kDuplicateOffset: return "DuplicateOffset";
    case ErrorCode::kDanglingBranchTarget: return "DanglingBranchTarget";
    case ErrorCode::kMainClassNotFound: return "MainClassNotFound";
    case ErrorCode::kClassResolutionError: return "ClassResolutionError";
    case ErrorCode::kInconsistentModel: return "InconsistentModel";
    case ErrorCode::kSerializationVersionMismatch:
      return "SerializationVersionMismatch";
    case ErrorCode::kCorruptModelFile: return "CorruptModelFile";
    case ErrorCode::kUnknownLoopHead: return "UnknownLoopHead";
    case ErrorCode::kInvalidBounds: return "InvalidBounds";
    case ErrorCode::kIndirectRecursion: return "IndirectRecursion";
    case ErrorCode::kCyclicCallGraph: return "CyclicCallGraph";
    case ErrorCode::kUntimedInstruction: return "UntimedInstruction";
    case ErrorCode::kUnlimitedLoop: return "UnlimitedLoop";
    case ErrorCode::kUnmangledIdentifier: return "UnmangledIdentifier";
    case ErrorCode::kDanglingReference: return "DanglingReference";
    case ErrorCode::kXmlSyntaxError: return "XmlSyntaxError";
    case ErrorCode::kUnsupportedConstruct: return "UnsupportedConstruct";
    case ErrorCode::kUnsupportedQuery: return "UnsupportedQuery";
    case ErrorCode::kStateLimitExceeded: return "StateLimitExceeded";
    case ErrorCode::kBoundExceedsCap: return "BoundExceedsCap";
    case ErrorCode::kNonTerminatingMain: return "NonTerminatingMain";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

namespace {

constexpr std::array<std::pair<InstrKind, std::string_view>, 10> kKindNames{{
    {InstrKind::kSequential, "sequential"},
    {InstrKind::kCondBranch, "cond_branch"},
    {InstrKind::kGoto, "goto"},
    {InstrKind::kSwitch, "switch"},
    {InstrKind::kInvoke, "invoke"},
    {InstrKind::kReturn, "return"},
    {InstrKind::kThrow, "throw"},
    {InstrKind::kTerminal, "terminal"},
    {InstrKind::kDummy, "dummy"},
    {InstrKind::kGroup, "group"},
}};

constexpr std::array<std::pair<Dispatch, std::string_view>, 4> kDispatchNames{{
    {Dispatch::kStatic, "static"},
    {Dispatch::kVirtual, "virtual"},
    {Dispatch::kSpecial, "special"},
    {Dispatch::kInterface, "interface"},
}};

// See the JVM specification, chapter 6, for the numbering.
constexpr std::array<frontend::OpcodeInfo, 202> kOpcodes{{
    {0x00, "nop", InstrKind::kSequential, true},
    {0x01, "aconst_null", InstrKind::kSequential, true},
    {0x02, "iconst_m1", InstrKind::kSequential, true},
    {0x03, "iconst_0", InstrKind::kSequential, true},
    {0x04, "iconst_1", InstrKind::kSequential, true},
    {0x05, "iconst_2", InstrKind::kSequential, true},
    {0x06, "iconst_3", InstrKind::kSequential, true},
    {0x07, "iconst_4", InstrKind::kSequential, true},
    {0x08, "iconst_5", InstrKind::kSequential, true},
    {0x09, "lconst_0", InstrKind::kSequential, true},
    {0x0a, "lconst_1", InstrKind::kSequential, true},
    {0x0b, "fconst_0", InstrKind::kSequential, true},
    {0x0c, "fconst_1", InstrKind::kSequential, true},
    {0x0d, "fconst_2", InstrKind::kSequential, true},
    {0x0e, "dconst_0", InstrKind::kSequential, true},
    {0x0f, "dconst_1", InstrKind::kSequential, true},
    {0x10, "bipush", InstrKind::kSequential, true},
    {0x11, "sipush", InstrKind::kSequential, true},
    {0x12, "ldc", InstrKind::kSequential, true},
    {0x13, "ldc_w", InstrKind::kSequential, true},
    {0x14, "ldc2_w", InstrKind::kSequential, true},
    {0x15, "iload", InstrKind::kSequential, true},
    {0x16, "lload", InstrKind::kSequential, true},
    {0x17, "fload", InstrKind::kSequential, true},
    {0x18, "dload", InstrKind::kSequential, true},
    {0x19, "aload", InstrKind::kSequential, true},
    {0x1a, "iload_0", InstrKind::kSequential, true},
    {0x1b, "iload_1", InstrKind::kSequential, true},
    {0x1c, "iload_2", InstrKind::kSequential, true},
    {0x1d, "iload_3", InstrKind::kSequential, true},
    {0x1e, "lload_0", InstrKind::kSequential, true},
    {0x1f, "lload_1", InstrKind::kSequential, true},
    {0x20, "lload_2", InstrKind::kSequential, true},
    {0x21, "lload_3", InstrKind::kSequential, true},
    {0x22, "fload_0", InstrKind::kSequential, true},
    {0x23, "fload_1", InstrKind::kSequential, true},
    {0x24, "fload_2", InstrKind::kSequential, true},
    {0x25, "fload_3", InstrKind::kSequential, true},
    {0x26, "dload_0", InstrKind::kSequential, true},
    {0x27, "dload_1", InstrKind::kSequential, true},
    {0x28, "dload_2", InstrKind::kSequential, true},
    {0x29, "dload_3", InstrKind::kSequential, true},
    {0x2a, "aload_0", InstrKind::kSequential, true},
    {0x2b, "aload_1", InstrKind::kSequential, true},
    {0x2c, "aload_2", InstrKind::kSequential, true},
    {0x2d, "aload_3", InstrKind::kSequential, true},
    {0x2e, "iaload", InstrKind::kSequential, true},
    {0x2f, "laload", InstrKind::kSequential, true},
    {0x30, "faload", InstrKind::kSequential, true},
    {0x31, "daload", InstrKind::kSequential, true},
    {0x32, "aaload", InstrKind::kSequential, true},
    {0x33, "baload", InstrKind::kSequential, true},
    {0x34, "caload", InstrKind::kSequential, true},
    {0x35, "saload", InstrKind::kSequential, true},
    {0x36, "istore", InstrKind::kSequential, true},
    {0x37, "lstore", InstrKind::kSequential, true},
    {0x38, "fstore", InstrKind::kSequential, true},
    {0x39, "dstore", InstrKind::kSequential, true},
    {0x3a, "astore", InstrKind::kSequential, true},
    {0x3b, "istore_0", InstrKind::kSequential, true},
    {0x3c, "istore_1", InstrKind::kSequential, true},
    {0x3d, "istore_2", InstrKind::kSequential, true},
    {0x3e, "istore_3", InstrKind::kSequential, true},
    {0x3f, "lstore_0", InstrKind::kSequential, true},
    {0x40, "lstore_1", InstrKind::kSequential, true},
    {0x41, "lstore_2", InstrKind::kSequential, true},
    {0x42, "lstore_3", InstrKind::kSequential, true},
    {0x43, "fstore_0", InstrKind::kSequential, true},
    {0x44, "fstore_1", InstrKind::kSequential, true},
    {0x45, "fstore_2", InstrKind::kSequential, true},
    {0x46, "fstore_3", InstrKind::kSequential, true},
    {0x47, "dstore_0", InstrKind::kSequential, true},
    {0x48, "dstore_1", InstrKind::kSequential, true},
    {0x49, "dstore_2", InstrKind::kSequential, true},
    {0x4a, "dstore_3", InstrKind::kSequential, true},
    {0x4b, "astore_0", InstrKind::kSequential, true},
    {0x4c, "astore_1", InstrKind::kSequential, true},
    {0x4d, "astore_2", InstrKind::kSequential, true},
    {0x4e, "astore_3", InstrKind::kSequential, true},
    {0x4f, "iastore", InstrKind::kSequential, true},
    {0x50, "lastore", InstrKind::kSequential, true},
    {0x51, "fastore", InstrKind::kSequential, true},
    {0x52, "dastore", InstrKind::kSequential, true},
    {0x53, "aastore", InstrKind::kSequential, true},
    {0x54, "bastore", InstrKind::kSequential, true},
    {0x55, "castore", InstrKind::kSequential, true},
    {0x56, "sastore", InstrKind::kSequential, true},
    {0x57, "pop", InstrKind::kSequential, true},
    {0x58, "pop2", InstrKind::kSequential, true},
    {0x59, "dup", InstrKind::kSequential, true},
    {0x5a, "dup_x1", InstrKind::kSequential, true},
    {0x5b, "dup_x2", InstrKind::kSequential, true},
    {0x5c, "dup2", InstrKind::kSequential, true},
    {0x5d, "dup2_x1", InstrKind::kSequential, true},
    {0x5e, "dup2_x2", InstrKind::kSequential, true},
    {0x5f, "swap", InstrKind::kSequential, true},
    {0x60, "iadd", InstrKind::kSequential, true},
    {0x61, "ladd", InstrKind::kSequential, true},
    {0x62, "fadd", InstrKind::kSequential, true},
    {0x63, "dadd", InstrKind::kSequential, true},
    {0x64, "isub", InstrKind::kSequential, true},
    {0x65, "lsub", InstrKind::kSequential, true},
    {0x66, "fsub", InstrKind::kSequential, true},
    {0x67, "dsub", InstrKind::kSequential, true},
    {0x68, "imul", InstrKind::kSequential, true},
    {0x69, "lmul", InstrKind::kSequential, true},
    {0x6a, "fmul", InstrKind::kSequential, true},
    {0x6b, "dmul", InstrKind::kSequential, true},
    {0x6c, "idiv", InstrKind::kSequential, true},
    {0x6d, "ldiv", InstrKind::kSequential, true},
    {0x6e, "fdiv", InstrKind::kSequential, true},
    {0x6f, "ddiv", InstrKind::kSequential, true},
    {0x70, "irem", InstrKind::kSequential, true},
    {0x71, "lrem", InstrKind::kSequential, true},
    {0x72, "frem", InstrKind::kSequential, true},
    {0x73, "drem", InstrKind::kSequential, true},
    {0x74, "ineg", InstrKind::kSequential, true},
    {0x75, "lneg", InstrKind::kSequential, true},
    {0x76, "fneg", InstrKind::kSequential, true},
    {0x77, "dneg", InstrKind::kSequential, true},
    {0x78, "ishl", InstrKind::kSequential, true},
    {0x79, "lshl", InstrKind::kSequential, true},
    {0x7a, "ishr", InstrKind::kSequential, true},
    {0x7b, "lshr", InstrKind::kSequential, true},
    {0x7c, "iushr", InstrKind::kSequential, true},
    {0x7d, "lushr", InstrKind::kSequential, true},
    {0x7e, "iand", InstrKind::kSequential, true},
    {0x7f, "land", InstrKind::kSequential, true},
    {0x80, "ior", InstrKind::kSequential, true},
    {0x81, "lor", InstrKind::kSequential, true},
    {0x82, "ixor", InstrKind::kSequential, true},
    {0x83, "lxor", InstrKind::kSequential, true},
    {0x84, "iinc", InstrKind::kSequential, true},
    {0x85, "i2l", InstrKind::kSequential, true},
    {0x86, "i2f", InstrKind::kSequential, true},
    {0x87, "i2d", InstrKind::kSequential, true},
    {0x88, "l2i", InstrKind::kSequential, true},
    {0x89, "l2f", InstrKind::kSequential, true},
    {0x8a, "l2d", InstrKind::kSequential, true},
    {0x8b, "f2i", InstrKind::kSequential, true},
    {0x8c, "f2l", InstrKind::kSequential, true},
    {0x8d, "f2d", InstrKind::kSequential, true},
    {0x8e, "d2i", InstrKind::kSequential, true},
    {0x8f, "d2l", InstrKind::kSequential, true},
    {0x90, "d2f", InstrKind::kSequential, true},
    {0x91, "i2b", InstrKind::kSequential, true},
    {0x92, "i2c", InstrKind::kSequential, true},
    {0x93, "i2s", InstrKind::kSequential, true},
    {0x94, "lcmp", InstrKind::kSequential, true},
    {0x95, "fcmpl", InstrKind::kSequential, true},
    {0x96, "fcmpg", InstrKind::kSequential, true},
    {0x97, "dcmpl", InstrKind::kSequential, true},
    {0x98, "dcmpg", InstrKind::kSequential, true},
    {0x99, "ifeq", InstrKind::kCondBranch, true},
    {0x9a, "ifne", InstrKind::kCondBranch, true},
    {0x9b, "iflt", InstrKind::kCondBranch, true},
    {0x9c, "ifge", InstrKind::kCondBranch, true},
    {0x9d, "ifgt", InstrKind::kCondBranch, true},
    {0x9e, "ifle", InstrKind::kCondBranch, true},
    {0x9f, "if_icmpeq", InstrKind::kCondBranch, true},
    {0xa0, "if_icmpne", InstrKind::kCondBranch, true},
    {0xa1, "if_icmplt", InstrKind::kCondBranch, true},
    {0xa2, "if_icmpge", InstrKind::kCondBranch, true},
    {0xa3, "if_icmpgt", InstrKind::kCondBranch, true},
    {0xa4, "if_icmple", InstrKind::kCondBranch, true},
    {0xa5, "if_acmpeq", InstrKind::kCondBranch, true},
    {0xa6, "if_acmpne", InstrKind::kCondBranch, true},
    {0xa7, "goto", InstrKind::kGoto, true},
    {0xa8, "jsr", InstrKind::kSequential, false},
    {0xa9, "ret", InstrKind::kSequential, false},
    {0xaa, "tableswitch", InstrKind::kSwitch, true},
    {0xab, "lookupswitch", InstrKind::kSwitch, true},
    {0xac, "ireturn", InstrKind::kReturn, true},
    {0xad, "lreturn", InstrKind::kReturn, true},
    {0xae, "freturn", InstrKind::kReturn, true},
    {0xaf, "dreturn", InstrKind::kReturn, true},
    {0xb0, "areturn", InstrKind::kReturn, true},
    {0xb1, "return", InstrKind::kReturn, true},
    {0xb2, "getstatic", InstrKind::kSequential, true},
    {0xb3, "putstatic", InstrKind::kSequential, true},
    {0xb4, "getfield", InstrKind::kSequential, true},
    {0xb5, "putfield", InstrKind::kSequential, true},
    {0xb6, "invokevirtual", InstrKind::kInvoke, true},
    {0xb7, "invokespecial", InstrKind::kInvoke, true},
    {0xb8, "invokestatic", InstrKind::kInvoke, true},
    {0xb9, "invokeinterface", InstrKind::kInvoke, true},
    {0xba, "invokedynamic", InstrKind::kInvoke, false},
    {0xbb, "new", InstrKind::kSequential, true},
    {0xbc, "newarray", InstrKind::kSequential, true},
    {0xbd, "anewarray", InstrKind::kSequential, true},
    {0xbe, "arraylength", InstrKind::kSequential, true},
    {0xbf, "athrow", InstrKind::kThrow, true},
    {0xc0, "checkcast", InstrKind::kSequential, true},
    {0xc1, "instanceof", InstrKind::kSequential, true},
    {0xc2, "monitorenter", InstrKind::kSequential, true},
    {0xc3, "monitorexit", InstrKind::kSequential, true},
    {0xc4, "wide", InstrKind::kSequential, true},
    {0xc5, "multianewarray", InstrKind::kSequential, true},
    {0xc6, "ifnull", InstrKind::kCondBranch, true},
    {0xc7, "ifnonnull", InstrKind::kCondBranch, true},
    {0xc8, "goto_w", InstrKind::kGoto, true},
    {0xc9, "jsr_w", InstrKind::kSequential, false},
}};

}  // namespace

std::string_view to_string(InstrKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "sequential";
}

std::optional<InstrKind> instr_kind_from_string(std::string_view text) {
  for (const auto& [k, name] : kKindNames) {
    if (name == text) return k;
  }
  return std::nullopt;
}

std::string_view to_string(Dispatch dispatch) {
  for (const auto& [d, name] : kDispatchNames) {
    if (d == dispatch) return name;
  }
  return "static";
}

std::optional<Dispatch> dispatch_from_string(std::string_view text) {
  for (const auto& [d, name] : kDispatchNames) {
    if (name == text) return d;
  }
  return std::nullopt;
}

namespace frontend {

std::span<const OpcodeInfo> opcode_table() { return kOpcodes; }

const OpcodeInfo* find_opcode(std::string_view mnemonic) {
  auto it = std::find_if(kOpcodes.begin(), kOpcodes.end(),
                         [&](const OpcodeInfo& op) { return op.mnemonic == mnemonic; });
  return it == kOpcodes.end() ? nullptr : &*it;
}

}  // namespace frontend
}  // namespace bc2ta
