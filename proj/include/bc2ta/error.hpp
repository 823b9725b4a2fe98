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
// error.hpp -- library error codes and the exception that carries them.

#ifndef BC2TA_ERROR_HPP_
#define BC2TA_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace bc2ta {

enum class ErrorCode {
  kMalformedClassFile,
  kUnsupportedVersion,
  kUnsupportedOpcode,
  kSyntaxError,
  kDuplicateOffset,
  kDanglingBranchTarget,
  kMainClassNotFound,
  kClassResolutionError,
  kInconsistentModel,
  kSerializationVersionMismatch,
  kCorruptModelFile,
  kUnknownLoopHead,
  kInvalidBounds,
  kIndirectRecursion,
  kCyclicCallGraph,
  kUntimedInstruction,
  kUnlimitedLoop,
  kUnmangledIdentifier,
  kDanglingReference,
  kXmlSyntaxError,
  kUnsupportedConstruct,
  kUnsupportedQuery,
  kStateLimitExceeded,
  kBoundExceedsCap,
  kNonTerminatingMain,
  kInvalidArgument,
  kIo,
};

std::string_view error_code_name(ErrorCode code);

// All library failures surface as this exception; the C API turns it into a
// status code plus a thread-local message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace bc2ta

#endif  // BC2TA_ERROR_HPP_
