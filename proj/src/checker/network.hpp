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
// network.hpp -- a timed-automata system compiled to flat integer states:
// one slot per instance location, then bounded integers, then clocks.

#ifndef BC2TA_CHECKER_NETWORK_HPP_
#define BC2TA_CHECKER_NETWORK_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bc2ta/expr.hpp"
#include "bc2ta/tamodel.hpp"

namespace bc2ta::check::detail {

using Value = int32_t;
using State = std::vector<Value>;

enum class Op : uint8_t {
  kConst, kSlot, kLocIs, kDeadlock, kNot, kNeg, kAdd, kSub, kMul, kDiv, kMod,
  kLt, kLe, kEq, kNe, kGe, kGt, kAnd, kOr, kImply,
};

struct Node {
  Op op = Op::kConst;
  int64_t value = 0;   // kConst
  int32_t slot = -1;   // kSlot; kLocIs: instance
  int32_t loc = -1;    // kLocIs
  std::vector<Node> kids;
};

struct CAssign {
  int32_t slot = 0;
  Node value;
  int64_t lo = 0;
  int64_t hi = 0;
};

struct CEdge {
  int32_t source = 0;
  int32_t target = 0;
  std::optional<Node> guard;
  int32_t channel = -1;
  bool send = false;
  std::vector<CAssign> assigns;
};

struct CLocation {
  std::string name;
  bool committed = false;
  bool urgent = false;
  std::optional<Node> invariant;
  std::vector<int32_t> out;          // edge indices
  std::vector<int32_t> dead_clocks;  // local clock slots not read before reset
};

struct Instance {
  std::string name;
  int32_t template_index = 0;
  std::vector<CLocation> locations;
  std::vector<CEdge> edges;
  int32_t initial = 0;
  std::vector<int32_t> local_slots;  // integers then clocks
  bool uses_parameter = false;
};

// Identifies an action transition by its participants.
struct Step {
  int32_t inst_a = -1;
  int32_t edge_a = -1;
  int32_t inst_b = -1;  // receiver, -1 for internal transitions
  int32_t edge_b = -1;
};

struct Successor {
  State state;
  Step step;
};

class Network {
 public:
  // `formulas` are state predicates (query bodies) compiled alongside the
  // model so their clock constants take part in clock saturation.
  Network(const ta::TaSystem& system, const std::vector<std::string>& formulas,
          int64_t global_cap_floor);

  size_t width() const { return width_; }
  const std::vector<Instance>& instances() const { return instances_; }
  const std::vector<Node>& formulas() const { return formulas_; }
  const std::string& channel_name(int32_t c) const { return channels_[c]; }
  std::optional<int32_t> global_clock_slot() const { return global_clock_; }
  Value cap(int32_t slot) const { return caps_[slot]; }

  State initial() const;
  // One time unit later, or nothing when time may not pass.
  std::optional<State> delayed(const State& s) const;
  void successors(const State& s, std::vector<Successor>& out) const;
  // Applies one specific transition; nothing when it is not enabled.
  std::optional<State> fire(const State& s, const Step& step) const;

  bool eval_bool(const Node& n, const State& s, bool deadlocked) const {
    return eval(n, s.data(), deadlocked) != 0;
  }
  bool has_symmetry() const { return !symmetric_groups_.empty(); }
  void canonicalize(State& s) const;
  std::vector<std::string> location_vector(const State& s) const;

 private:
  int64_t eval(const Node& n, const Value* s, bool deadlocked) const;
  bool invariants_hold(const State& s) const;
  bool apply(State& s, const std::vector<CAssign>& assigns) const;
  void normalize(State& s) const;
  bool committed_somewhere(const State& s) const;

  std::vector<Instance> instances_;
  std::vector<std::string> channels_;
  std::vector<Node> formulas_;
  std::vector<Value> caps_;            // per slot; 0 for non-clocks
  std::vector<Value> int_init_;        // initial values by slot
  std::vector<char> is_clock_;
  std::optional<int32_t> global_clock_;
  std::vector<std::vector<std::pair<int32_t, int32_t>>> receivers_;  // channel -> (instance, edge)
  std::vector<std::vector<int32_t>> symmetric_groups_;              // instance indices
  size_t width_ = 0;
};

}  // namespace bc2ta::check::detail

#endif  // BC2TA_CHECKER_NETWORK_HPP_
