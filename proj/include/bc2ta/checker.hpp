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
// checker.hpp -- explicit-state, discrete-time verification of generated
// timed-automata networks.
//
// Stored states are the initial state and every state reached by an action
// transition. From each stored state the checker walks the unit-delay chain
// (until an invariant, an urgent/committed location or clock saturation
// stops it) and takes action transitions from every point of that chain.
// Predicates and deadlock are evaluated at every chain point, so verdicts
// are exact for integer time; only the stored states are counted.

#ifndef BC2TA_CHECKER_HPP_
#define BC2TA_CHECKER_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bc2ta/tamodel.hpp"

namespace bc2ta::check {

inline constexpr uint64_t kDefaultStateLimit = 10'000'000;

// Reads BC2TA_STATE_LIMIT; returns `fallback` when unset or unparsable.
uint64_t state_limit_from_env(uint64_t fallback = kDefaultStateLimit);

struct ExploreOptions {
  bool symmetry = false;
  int64_t global_cap = 0;  // global clocks saturate at global_cap + 1
  uint64_t state_limit = kDefaultStateLimit;
};

struct StateSpaceStats {
  uint64_t states = 0;        // distinct stored states
  uint64_t transitions = 0;   // action transitions taken
  uint64_t delay_states = 0;  // intermediate unit-delay points visited
  uint64_t max_frontier = 0;
  bool symmetry_reduced = false;

  bool operator==(const StateSpaceStats&) const = default;
};

StateSpaceStats explore(const ta::TaSystem& system, const ExploreOptions& options = {});

enum class StepKind { kDelay, kSync, kInternal };

struct TraceStep {
  StepKind kind = StepKind::kDelay;
  int64_t delay = 0;
  std::string channel;
  std::string sender;    // acting instance for kInternal
  std::string receiver;
  std::vector<std::string> locations;  // "Instance.location" after the step
  int64_t global_clock = 0;            // first global clock, if any

  bool operator==(const TraceStep&) const = default;
};

struct Trace {
  std::vector<std::string> initial_locations;
  std::vector<TraceStep> steps;

  std::string to_text() const;
};

struct Verdict {
  bool satisfied = false;
  std::optional<Trace> witness;  // counterexample for A[], witness for E<>
  uint64_t states_explored = 0;
};

struct CheckOptions {
  bool symmetry = false;
  uint64_t state_limit = kDefaultStateLimit;
  bool want_trace = true;
};

// Supports A[] and E<> queries; leads-to is kUnsupportedQuery.
Verdict check(const ta::TaSystem& system, const ta::Query& query, const CheckOptions& options = {});

// Least x <= cap with A[] (controller.finish imply globalClock <= x).
int64_t min_wcet_bound(const ta::TaSystem& system, int64_t cap, const CheckOptions& options = {});

// Re-executes a trace from the initial state; true when every step is
// enabled and yields the recorded location vector and global clock.
bool replay_trace(const ta::TaSystem& system, const Trace& trace);

}  // namespace bc2ta::check

#endif  // BC2TA_CHECKER_HPP_
