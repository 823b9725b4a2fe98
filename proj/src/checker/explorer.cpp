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
// explorer.cpp -- breadth-first state-space search over a compiled network.

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <sstream>
#include <unordered_set>

#include "bc2ta/checker.hpp"
#include "bc2ta/error.hpp"
#include "network.hpp"

namespace bc2ta::check {

using detail::Network;
using detail::State;
using detail::Step;
using detail::Successor;
using detail::Value;

uint64_t state_limit_from_env(uint64_t fallback) {
  const char* text = std::getenv("BC2TA_STATE_LIMIT");
  if (text == nullptr || *text == '\0') return fallback;
  uint64_t v = 0;
  const char* end = text + std::strlen(text);
  auto [ptr, ec] = std::from_chars(text, end, v);
  if (ec != std::errc() || ptr != end || v == 0) return fallback;
  return v;
}

namespace {

// Stores fixed-width states contiguously and deduplicates them by index.
class StateStore {
 public:
  explicit StateStore(size_t width)
      : width_(width), index_(1024, Hash{this}, Eq{this}) {}

  size_t size() const { return count_; }
  State get(uint32_t i) const {
    return State(data_.begin() + static_cast<ptrdiff_t>(i * width_),
                 data_.begin() + static_cast<ptrdiff_t>((i + 1) * width_));
  }

  // Returns the index and whether the state is new.
  std::pair<uint32_t, bool> insert(const State& s) {
    data_.insert(data_.end(), s.begin(), s.end());
    auto [it, fresh] = index_.insert(static_cast<uint32_t>(count_));
    if (!fresh) {
      data_.resize(count_ * width_);
      return {*it, false};
    }
    return {static_cast<uint32_t>(count_++), true};
  }

 private:
  const Value* at(uint32_t i) const { return data_.data() + static_cast<size_t>(i) * width_; }

  struct Hash {
    const StateStore* store;
    size_t operator()(uint32_t i) const {
      const Value* p = store->at(i);
      uint64_t h = 0x9e3779b97f4a7c15ULL;
      for (size_t k = 0; k < store->width_; ++k) {
        h ^= static_cast<uint32_t>(p[k]);
        h *= 0xff51afd7ed558ccdULL;
        h ^= h >> 32;
      }
      return static_cast<size_t>(h);
    }
  };
  struct Eq {
    const StateStore* store;
    bool operator()(uint32_t a, uint32_t b) const {
      return std::memcmp(store->at(a), store->at(b), store->width_ * sizeof(Value)) == 0;
    }
  };

  size_t width_;
  size_t count_ = 0;
  std::vector<Value> data_;
  std::unordered_set<uint32_t, Hash, Eq> index_;
};

struct Parent {
  uint32_t from = 0;
  uint32_t delay = 0;  // delay units taken at `from` before the step
  Step step;
};

// Where the search stopped: stored state plus delay units from it.
struct Hit {
  uint32_t stored = 0;
  uint32_t delay = 0;
};

class Search {
 public:
  Search(const Network& net, bool symmetry, uint64_t limit)
      : net_(net), symmetry_(symmetry && net.has_symmetry()), limit_(limit), store_(net.width()) {}

  // `visit(state, deadlocked)` returns true to stop the search.
  std::optional<Hit> run(const std::function<bool(const State&, bool)>& visit) {
    State init = net_.initial();
    if (symmetry_) net_.canonicalize(init);
    store_.insert(init);
    parents_.push_back({});
    std::vector<State> chain;
    std::vector<std::vector<Successor>> succ;
    for (uint32_t i = 0; i < store_.size(); ++i) {
      chain.assign(1, store_.get(i));
      bool saturated = false;  // time may pass forever from the last point
      while (auto d = net_.delayed(chain.back())) {
        if (*d == chain.back()) {
          saturated = true;
          break;
        }
        chain.push_back(std::move(*d));
      }
      succ.assign(chain.size(), {});
      for (size_t j = 0; j < chain.size(); ++j) net_.successors(chain[j], succ[j]);
      for (size_t j = 0; j < chain.size(); ++j) {
        if (j > 0) ++stats_.delay_states;
        const bool can_delay = j + 1 < chain.size() || saturated;
        if (visit(chain[j], succ[j].empty() && !can_delay)) return Hit{i, static_cast<uint32_t>(j)};
      }
      for (size_t j = 0; j < chain.size(); ++j) {
        for (auto& s : succ[j]) {
          ++stats_.transitions;
          if (symmetry_) net_.canonicalize(s.state);
          auto [index, fresh] = store_.insert(s.state);
          if (!fresh) continue;
          parents_.push_back({i, static_cast<uint32_t>(j), s.step});
          if (store_.size() > limit_) {
            throw Error(ErrorCode::kStateLimitExceeded,
                        "state limit of " + std::to_string(limit_) + " stored states exceeded");
          }
        }
      }
      stats_.max_frontier = std::max<uint64_t>(stats_.max_frontier, store_.size() - i - 1);
    }
    return std::nullopt;
  }

  StateSpaceStats stats() const {
    StateSpaceStats s = stats_;
    s.states = store_.size();
    s.symmetry_reduced = symmetry_;
    return s;
  }

  // Actions and delays leading from the initial state to `hit`.
  std::vector<std::pair<uint32_t, Step>> path_to(uint32_t stored) const {
    std::vector<std::pair<uint32_t, Step>> out;
    for (uint32_t k = stored; k != 0; k = parents_[k].from) out.emplace_back(parents_[k].delay, parents_[k].step);
    std::reverse(out.begin(), out.end());
    return out;
  }

 private:
  const Network& net_;
  bool symmetry_;
  uint64_t limit_;
  StateStore store_;
  std::vector<Parent> parents_;
  StateSpaceStats stats_;
};

int64_t clock_of(const Network& net, const State& s) {
  auto g = net.global_clock_slot();
  return g ? s[*g] : 0;
}

TraceStep delay_step(const Network& net, const State& s, int64_t d) {
  TraceStep t;
  t.kind = StepKind::kDelay;
  t.delay = d;
  t.locations = net.location_vector(s);
  t.global_clock = clock_of(net, s);
  return t;
}

TraceStep action_step(const Network& net, const State& s, const Step& step) {
  TraceStep t;
  const auto& insts = net.instances();
  const auto& ea = insts[step.inst_a].edges[step.edge_a];
  t.kind = step.inst_b >= 0 ? StepKind::kSync : StepKind::kInternal;
  if (step.inst_b >= 0) {
    t.channel = net.channel_name(ea.channel);
    t.receiver = insts[step.inst_b].name;
  }
  t.sender = insts[step.inst_a].name;
  t.locations = net.location_vector(s);
  t.global_clock = clock_of(net, s);
  return t;
}

// Rebuilds a concrete trace by replaying the recorded path without symmetry.
// The replay network lets the global clock run past its search saturation
// point so the trace reports real elapsed time.
Trace build_trace(const ta::TaSystem& system, const Search& search, const Hit& hit) {
  const auto path = search.path_to(hit.stored);
  int64_t elapsed = hit.delay;
  for (const auto& p : path) elapsed += p.first;
  const Network net(system, {}, elapsed);
  Trace trace;
  State s = net.initial();
  trace.initial_locations = net.location_vector(s);
  auto advance = [&](uint32_t d) {
    if (d == 0) return;
    for (uint32_t k = 0; k < d; ++k) s = *net.delayed(s);
    trace.steps.push_back(delay_step(net, s, d));
  };
  for (const auto& [delay, step] : path) {
    advance(delay);
    s = *net.fire(s, step);
    trace.steps.push_back(action_step(net, s, step));
  }
  advance(hit.delay);
  return trace;
}

Verdict run_query(const ta::TaSystem& system, const ta::Query& query, const CheckOptions& options) {
  if (query.kind == ta::QueryKind::kLeadsTo) {
    throw Error(ErrorCode::kUnsupportedQuery, "leads-to queries are not supported by the built-in checker");
  }
  Network net(system, {query.expression}, 0);
  const auto& formula = net.formulas().front();
  const bool invariant = query.kind == ta::QueryKind::kInvariant;
  auto visit = [&](const State& s, bool dl) { return net.eval_bool(formula, s, dl) != invariant; };

  Search search(net, options.symmetry, options.state_limit);
  const auto hit = search.run(visit);
  Verdict v;
  v.satisfied = invariant ? !hit : hit.has_value();
  v.states_explored = search.stats().states;
  if (hit && options.want_trace) {
    if (search.stats().symmetry_reduced) {
      Search plain(net, false, options.state_limit);
      const auto again = plain.run(visit);
      v.witness = build_trace(system, plain, *again);
    } else {
      v.witness = build_trace(system, search, *hit);
    }
  }
  return v;
}

}  // namespace

StateSpaceStats explore(const ta::TaSystem& system, const ExploreOptions& options) {
  Network net(system, {}, options.global_cap);
  Search search(net, options.symmetry, options.state_limit);
  search.run([](const State&, bool) { return false; });
  return search.stats();
}

Verdict check(const ta::TaSystem& system, const ta::Query& query, const CheckOptions& options) {
  return run_query(system, query, options);
}

int64_t min_wcet_bound(const ta::TaSystem& system, int64_t cap, const CheckOptions& options) {
  if (cap < 0) throw Error(ErrorCode::kInvalidArgument, "cap must be non-negative");
  const std::string finish = std::string(ta::kControllerName) + ".finish";
  Network net(system, {finish}, cap);
  if (!net.global_clock_slot()) {
    throw Error(ErrorCode::kDanglingReference, "system has no global clock");
  }
  const auto& formula = net.formulas().front();
  std::optional<int64_t> worst;
  Search search(net, options.symmetry, options.state_limit);
  search.run([&](const State& s, bool) {
    if (net.eval_bool(formula, s, false)) worst = std::max(worst.value_or(0), clock_of(net, s));
    return false;
  });
  if (!worst) throw Error(ErrorCode::kNonTerminatingMain, "controller.finish is unreachable");
  if (*worst > cap) {
    throw Error(ErrorCode::kBoundExceedsCap, "worst-case bound exceeds the cap of " + std::to_string(cap));
  }
  return *worst;
}

bool replay_trace(const ta::TaSystem& system, const Trace& trace) {
  // The recorded clock values must stay below the saturation point.
  int64_t highest = 0;
  for (const auto& t : trace.steps) highest = std::max(highest, t.global_clock);
  Network net(system, {}, highest);
  State s = net.initial();
  if (net.location_vector(s) != trace.initial_locations) return false;
  const auto& insts = net.instances();
  auto find_instance = [&](const std::string& name) -> int32_t {
    for (size_t i = 0; i < insts.size(); ++i) {
      if (insts[i].name == name) return static_cast<int32_t>(i);
    }
    return -1;
  };
  for (const auto& t : trace.steps) {
    if (t.kind == StepKind::kDelay) {
      if (t.delay < 1) return false;
      for (int64_t k = 0; k < t.delay; ++k) {
        auto d = net.delayed(s);
        if (!d) return false;
        s = std::move(*d);
      }
    } else {
      std::vector<Successor> succ;
      net.successors(s, succ);
      const int32_t a = find_instance(t.sender);
      const int32_t b = t.kind == StepKind::kSync ? find_instance(t.receiver) : -1;
      const auto match = std::find_if(succ.begin(), succ.end(), [&](const Successor& c) {
        if (c.step.inst_a != a || c.step.inst_b != b) return false;
        if (b >= 0 && net.channel_name(insts[a].edges[c.step.edge_a].channel) != t.channel) return false;
        return net.location_vector(c.state) == t.locations;
      });
      if (match == succ.end()) return false;
      s = match->state;
    }
    if (net.location_vector(s) != t.locations || clock_of(net, s) != t.global_clock) return false;
  }
  return true;
}

std::string Trace::to_text() const {
  auto join = [](const std::vector<std::string>& v) {
    std::string out = "(";
    for (size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + v[i];
    return out + ")";
  };
  std::ostringstream os;
  os << "initial " << join(initial_locations) << "\n";
  for (const auto& s : steps) {
    switch (s.kind) {
      case StepKind::kDelay: os << "delay " << s.delay; break;
      case StepKind::kSync: os << "sync " << s.channel << " " << s.sender << " -> " << s.receiver; break;
      case StepKind::kInternal: os << "step " << s.sender; break;
    }
    os << " " << join(s.locations) << " globalClock=" << s.global_clock << "\n";
  }
  return os.str();
}

}  // namespace bc2ta::check
