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
// network.cpp -- compilation of a TaSystem into slot-addressed expressions
// and the single-step semantics (delay, internal and binary-sync actions).

#include "network.hpp"

#include <algorithm>
#include <climits>
#include <map>
#include <set>

#include "bc2ta/error.hpp"

namespace bc2ta::check::detail {
namespace {

[[noreturn]] void unsupported(const std::string& what) {
  throw Error(ErrorCode::kUnsupportedConstruct, what);
}

struct Sym {
  enum Kind { kConst, kInt, kClock, kChannel, kScalar, kParameter } kind = kConst;
  int64_t value = 0;  // constants, scalar sizes, parameter value
  int32_t index = 0;  // integer or clock number, channel number
};

using Table = std::map<std::string, Sym>;

constexpr int64_t kIntMin = -32768;
constexpr int64_t kIntMax = 32767;

struct IntVar {
  int64_t init = 0;
  int64_t lo = kIntMin;
  int64_t hi = kIntMax;
};

bool is_comparison(Op op) {
  return op == Op::kLt || op == Op::kLe || op == Op::kEq || op == Op::kNe || op == Op::kGe || op == Op::kGt;
}

Op binary_op(ta::ExprOp op) {
  switch (op) {
    case ta::ExprOp::kAdd: return Op::kAdd;
    case ta::ExprOp::kSub: return Op::kSub;
    case ta::ExprOp::kMul: return Op::kMul;
    case ta::ExprOp::kDiv: return Op::kDiv;
    case ta::ExprOp::kMod: return Op::kMod;
    case ta::ExprOp::kLt: return Op::kLt;
    case ta::ExprOp::kLe: return Op::kLe;
    case ta::ExprOp::kEq: return Op::kEq;
    case ta::ExprOp::kNe: return Op::kNe;
    case ta::ExprOp::kGe: return Op::kGe;
    case ta::ExprOp::kGt: return Op::kGt;
    case ta::ExprOp::kAnd: return Op::kAnd;
    case ta::ExprOp::kOr: return Op::kOr;
    case ta::ExprOp::kImply: return Op::kImply;
    default: unsupported("not a binary operator");
  }
}

int64_t fold(Op op, const std::vector<Node>& k) {
  auto a = [&](size_t i) { return k[i].value; };
  switch (op) {
    case Op::kNot: return !a(0);
    case Op::kNeg: return -a(0);
    case Op::kAdd: return a(0) + a(1);
    case Op::kSub: return a(0) - a(1);
    case Op::kMul: return a(0) * a(1);
    case Op::kDiv:
    case Op::kMod:
      if (a(1) == 0) unsupported("division by zero in constant expression");
      return op == Op::kDiv ? a(0) / a(1) : a(0) % a(1);
    case Op::kLt: return a(0) < a(1);
    case Op::kLe: return a(0) <= a(1);
    case Op::kEq: return a(0) == a(1);
    case Op::kNe: return a(0) != a(1);
    case Op::kGe: return a(0) >= a(1);
    case Op::kGt: return a(0) > a(1);
    case Op::kAnd: return a(0) && a(1);
    case Op::kOr: return a(0) || a(1);
    case Op::kImply: return !a(0) || a(1);
    default: unsupported("cannot fold operator");
  }
}

Node constant(int64_t v) {
  Node n;
  n.op = Op::kConst;
  n.value = v;
  return n;
}

Node combine(Op op, std::vector<Node> kids) {
  if (std::all_of(kids.begin(), kids.end(), [](const Node& k) { return k.op == Op::kConst; })) {
    return constant(fold(op, kids));
  }
  Node n;
  n.op = op;
  n.kids = std::move(kids);
  return n;
}

}  // namespace

namespace {

// Everything the compiler needs to turn names into slots.
struct Compiler {
  const ta::TaSystem& sys;
  std::vector<int32_t> first_instance;  // per template
  std::vector<int32_t> instance_count;
  int32_t n_instances = 0;
  int32_t n_ints = 0;
  bool* uses_parameter = nullptr;
  std::vector<char>* pinned = nullptr;  // templates named with a fixed instance

  int32_t int_slot(int32_t i) const { return n_instances + i; }
  int32_t clock_slot(int32_t i) const { return n_instances + n_ints + i; }

  Node compile(const ta::Expr& e, const Table& table, std::map<std::string, int64_t>& bound,
               const std::vector<std::vector<std::string>>* loc_names) const {
    switch (e.op) {
      case ta::ExprOp::kInt:
      case ta::ExprOp::kBool:
        return constant(e.value);
      case ta::ExprOp::kName: {
        if (auto b = bound.find(e.name); b != bound.end()) return constant(b->second);
        auto it = table.find(e.name);
        if (it == table.end()) throw Error(ErrorCode::kDanglingReference, "undeclared name '" + e.name + "'");
        const Sym& s = it->second;
        switch (s.kind) {
          case Sym::kConst: return constant(s.value);
          case Sym::kParameter:
            if (uses_parameter) *uses_parameter = true;
            return constant(s.value);
          case Sym::kInt: {
            Node n;
            n.op = Op::kSlot;
            n.slot = int_slot(s.index);
            return n;
          }
          case Sym::kClock: {
            Node n;
            n.op = Op::kSlot;
            n.slot = clock_slot(s.index);
            return n;
          }
          default:
            unsupported("'" + e.name + "' cannot be used as a value");
        }
      }
      case ta::ExprOp::kLocation: {
        if (loc_names == nullptr) unsupported("location predicates are only allowed in queries");
        int32_t t = -1;
        for (size_t i = 0; i < sys.templates.size(); ++i) {
          if (sys.templates[i].name == e.name) t = static_cast<int32_t>(i);
        }
        if (t < 0) throw Error(ErrorCode::kDanglingReference, "unknown template '" + e.name + "'");
        int64_t which = 0;
        if (!e.args.empty()) {
          const ta::Expr& sel = *e.args[0];
          const bool quantified = sel.op == ta::ExprOp::kName && bound.contains(sel.name);
          if (pinned && !quantified) (*pinned)[t] = 1;
          Node arg = compile(*e.args[0], table, bound, loc_names);
          if (arg.op != Op::kConst) unsupported("instance selector of '" + e.name + "' must be constant");
          which = arg.value;
        } else if (!sys.templates[t].parameter.empty()) {
          throw Error(ErrorCode::kDanglingReference, "'" + e.name + "' needs an instance selector");
        }
        if (which < 0 || which >= instance_count[t]) {
          throw Error(ErrorCode::kDanglingReference, "instance " + std::to_string(which) + " of '" + e.name + "'");
        }
        const auto& names = (*loc_names)[t];
        auto pos = std::find(names.begin(), names.end(), e.member);
        if (pos == names.end()) {
          throw Error(ErrorCode::kDanglingReference, "unknown location '" + e.name + "." + e.member + "'");
        }
        Node n;
        n.op = Op::kLocIs;
        n.slot = first_instance[t] + static_cast<int32_t>(which);
        n.loc = static_cast<int32_t>(pos - names.begin());
        return n;
      }
      case ta::ExprOp::kDeadlock: {
        if (loc_names == nullptr) unsupported("deadlock is only allowed in queries");
        Node n;
        n.op = Op::kDeadlock;
        return n;
      }
      case ta::ExprOp::kExists:
      case ta::ExprOp::kForall: {
        auto it = table.find(e.member);
        if (it == table.end() || it->second.kind != Sym::kScalar) {
          throw Error(ErrorCode::kDanglingReference, "quantifier type '" + e.member + "'");
        }
        const bool exists = e.op == ta::ExprOp::kExists;
        std::optional<int64_t> saved;
        if (auto b = bound.find(e.name); b != bound.end()) saved = b->second;
        std::optional<Node> acc;
        for (int64_t v = 0; v < it->second.value; ++v) {
          bound[e.name] = v;
          Node body = compile(*e.args[0], table, bound, loc_names);
          acc = acc ? combine(exists ? Op::kOr : Op::kAnd, {std::move(*acc), std::move(body)}) : std::move(body);
        }
        if (saved) {
          bound[e.name] = *saved;
        } else {
          bound.erase(e.name);
        }
        return acc ? std::move(*acc) : constant(exists ? 0 : 1);
      }
      case ta::ExprOp::kNot:
        return combine(Op::kNot, {compile(*e.args[0], table, bound, loc_names)});
      case ta::ExprOp::kNeg:
        return combine(Op::kNeg, {compile(*e.args[0], table, bound, loc_names)});
      default:
        return combine(binary_op(e.op), {compile(*e.args[0], table, bound, loc_names),
                                         compile(*e.args[1], table, bound, loc_names)});
    }
  }
};

void declare(const std::string& text, Table& table, std::vector<IntVar>& ints, int32_t& n_clocks,
             std::vector<std::string>* channels, std::vector<int32_t>* local_ints,
             std::vector<int32_t>* local_clocks, std::vector<char>* clock_is_global) {
  auto value_of = [&](const ta::ExprPtr& e) {
    std::map<std::string, int64_t> consts;
    for (const auto& [name, s] : table) {
      if (s.kind == Sym::kConst || s.kind == Sym::kParameter) consts[name] = s.value;
    }
    return ta::evaluate_constant(*e, consts);
  };
  for (const auto& d : ta::parse_declarations(text)) {
    Sym s;
    switch (d.kind) {
      case ta::DeclKind::kConstInt:
        s.kind = Sym::kConst;
        s.value = value_of(d.init);
        break;
      case ta::DeclKind::kScalarType:
        s.kind = Sym::kScalar;
        s.value = value_of(d.size);
        if (s.value < 1) unsupported("scalar type '" + d.name + "' must have a positive size");
        break;
      case ta::DeclKind::kChannel:
        if (channels == nullptr) unsupported("local channel '" + d.name + "'");
        s.kind = Sym::kChannel;
        s.index = static_cast<int32_t>(channels->size());
        channels->push_back(d.name);
        break;
      case ta::DeclKind::kClock:
        s.kind = Sym::kClock;
        s.index = n_clocks++;
        if (local_clocks) local_clocks->push_back(s.index);
        clock_is_global->push_back(local_clocks == nullptr);
        break;
      case ta::DeclKind::kInt:
      case ta::DeclKind::kBool: {
        IntVar v;
        if (d.kind == ta::DeclKind::kBool) {
          v.lo = 0;
          v.hi = 1;
        } else if (d.lower) {
          v.lo = value_of(d.lower);
          v.hi = value_of(d.upper);
        }
        if (d.init) v.init = value_of(d.init);
        if (v.lo > v.hi || v.init < v.lo || v.init > v.hi) {
          unsupported("initial value of '" + d.name + "' is outside its range");
        }
        s.kind = Sym::kInt;
        s.index = static_cast<int32_t>(ints.size());
        if (local_ints) local_ints->push_back(s.index);
        ints.push_back(v);
        break;
      }
    }
    table[d.name] = s;
  }
}

void clock_reads(const Node& n, const std::vector<char>& is_clock, std::set<int32_t>& out) {
  if (n.op == Op::kSlot && is_clock[n.slot]) out.insert(n.slot);
  for (const auto& k : n.kids) clock_reads(k, is_clock, out);
}

// Records the largest constant each clock is compared against and rejects
// any other use of a clock inside an expression.
void clock_constants(const Node& n, const std::vector<char>& is_clock, std::vector<int64_t>& max_const) {
  auto clock_kid = [&](const Node& k) { return k.op == Op::kSlot && is_clock[k.slot]; };
  if (is_comparison(n.op)) {
    const Node& a = n.kids[0];
    const Node& b = n.kids[1];
    if (clock_kid(a) || clock_kid(b)) {
      const Node& c = clock_kid(a) ? a : b;
      const Node& other = clock_kid(a) ? b : a;
      if (other.op != Op::kConst) unsupported("clocks may only be compared with constants");
      max_const[c.slot] = std::max(max_const[c.slot], other.value);
      return;
    }
  } else if (clock_kid(n)) {
    unsupported("a clock used outside a comparison");
  }
  for (const auto& k : n.kids) {
    if (clock_kid(k)) unsupported("a clock used outside a comparison");
    clock_constants(k, is_clock, max_const);
  }
}

}  // namespace

Network::Network(const ta::TaSystem& sys, const std::vector<std::string>& formula_texts,
                 int64_t global_cap_floor) {
  {
    ta::TaSystem bare = sys;
    bare.queries.clear();
    ta::validate_system(bare);
  }
  Compiler comp{sys, {}, {}, 0, 0, nullptr};
  Table globals;
  std::vector<IntVar> ints;
  int32_t n_clocks = 0;
  std::vector<char> clock_is_global;
  declare(sys.global_declarations, globals, ints, n_clocks, &channels_, nullptr, nullptr, &clock_is_global);

  struct Pending {
    Table table;
    std::vector<int32_t> local_ints, local_clocks;
  };
  std::vector<Pending> pending;
  for (size_t t = 0; t < sys.templates.size(); ++t) {
    const ta::Template& tpl = sys.templates[t];
    auto count_it = sys.instantiation.find(tpl.name);
    const int64_t n = count_it == sys.instantiation.end() ? 1 : count_it->second;
    comp.first_instance.push_back(static_cast<int32_t>(instances_.size()));
    comp.instance_count.push_back(static_cast<int32_t>(n));
    const auto param = ta::parse_parameter(tpl.parameter);
    for (int64_t i = 0; i < n; ++i) {
      Instance inst;
      inst.name = param ? tpl.name + "(" + std::to_string(i) + ")" : tpl.name;
      inst.template_index = static_cast<int32_t>(t);
      Pending p;
      p.table = globals;
      if (param) p.table[param->name] = Sym{Sym::kParameter, i, 0};
      declare(tpl.local_declarations, p.table, ints, n_clocks, nullptr, &p.local_ints, &p.local_clocks,
              &clock_is_global);
      instances_.push_back(std::move(inst));
      pending.push_back(std::move(p));
    }
  }
  comp.n_instances = static_cast<int32_t>(instances_.size());
  comp.n_ints = static_cast<int32_t>(ints.size());
  width_ = instances_.size() + ints.size() + static_cast<size_t>(n_clocks);
  is_clock_.assign(width_, 0);
  caps_.assign(width_, 0);
  int_init_.assign(width_, 0);
  std::vector<std::pair<int64_t, int64_t>> ranges(width_, {0, 0});
  for (size_t i = 0; i < ints.size(); ++i) {
    int_init_[comp.int_slot(static_cast<int32_t>(i))] = static_cast<Value>(ints[i].init);
    ranges[comp.int_slot(static_cast<int32_t>(i))] = {ints[i].lo, ints[i].hi};
  }
  for (int32_t c = 0; c < n_clocks; ++c) {
    is_clock_[comp.clock_slot(c)] = 1;
    if (clock_is_global[c] && !global_clock_) global_clock_ = comp.clock_slot(c);
  }
  if (auto g = globals.find(ta::kGlobalClockName); g != globals.end() && g->second.kind == Sym::kClock) {
    global_clock_ = comp.clock_slot(g->second.index);
  }

  std::vector<std::vector<std::string>> loc_names;
  for (const auto& tpl : sys.templates) {
    std::vector<std::string> names;
    for (const auto& l : tpl.locations) names.push_back(l.name);
    loc_names.push_back(std::move(names));
  }

  receivers_.assign(channels_.size(), {});
  for (size_t i = 0; i < instances_.size(); ++i) {
    Instance& inst = instances_[i];
    const ta::Template& tpl = sys.templates[inst.template_index];
    const Table& table = pending[i].table;
    comp.uses_parameter = &inst.uses_parameter;
    std::map<std::string, int64_t> bound;
    std::map<std::string, int32_t> loc_index;
    for (const auto& l : tpl.locations) {
      CLocation cl;
      cl.name = l.name;
      cl.committed = l.committed;
      cl.urgent = l.urgent;
      if (l.invariant) cl.invariant = comp.compile(*ta::parse_expression(*l.invariant), table, bound, nullptr);
      loc_index[l.id] = static_cast<int32_t>(inst.locations.size());
      inst.locations.push_back(std::move(cl));
    }
    inst.initial = loc_index.at(tpl.initial);
    for (const auto& e : tpl.edges) {
      CEdge ce;
      ce.source = loc_index.at(e.source);
      ce.target = loc_index.at(e.target);
      if (e.guard) ce.guard = comp.compile(*ta::parse_expression(*e.guard), table, bound, nullptr);
      if (e.sync) {
        ta::SyncLabel s = ta::parse_sync(*e.sync);
        ce.channel = table.at(s.channel).index;
        ce.send = s.send;
      }
      for (const auto& a : e.assignments) {
        ta::Assignment asg = ta::parse_assignment(a);
        const Sym& target = table.at(asg.target);
        CAssign ca;
        ca.slot = target.kind == Sym::kClock ? comp.clock_slot(target.index) : comp.int_slot(target.index);
        ca.value = comp.compile(*asg.value, table, bound, nullptr);
        if (target.kind == Sym::kClock) {
          if (ca.value.op != Op::kConst || ca.value.value < 0) unsupported("clocks may only be reset to constants");
          ca.lo = 0;
          ca.hi = INT32_MAX;
        } else {
          std::tie(ca.lo, ca.hi) = ranges[ca.slot];
        }
        ce.assigns.push_back(std::move(ca));
      }
      const int32_t index = static_cast<int32_t>(inst.edges.size());
      inst.locations[ce.source].out.push_back(index);
      if (ce.channel >= 0 && !ce.send) receivers_[ce.channel].emplace_back(static_cast<int32_t>(i), index);
      inst.edges.push_back(std::move(ce));
    }
    for (int32_t v : pending[i].local_ints) inst.local_slots.push_back(comp.int_slot(v));
    for (int32_t c : pending[i].local_clocks) inst.local_slots.push_back(comp.clock_slot(c));
  }

  std::vector<char> pinned_templates(sys.templates.size(), 0);
  {
    comp.uses_parameter = nullptr;
    comp.pinned = &pinned_templates;
    std::map<std::string, int64_t> bound;
    for (const auto& text : formula_texts) {
      formulas_.push_back(comp.compile(*ta::parse_expression(text), globals, bound, &loc_names));
    }
    comp.pinned = nullptr;
  }

  // Clock saturation points.
  std::vector<int64_t> max_const(width_, 0);
  for (const auto& inst : instances_) {
    for (const auto& l : inst.locations) {
      if (l.invariant) clock_constants(*l.invariant, is_clock_, max_const);
    }
    for (const auto& e : inst.edges) {
      if (e.guard) clock_constants(*e.guard, is_clock_, max_const);
      for (const auto& a : e.assigns) {
        std::set<int32_t> reads;
        clock_reads(a.value, is_clock_, reads);
        if (!reads.empty()) unsupported("assignments may not read clocks");
      }
    }
  }
  for (const auto& f : formulas_) clock_constants(f, is_clock_, max_const);
  for (size_t s = 0; s < width_; ++s) {
    if (!is_clock_[s]) continue;
    int64_t cap = std::max<int64_t>(1, max_const[s] + 1);
    const int32_t c = static_cast<int32_t>(s) - comp.n_instances - comp.n_ints;
    if (clock_is_global[c]) cap = std::max(cap, global_cap_floor + 1);
    if (cap > INT32_MAX - 1) unsupported("clock constant too large");
    caps_[s] = static_cast<Value>(cap);
  }

  // Local clocks that are reset before being read again carry no
  // information; they are pinned to zero.
  for (auto& inst : instances_) {
    std::set<int32_t> local_clocks;
    for (int32_t s : inst.local_slots) {
      if (is_clock_[s]) local_clocks.insert(s);
    }
    if (local_clocks.empty()) continue;
    std::vector<std::set<int32_t>> live(inst.locations.size());
    for (size_t l = 0; l < inst.locations.size(); ++l) {
      if (inst.locations[l].invariant) clock_reads(*inst.locations[l].invariant, is_clock_, live[l]);
      for (int32_t ei : inst.locations[l].out) {
        const CEdge& e = inst.edges[ei];
        if (e.guard) clock_reads(*e.guard, is_clock_, live[l]);
      }
    }
    for (bool changed = true; changed;) {
      changed = false;
      for (size_t l = 0; l < inst.locations.size(); ++l) {
        for (int32_t ei : inst.locations[l].out) {
          const CEdge& e = inst.edges[ei];
          std::set<int32_t> reset;
          for (const auto& a : e.assigns) reset.insert(a.slot);
          for (int32_t c : live[e.target]) {
            if (!reset.contains(c) && live[l].insert(c).second) changed = true;
          }
        }
      }
    }
    for (size_t l = 0; l < inst.locations.size(); ++l) {
      for (int32_t c : local_clocks) {
        if (!live[l].contains(c) && local_clocks.contains(c)) inst.locations[l].dead_clocks.push_back(c);
      }
    }
  }

  for (size_t t = 0; t < sys.templates.size(); ++t) {
    if (comp.instance_count[t] < 2 || pinned_templates[t]) continue;
    bool uses = false;
    std::vector<int32_t> group;
    for (int32_t k = 0; k < comp.instance_count[t]; ++k) {
      group.push_back(comp.first_instance[t] + k);
      uses |= instances_[comp.first_instance[t] + k].uses_parameter;
    }
    if (!uses) symmetric_groups_.push_back(std::move(group));
  }
}

State Network::initial() const {
  State s(width_, 0);
  for (size_t i = 0; i < instances_.size(); ++i) s[i] = instances_[i].initial;
  for (size_t k = instances_.size(); k < width_; ++k) {
    if (!is_clock_[k]) s[k] = int_init_[k];
  }
  normalize(s);
  return s;
}

int64_t Network::eval(const Node& n, const Value* s, bool dl) const {
  auto k = [&](size_t i) { return eval(n.kids[i], s, dl); };
  switch (n.op) {
    case Op::kConst: return n.value;
    case Op::kSlot: return s[n.slot];
    case Op::kLocIs: return s[n.slot] == n.loc;
    case Op::kDeadlock: return dl;
    case Op::kNot: return !k(0);
    case Op::kNeg: return -k(0);
    case Op::kAdd: return k(0) + k(1);
    case Op::kSub: return k(0) - k(1);
    case Op::kMul: return k(0) * k(1);
    case Op::kDiv:
    case Op::kMod: {
      int64_t d = k(1);
      if (d == 0) unsupported("division by zero");
      return n.op == Op::kDiv ? k(0) / d : k(0) % d;
    }
    case Op::kLt: return k(0) < k(1);
    case Op::kLe: return k(0) <= k(1);
    case Op::kEq: return k(0) == k(1);
    case Op::kNe: return k(0) != k(1);
    case Op::kGe: return k(0) >= k(1);
    case Op::kGt: return k(0) > k(1);
    case Op::kAnd: return k(0) && k(1);
    case Op::kOr: return k(0) || k(1);
    case Op::kImply: return !k(0) || k(1);
  }
  return 0;
}

bool Network::invariants_hold(const State& s) const {
  for (size_t i = 0; i < instances_.size(); ++i) {
    const CLocation& l = instances_[i].locations[s[i]];
    if (l.invariant && !eval(*l.invariant, s.data(), false)) return false;
  }
  return true;
}

bool Network::apply(State& s, const std::vector<CAssign>& assigns) const {
  for (const auto& a : assigns) {
    const int64_t v = eval(a.value, s.data(), false);
    if (is_clock_[a.slot]) {
      s[a.slot] = static_cast<Value>(std::min<int64_t>(v, caps_[a.slot]));
    } else {
      if (v < a.lo || v > a.hi) return false;
      s[a.slot] = static_cast<Value>(v);
    }
  }
  return true;
}

void Network::normalize(State& s) const {
  for (size_t i = 0; i < instances_.size(); ++i) {
    for (int32_t c : instances_[i].locations[s[i]].dead_clocks) s[c] = 0;
  }
}

bool Network::committed_somewhere(const State& s) const {
  for (size_t i = 0; i < instances_.size(); ++i) {
    if (instances_[i].locations[s[i]].committed) return true;
  }
  return false;
}

std::optional<State> Network::delayed(const State& s) const {
  for (size_t i = 0; i < instances_.size(); ++i) {
    const CLocation& l = instances_[i].locations[s[i]];
    if (l.committed || l.urgent) return std::nullopt;
  }
  State t = s;
  for (size_t k = instances_.size(); k < width_; ++k) {
    if (is_clock_[k] && t[k] < caps_[k]) ++t[k];
  }
  normalize(t);
  if (!invariants_hold(t)) return std::nullopt;
  return t;
}

void Network::successors(const State& s, std::vector<Successor>& out) const {
  const bool committed = committed_somewhere(s);
  for (size_t i = 0; i < instances_.size(); ++i) {
    const Instance& inst = instances_[i];
    const CLocation& here = inst.locations[s[i]];
    for (int32_t ei : here.out) {
      const CEdge& e = inst.edges[ei];
      if (e.channel >= 0 && !e.send) continue;
      if (e.guard && !eval(*e.guard, s.data(), false)) continue;
      if (e.channel < 0) {
        if (committed && !here.committed) continue;
        if (auto t = fire(s, {static_cast<int32_t>(i), ei, -1, -1})) {
          out.push_back({std::move(*t), {static_cast<int32_t>(i), ei, -1, -1}});
        }
        continue;
      }
      for (const auto& [j, ej] : receivers_[e.channel]) {
        if (static_cast<size_t>(j) == i) continue;
        const CEdge& r = instances_[j].edges[ej];
        if (s[j] != r.source) continue;
        if (committed && !here.committed && !instances_[j].locations[s[j]].committed) continue;
        if (r.guard && !eval(*r.guard, s.data(), false)) continue;
        const Step step{static_cast<int32_t>(i), ei, j, ej};
        if (auto t = fire(s, step)) out.push_back({std::move(*t), step});
      }
    }
  }
}

std::optional<State> Network::fire(const State& s, const Step& step) const {
  if (step.inst_a < 0 || static_cast<size_t>(step.inst_a) >= instances_.size()) return std::nullopt;
  const Instance& a = instances_[step.inst_a];
  if (step.edge_a < 0 || static_cast<size_t>(step.edge_a) >= a.edges.size()) return std::nullopt;
  const CEdge& ea = a.edges[step.edge_a];
  if (s[step.inst_a] != ea.source) return std::nullopt;
  if (ea.guard && !eval(*ea.guard, s.data(), false)) return std::nullopt;
  const CEdge* eb = nullptr;
  if (step.inst_b >= 0) {
    const Instance& b = instances_[step.inst_b];
    if (step.edge_b < 0 || static_cast<size_t>(step.edge_b) >= b.edges.size()) return std::nullopt;
    eb = &b.edges[step.edge_b];
    if (s[step.inst_b] != eb->source || !ea.send || eb->send || ea.channel != eb->channel) return std::nullopt;
    if (eb->guard && !eval(*eb->guard, s.data(), false)) return std::nullopt;
  } else if (ea.channel >= 0) {
    return std::nullopt;
  }
  State t = s;
  if (!apply(t, ea.assigns)) return std::nullopt;
  if (eb != nullptr && !apply(t, eb->assigns)) return std::nullopt;
  t[step.inst_a] = ea.target;
  if (eb != nullptr) t[step.inst_b] = eb->target;
  normalize(t);
  if (!invariants_hold(t)) return std::nullopt;
  return t;
}

void Network::canonicalize(State& s) const {
  for (const auto& group : symmetric_groups_) {
    std::vector<std::vector<Value>> parts;
    for (int32_t i : group) {
      std::vector<Value> p{s[i]};
      for (int32_t slot : instances_[i].local_slots) p.push_back(s[slot]);
      parts.push_back(std::move(p));
    }
    std::sort(parts.begin(), parts.end());
    for (size_t k = 0; k < group.size(); ++k) {
      const int32_t i = group[k];
      s[i] = parts[k][0];
      for (size_t m = 0; m < instances_[i].local_slots.size(); ++m) s[instances_[i].local_slots[m]] = parts[k][m + 1];
    }
  }
}

std::vector<std::string> Network::location_vector(const State& s) const {
  std::vector<std::string> out;
  for (size_t i = 0; i < instances_.size(); ++i) {
    out.push_back(instances_[i].name + "." + instances_[i].locations[s[i]].name);
  }
  return out;
}

}  // namespace bc2ta::check::detail
