#pragma once

#include "core/expr.hpp"
#include "core/names.hpp"

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace hcspver {

enum class Dir { In, Out, Sync };

// (channel, is_input) pairs a process is waiting on during a continuous block.
using RdySet = std::set<std::pair<std::string, bool>>;

// No handshake possible over the shared channels.
bool compat(const RdySet& r1, const RdySet& r2, const std::set<std::string>& cs);

// State trajectory over [0, dur]: closed-form expressions in the path time
// variable, evaluated against the recorded start state. Variables without an
// entry stay constant.
struct ContPath {
  State start;
  std::map<std::string, ExprPtr> sol;
};

State path_state_at(const ContPath& p, const Rational& t);

struct Event {
  bool is_comm = true;
  // communication
  Dir dir = Dir::In;
  std::string chan;
  Rational value;
  // continuous block
  Rational dur;
  ContPath path;
  RdySet rdy;
};

Event ev_comm(Dir dir, const std::string& chan, const Rational& value);
Event ev_cont(const Rational& dur, ContPath path, RdySet rdy);

struct Trace {
  std::vector<Event> events;
  bool deadlock = false; // present only as a terminal marker
};

// Canonical semantic key: paths are compared by sampling, so traces built by
// different derivations compare equal iff they are the same behavior.
std::string trace_key(const Trace& tr);

// JSON-lines serialization for golden tests and debugging.
std::string trace_jsonl(const Trace& tr);

// --- schedules ---------------------------------------------------------------
//
// A schedule is the flat list of choices that resolves every nondeterminism
// of a run, consumed in evaluation order:
//   delay     waiting time before an input/output fires
//   value     input value received from the environment
//   branch    internal-choice side (0 or 1)
//   loop      whether a repetition runs one more iteration
//   int_comm  interrupt: branch index + waiting time (absolute, or a fraction
//             of the boundary time when one exists)
//   boundary  interrupt: evolve to the domain boundary, run the tail
//   sync_pick index among multiple synchronized traces (parallel only)

struct SchedItem {
  enum class Kind { Delay, Value, Branch, Loop, IntComm, Boundary, SyncPick };
  Kind kind;
  Rational amount;        // Delay, Value, IntComm waiting time
  bool flag = false;      // Loop: continue; IntComm: amount is a fraction
  int index = 0;          // Branch, IntComm branch, SyncPick
};

// Context handed to a schedule provider when the item list runs out; lets a
// random driver make only valid choices.
struct SupplyCtx {
  SchedItem::Kind kind;
  bool interrupt_choice = false; // IntComm or Boundary both acceptable
  int branches = 0;
  bool domain_holds = true;
  bool has_bound = false;
  Rational bound;
  const std::vector<bool>* branch_is_input = nullptr;
};

struct Schedule {
  std::vector<SchedItem> items;
  size_t cursor = 0;
  // optional on-demand source; supplied items are appended for replay
  std::function<SchedItem(const SupplyCtx&)> provider;

  static SchedItem delay(const Rational& d) {
    return {SchedItem::Kind::Delay, d, false, 0};
  }
  static SchedItem value(const Rational& v) {
    return {SchedItem::Kind::Value, v, false, 0};
  }
  static SchedItem branch(int i) { return {SchedItem::Kind::Branch, Rational(0), false, i}; }
  static SchedItem loop(bool more) { return {SchedItem::Kind::Loop, Rational(0), more, 0}; }
  static SchedItem int_comm(int i, const Rational& d, bool fraction = false) {
    return {SchedItem::Kind::IntComm, d, fraction, i};
  }
  static SchedItem boundary() { return {SchedItem::Kind::Boundary, Rational(0), false, 0}; }
  static SchedItem sync_pick(int i) {
    return {SchedItem::Kind::SyncPick, Rational(0), false, i};
  }

  const SchedItem& take(SchedItem::Kind expect, const char* what);
  const SchedItem& take_ctx(const SupplyCtx& ctx, const char* what);
  bool next_is(SchedItem::Kind k) const {
    return cursor < items.size() && items[cursor].kind == k;
  }
  bool exhausted() const { return cursor >= items.size(); }
  std::string str() const;
};

} // namespace hcspver
