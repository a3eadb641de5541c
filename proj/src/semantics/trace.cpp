#include "semantics/trace.hpp"

#include "json.hpp"

#include <sstream>

namespace hcspver {

bool compat(const RdySet& r1, const RdySet& r2, const std::set<std::string>& cs) {
  for (const auto& ch : cs) {
    bool out1 = r1.count({ch, false}), in1 = r1.count({ch, true});
    bool out2 = r2.count({ch, false}), in2 = r2.count({ch, true});
    if ((out1 && in2) || (in1 && out2)) return false;
  }
  return true;
}

State path_state_at(const ContPath& p, const Rational& t) {
  State out = p.start;
  BoundEnv benv{{kPathTime, t}};
  for (const auto& [v, e] : p.sol) out.update(v, eval_expr(e, p.start, benv));
  return out;
}

Event ev_comm(Dir dir, const std::string& chan, const Rational& value) {
  Event e;
  e.is_comm = true;
  e.dir = dir;
  e.chan = chan;
  e.value = value;
  return e;
}

Event ev_cont(const Rational& dur, ContPath path, RdySet rdy) {
  if (dur <= 0) throw VerifyError("continuous event requires positive duration");
  Event e;
  e.is_comm = false;
  e.dur = dur;
  e.path = std::move(path);
  e.rdy = std::move(rdy);
  return e;
}

static const char* dir_str(Dir d) {
  switch (d) {
    case Dir::In: return "?";
    case Dir::Out: return "!";
    case Dir::Sync: return ".";
  }
  return "?";
}

std::string trace_key(const Trace& tr) {
  std::ostringstream os;
  for (const auto& e : tr.events) {
    if (e.is_comm) {
      os << "c(" << e.chan << dir_str(e.dir) << "," << rat_str(e.value) << ");";
    } else {
      os << "w(" << rat_str(e.dur) << ",{";
      for (const auto& [ch, in] : e.rdy) os << ch << (in ? "?" : "!") << " ";
      os << "},";
      // sample the path at 0, dur/2, dur: equal polynomials iff equal behavior
      for (const Rational& t : {Rational(0), Rational(e.dur / 2), e.dur}) {
        State st = path_state_at(e.path, t);
        os << state_str(st) << "|";
      }
      os << ");";
    }
  }
  if (tr.deadlock) os << "DEADLOCK";
  return os.str();
}

std::string trace_jsonl(const Trace& tr) {
  std::ostringstream os;
  for (const auto& e : tr.events) {
    nlohmann::json j;
    if (e.is_comm) {
      j["event"] = e.dir == Dir::Sync ? "sync" : (e.dir == Dir::In ? "in" : "out");
      j["channel"] = e.chan;
      j["value"] = rat_str(e.value);
    } else {
      j["event"] = "cont";
      j["duration"] = rat_str(e.dur);
      nlohmann::json rdy = nlohmann::json::array();
      for (const auto& [ch, in] : e.rdy) rdy.push_back(ch + (in ? "?" : "!"));
      j["rdy"] = rdy;
      nlohmann::json path;
      for (const auto& [v, ex] : e.path.sol) path[v] = expr_str(ex);
      j["path"] = path;
      nlohmann::json start;
      for (const auto& [v, val] : e.path.start.values) start[v] = rat_str(val);
      j["start"] = start;
    }
    os << j.dump() << "\n";
  }
  if (tr.deadlock) os << "{\"event\":\"deadlock\"}\n";
  return os.str();
}

const SchedItem& Schedule::take(SchedItem::Kind expect, const char* what) {
  SupplyCtx ctx;
  ctx.kind = expect;
  return take_ctx(ctx, what);
}

const SchedItem& Schedule::take_ctx(const SupplyCtx& ctx, const char* what) {
  if (cursor >= items.size()) {
    if (!provider)
      throw VerifyError(std::string("schedule exhausted; needed ") + what);
    items.push_back(provider(ctx));
  }
  const SchedItem& it = items[cursor];
  bool ok = it.kind == ctx.kind ||
            (ctx.interrupt_choice && (it.kind == SchedItem::Kind::IntComm ||
                                      it.kind == SchedItem::Kind::Boundary));
  if (!ok)
    throw VerifyError(std::string("schedule mismatch; needed ") + what + " at index " +
                      std::to_string(cursor));
  ++cursor;
  return it;
}

std::string Schedule::str() const {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < items.size(); ++i) {
    if (i) os << ", ";
    const auto& it = items[i];
    switch (it.kind) {
      case SchedItem::Kind::Delay: os << "delay " << rat_str(it.amount); break;
      case SchedItem::Kind::Value: os << "value " << rat_str(it.amount); break;
      case SchedItem::Kind::Branch: os << "branch " << it.index; break;
      case SchedItem::Kind::Loop: os << (it.flag ? "loop more" : "loop stop"); break;
      case SchedItem::Kind::IntComm:
        os << "int " << it.index << " @" << (it.flag ? "frac " : "") << rat_str(it.amount);
        break;
      case SchedItem::Kind::Boundary: os << "boundary"; break;
      case SchedItem::Kind::SyncPick: os << "pick " << it.index; break;
    }
  }
  os << "]";
  return os.str();
}

} // namespace hcspver
