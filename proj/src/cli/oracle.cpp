#include "cli/oracle.hpp"

#include "ode/solver.hpp"

#include <algorithm>
#include <sstream>

namespace hcspver {

namespace {

Rational rand_rat(std::mt19937_64& rng, long lo = -8, long hi = 8, long den = 2) {
  std::uniform_int_distribution<long> num(lo * den, hi * den);
  Rational r(num(rng), den);
  r.canonicalize();
  return r;
}

long rand_int(std::mt19937_64& rng, long n) {
  std::uniform_int_distribution<long> d(0, n - 1);
  return d(rng);
}

struct Offer {
  int branch = -1; // -1: plain input/output
  bool is_input = true;
  std::string chan;
};

struct Thread {
  std::string name;
  std::vector<ProcessPtr> stack;
  State st;
  std::vector<SchedItem> sched;

  enum class Mode { Running, Done, Wait, Ode, Comm } mode = Mode::Running;
  Rational release;              // Wait/Ode completion time
  ProcessPtr node;               // blocking construct
  std::optional<OdeSolution> sol;
  Rational block_start;
  std::optional<Rational> bound_abs; // interrupt: boundary / validity limit
  std::vector<Offer> offers;
};

struct Walker {
  const VerificationJob& job;
  std::mt19937_64& rng;
  // channel -> (names on the left, names on the right) of its declaring node
  std::map<std::string, std::pair<std::set<std::string>, std::set<std::string>>> sides;

  std::vector<Thread> threads;
  Rational now{0};
  int loop_budget = 0;

  bool is_internal(const std::string& ch) const { return sides.count(ch) != 0; }

  bool opposite(const std::string& ch, const std::string& a, const std::string& b) const {
    auto it = sides.find(ch);
    if (it == sides.end()) return false;
    const auto& [l, r] = it->second;
    return (l.count(a) && r.count(b)) || (l.count(b) && r.count(a));
  }

  ContPath thread_path(const Thread& t) const {
    ContPath p{t.st, {}};
    if (t.sol)
      for (const auto& [v, e] : t.sol->solution) p.sol.emplace(v, e);
    return p;
  }

  State state_at_now(const Thread& t) const {
    Rational d = now - t.block_start;
    if (d == 0 || !t.sol) return t.st;
    return path_state_at(thread_path(t), d);
  }

  // pops instant actions until the thread blocks or finishes
  bool run_instants(Thread& t) {
    while (t.mode == Thread::Mode::Running) {
      if (t.stack.empty()) {
        t.mode = Thread::Mode::Done;
        return true;
      }
      ProcessPtr c = t.stack.back();
      t.stack.pop_back();
      switch (c->kind) {
        case ProcKind::Skip: break;
        case ProcKind::Assign:
          t.st.update(c->var, eval_expr(c->expr, t.st));
          break;
        case ProcKind::Seq:
          t.stack.push_back(c->b);
          t.stack.push_back(c->a);
          break;
        case ProcKind::Cond:
          t.stack.push_back(eval_bexpr(c->guard, t.st) ? c->a : c->b);
          break;
        case ProcKind::IChoice: {
          int i = (int)rand_int(rng, 2);
          t.sched.push_back(Schedule::branch(i));
          t.stack.push_back(i == 0 ? c->a : c->b);
          break;
        }
        case ProcKind::Repeat: {
          bool more = loop_budget > 0 && rand_int(rng, 4) != 0;
          t.sched.push_back(Schedule::loop(more));
          if (more) {
            --loop_budget;
            t.stack.push_back(c);
            t.stack.push_back(c->a);
          }
          break;
        }
        case ProcKind::Wait: {
          Rational d = eval_expr(c->expr, t.st);
          if (d > 0) {
            t.mode = Thread::Mode::Wait;
            t.release = now + d;
            t.node = c;
          }
          break;
        }
        case ProcKind::Ode: {
          if (!eval_bexpr(c->guard, t.st)) break;
          FreshNames scratch;
          OdeSolution sol = solve_ode(c->eqs, c->guard, scratch);
          auto bound = concrete_boundary(sol, c->guard, t.st);
          if (!bound) return false; // divergent evolution
          t.mode = Thread::Mode::Ode;
          t.sol = sol;
          t.block_start = now;
          t.release = now + *bound;
          t.node = c;
          break;
        }
        case ProcKind::Input:
        case ProcKind::Output: {
          t.mode = Thread::Mode::Comm;
          t.node = c;
          t.sol.reset();
          t.block_start = now;
          t.bound_abs.reset();
          t.offers = {Offer{-1, c->kind == ProcKind::Input, c->chan}};
          break;
        }
        case ProcKind::Interrupt: {
          FreshNames scratch;
          OdeSolution sol = solve_ode(c->eqs, c->guard, scratch);
          t.mode = Thread::Mode::Comm;
          t.node = c;
          t.block_start = now;
          t.offers.clear();
          for (size_t i = 0; i < c->comms.size(); ++i)
            t.offers.push_back(
                Offer{(int)i, c->comms[i].is_input, c->comms[i].chan});
          if (!eval_bexpr(c->guard, t.st)) {
            t.sol.reset();
            t.bound_abs = now;
          } else {
            t.sol = sol;
            auto bound = concrete_boundary(sol, c->guard, t.st);
            t.bound_abs = bound ? std::optional<Rational>(now + *bound) : std::nullopt;
          }
          break;
        }
        case ProcKind::Parallel:
          throw VerifyError("nested parallel inside a component");
      }
    }
    return true;
  }

  bool offer_valid(const Thread& t) const {
    return !t.bound_abs || now <= *t.bound_abs;
  }

  void fire_comm(Thread& t, const Offer& o, const Rational& value, bool record_value) {
    Rational d = now - t.block_start;
    State at = state_at_now(t);
    if (o.branch < 0) {
      t.sched.push_back(Schedule::delay(d));
      if (record_value) t.sched.push_back(Schedule::value(value));
      if (t.node->kind == ProcKind::Input) at.update(t.node->var, value);
    } else {
      t.sched.push_back(Schedule::int_comm(o.branch, d));
      const CommBranch& br = t.node->comms[o.branch];
      if (record_value) t.sched.push_back(Schedule::value(value));
      if (br.is_input) at.update(br.var, value);
      t.stack.push_back(br.cont);
    }
    t.st = std::move(at);
    t.mode = Thread::Mode::Running;
    t.sol.reset();
    t.offers.clear();
    t.bound_abs.reset();
  }

  Rational offer_value(const Thread& t, const Offer& o) const {
    State at = state_at_now(t);
    const ExprPtr& e =
        o.branch < 0 ? t.node->expr : t.node->comms[o.branch].expr;
    return eval_expr(e, at);
  }

  std::optional<State> run(int budget, int step_limit) {
    loop_budget = budget;
    for (auto& t : threads)
      if (!run_instants(t)) return std::nullopt;
    for (int step = 0; step < step_limit; ++step) {
      bool all_done = true;
      for (const auto& t : threads)
        if (t.mode != Thread::Mode::Done) all_done = false;
      if (all_done) {
        State merged;
        for (const auto& t : threads) merged = merge_disjoint(merged, t.st);
        return merged;
      }

      // enabled handshakes and environment communications
      struct Shake { size_t i, j; Offer oi, oj; };
      std::vector<Shake> shakes;
      struct Env { size_t i; Offer o; };
      std::vector<Env> envs;
      for (size_t i = 0; i < threads.size(); ++i) {
        const Thread& ti = threads[i];
        if (ti.mode != Thread::Mode::Comm || !offer_valid(ti)) continue;
        for (const auto& oi : ti.offers) {
          if (!is_internal(oi.chan)) {
            envs.push_back({i, oi});
            continue;
          }
          if (oi.is_input) continue; // count each pair once, from the output side
          for (size_t j = 0; j < threads.size(); ++j) {
            if (j == i) continue;
            const Thread& tj = threads[j];
            if (tj.mode != Thread::Mode::Comm || !offer_valid(tj)) continue;
            for (const auto& oj : tj.offers)
              if (oj.is_input && oj.chan == oi.chan &&
                  opposite(oi.chan, ti.name, tj.name))
                shakes.push_back({i, j, oi, oj});
          }
        }
      }

      if (!shakes.empty()) {
        // a ready handshake forbids letting time pass
        size_t pick = (size_t)rand_int(rng, (long)(shakes.size() + envs.size()));
        if (pick < shakes.size()) {
          const Shake& sh = shakes[pick];
          Rational v = offer_value(threads[sh.i], sh.oi);
          fire_comm(threads[sh.i], sh.oi, v, false);
          fire_comm(threads[sh.j], sh.oj, v, true);
        } else {
          const Env& ev = envs[pick - shakes.size()];
          Rational v = ev.o.is_input ? rand_rat(rng)
                                     : offer_value(threads[ev.i], ev.o);
          fire_comm(threads[ev.i], ev.o, v, ev.o.is_input);
        }
        for (auto& t : threads)
          if (!run_instants(t)) return std::nullopt;
        continue;
      }

      // next release point
      std::optional<Rational> next;
      for (const auto& t : threads) {
        std::optional<Rational> r;
        if (t.mode == Thread::Mode::Wait || t.mode == Thread::Mode::Ode)
          r = t.release;
        else if (t.mode == Thread::Mode::Comm && t.bound_abs)
          r = *t.bound_abs;
        if (r && (!next || *r < *next)) next = r;
      }

      if (!envs.empty() && (rand_int(rng, 3) != 0 || !next)) {
        const Env& ev = envs[(size_t)rand_int(rng, (long)envs.size())];
        Rational v =
            ev.o.is_input ? rand_rat(rng) : offer_value(threads[ev.i], ev.o);
        fire_comm(threads[ev.i], ev.o, v, ev.o.is_input);
        for (auto& t : threads)
          if (!run_instants(t)) return std::nullopt;
        continue;
      }

      if (!next) return std::nullopt; // deadlock
      now = *next;
      for (auto& t : threads) {
        if (t.mode == Thread::Mode::Wait && t.release == now) {
          t.mode = Thread::Mode::Running;
        } else if (t.mode == Thread::Mode::Ode && t.release == now) {
          t.st = path_state_at(thread_path(t), now - t.block_start);
          t.sol.reset();
          t.mode = Thread::Mode::Running;
        } else if (t.mode == Thread::Mode::Comm && t.bound_abs && *t.bound_abs == now) {
          // domain boundary: the interrupt hands over to its tail
          t.sched.push_back(Schedule::boundary());
          t.st = state_at_now(t);
          t.stack.push_back(t.node->a);
          t.sol.reset();
          t.offers.clear();
          t.bound_abs.reset();
          t.mode = Thread::Mode::Running;
        }
      }
      for (auto& t : threads)
        if (!run_instants(t)) return std::nullopt;
    }
    return std::nullopt;
  }
};

void collect_sides(const std::shared_ptr<ParTree>& node,
                   std::map<std::string, std::pair<std::set<std::string>,
                                                   std::set<std::string>>>& sides,
                   std::set<std::string>& names_out) {
  if (node->is_leaf()) {
    names_out.insert(node->leaf);
    return;
  }
  std::set<std::string> l, r;
  collect_sides(node->left, sides, l);
  collect_sides(node->right, sides, r);
  for (const auto& ch : node->channels) {
    if (sides.count(ch))
      throw VerifyError("channel declared shared at two parallel nodes: " + ch);
    sides.emplace(ch, std::make_pair(l, r));
  }
  names_out.insert(l.begin(), l.end());
  names_out.insert(r.begin(), r.end());
}

void leaf_order(const std::shared_ptr<ParTree>& node, std::vector<std::string>& out) {
  if (node->is_leaf()) {
    out.push_back(node->leaf);
    return;
  }
  leaf_order(node->left, out);
  leaf_order(node->right, out);
}

} // namespace

CoupledScheduler::CoupledScheduler(const VerificationJob& job, std::mt19937_64& rng)
    : job_(job), rng_(rng) {}

std::optional<CoupledRun> CoupledScheduler::build(const State& s0, int loop_budget) {
  Walker w{job_, rng_};
  std::set<std::string> all_names;
  collect_sides(job_.parallel, w.sides, all_names);

  std::vector<std::string> order;
  leaf_order(job_.parallel, order);
  for (const auto& name : order) {
    ProcessPtr proc;
    for (const auto& [n, p] : job_.processes)
      if (n == name) proc = p;
    if (!proc) throw VerifyError("parallel tree names unknown process: " + name);
    ProcessPtr prefixed =
        rename_vars(proc, [&](const std::string& v) { return name + v; });
    Thread t;
    t.name = name;
    t.stack.push_back(prefixed);
    for (const auto& v : free_vars(prefixed)) t.st.update(v, s0.lookup(v));
    w.threads.push_back(std::move(t));
  }

  auto final_state = w.run(loop_budget, 3000);
  if (!final_state) return std::nullopt;

  CoupledRun run;
  run.s0 = s0;
  run.predicted_final = *final_state;
  for (const auto& t : w.threads)
    run.schedule.items.insert(run.schedule.items.end(), t.sched.begin(),
                              t.sched.end());
  return run;
}

std::optional<State> sample_state(const std::set<std::string>& vars,
                                  const BExprPtr& accept, std::mt19937_64& rng,
                                  int max_tries) {
  for (int i = 0; i < max_tries; ++i) {
    State s;
    for (const auto& v : vars) s.update(v, rand_rat(rng, -4, 4, 2));
    try {
      if (!accept || eval_bexpr(accept, s)) return s;
    } catch (const VerifyError&) {
    }
  }
  return std::nullopt;
}

ProcessPtr job_parallel_process(const VerificationJob& job) {
  std::function<ProcessPtr(const std::shared_ptr<ParTree>&)> build =
      [&](const std::shared_ptr<ParTree>& node) -> ProcessPtr {
    if (node->is_leaf()) {
      for (const auto& [n, p] : job.processes)
        if (n == node->leaf)
          return rename_vars(p, [&](const std::string& v) { return node->leaf + v; });
      throw VerifyError("parallel tree names unknown process: " + node->leaf);
    }
    return p_parallel(build(node->left), node->channels, build(node->right));
  };
  return build(job.parallel);
}

OracleOutcome run_oracle_checks(const VerificationJob& job,
                                const AssertionPtr& final_assertion,
                                const std::vector<FreshTimeVar>& fresh_vars,
                                const OracleOptions& opt) {
  OracleOutcome out;
  out.runs = opt.runs;
  if (opt.runs == 0) return out;

  ProcessPtr par = job_parallel_process(job);
  std::set<std::string> vars = free_vars(par);
  {
    std::set<std::string> cvars;
    if (job.init_cond) collect_bexpr_vars(job.init_cond, &cvars, nullptr);
    if (job.goal) collect_bexpr_vars(job.goal, &cvars, nullptr);
    vars.insert(cvars.begin(), cvars.end());
  }
  std::set<std::string> auto_def;
  for (const auto& fv : fresh_vars) auto_def.insert(fv.name);

  for (int k = 0; k < opt.runs; ++k) {
    std::mt19937_64 rng(opt.seed + 1000003ULL * (unsigned)k);
    auto s0 = sample_state(vars, job.init_cond, rng);
    if (!s0) {
      ++out.rejected;
      continue;
    }
    bool done = false;
    for (int attempt = 0; attempt < 25 && !done; ++attempt) {
      CoupledScheduler cs(job, rng);
      std::uniform_int_distribution<int> ud(1, std::max(1, opt.unroll));
      auto run = cs.build(*s0, ud(rng) * (int)job.processes.size());
      if (!run) continue;
      try {
        Schedule sched = run->schedule;
        auto [sfin, trace] = exec_parallel(par, *s0, sched);
        if (!(sfin == run->predicted_final))
          throw VerifyError("scheduler prediction diverges from execution");
        bool okrun = satisfies(*s0, sfin, trace, final_assertion, opt.rec_bound,
                               &auto_def);
        done = true;
        if (okrun) {
          ++out.passed;
        } else {
          ++out.failed;
          if (out.first_counterexample.empty()) {
            std::ostringstream os;
            os << "run " << k << "\n  s0 = " << state_str(*s0)
               << "\n  schedule = " << sched.str() << "\n  final = "
               << state_str(sfin) << "\n  trace:\n" << trace_jsonl(trace);
            out.first_counterexample = os.str();
          }
        }
      } catch (const DeadlockError&) {
        continue;
      }
    }
    if (!done) ++out.rejected;
  }
  return out;
}

} // namespace hcspver
