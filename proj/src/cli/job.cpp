#include "cli/job.hpp"

#include "cli/oracle.hpp"
#include "core/smtlib.hpp"

#include "json.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace hcspver {

namespace {

using nlohmann::json;

std::shared_ptr<ParTree> parse_partree(const json& j) {
  auto node = std::make_shared<ParTree>();
  if (j.is_string()) {
    node->leaf = j.get<std::string>();
    return node;
  }
  if (!j.is_object() || !j.contains("left") || !j.contains("right") ||
      !j.contains("channels"))
    throw VerifyError("parallel node needs left, right and channels");
  node->left = parse_partree(j["left"]);
  node->right = parse_partree(j["right"]);
  for (const auto& c : j["channels"]) node->channels.insert(c.get<std::string>());
  return node;
}

void check_job(const VerificationJob& job) {
  std::set<std::string> names;
  for (const auto& [n, p] : job.processes) {
    if (!names.insert(n).second) throw VerifyError("duplicate process name: " + n);
    if (!is_sequential(p))
      throw VerifyError("process bodies must be sequential: " + n);
  }
  std::function<void(const std::shared_ptr<ParTree>&, std::set<std::string>&)> walk =
      [&](const std::shared_ptr<ParTree>& node, std::set<std::string>& leaves) {
        if (node->is_leaf()) {
          if (!names.count(node->leaf))
            throw VerifyError("parallel tree names unknown process: " + node->leaf);
          leaves.insert(node->leaf);
          return;
        }
        std::set<std::string> l, r;
        walk(node->left, l);
        walk(node->right, r);
        // declared channels must connect the two sides
        auto side_chans = [&](const std::set<std::string>& side) {
          std::set<std::string> out;
          for (const auto& [n, p] : job.processes)
            if (side.count(n)) {
              auto cs = channels(p);
              out.insert(cs.begin(), cs.end());
            }
          return out;
        };
        std::set<std::string> lc = side_chans(l), rc = side_chans(r);
        for (const auto& ch : node->channels)
          if (!lc.count(ch) || !rc.count(ch))
            throw VerifyError("shared channel " + ch +
                              " does not appear on both sides of its parallel node");
        leaves.insert(l.begin(), l.end());
        leaves.insert(r.begin(), r.end());
      };
  std::set<std::string> leaves;
  walk(job.parallel, leaves);
  if (leaves.size() != job.processes.size())
    throw VerifyError("every process must appear in the parallel tree");
}

} // namespace

VerificationJob parse_job(const std::string& text) {
  json j = json::parse(text);
  VerificationJob job;
  if (!j.contains("processes") || !j.contains("parallel"))
    throw VerifyError("job needs processes and parallel");
  for (const auto& [name, body] : j["processes"].items())
    job.processes.emplace_back(name, parse_process(body.get<std::string>()));
  std::sort(job.processes.begin(), job.processes.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  job.parallel = parse_partree(j["parallel"]);
  job.init_cond = j.contains("init_cond")
                      ? parse_bexpr(j["init_cond"].get<std::string>())
                      : btrue();
  job.rec_cond = j.contains("rec_cond")
                     ? parse_bexpr(j["rec_cond"].get<std::string>())
                     : btrue();
  if (j.contains("goal")) job.goal = parse_bexpr(j["goal"].get<std::string>());
  if (j.contains("options")) {
    const auto& o = j["options"];
    if (o.contains("oracle")) job.oracle_runs = o["oracle"].get<int>();
    if (o.contains("seed")) job.seed = o["seed"].get<unsigned>();
    if (o.contains("unroll")) job.unroll = o["unroll"].get<int>();
    if (o.contains("smt")) job.smt_command = o["smt"].get<std::string>();
    if (o.contains("out")) job.out_dir = o["out"].get<std::string>();
  }
  check_job(job);
  return job;
}

VerificationJob load_job(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw VerifyError("cannot open job file: " + path);
  std::stringstream buf;
  buf << is.rdbuf();
  return parse_job(buf.str());
}

namespace {

struct SyncNode {
  NamedAssertion named;
};

NamedAssertion sync_tree(const std::shared_ptr<ParTree>& node,
                         std::map<std::string, NamedAssertion>& leaves,
                         SyncEngine& engine, const BExprPtr& cond0) {
  if (node->is_leaf()) return leaves.at(node->leaf);
  NamedAssertion l = sync_tree(node->left, leaves, engine, cond0);
  NamedAssertion r = sync_tree(node->right, leaves, engine, cond0);
  NamedAssertion out;
  out.assertion = engine.synchronize(node->channels, l, r, cond0);
  out.prefixes = l.prefixes;
  out.prefixes.insert(r.prefixes.begin(), r.prefixes.end());
  out.fresh_vars = l.fresh_vars;
  out.fresh_vars.insert(out.fresh_vars.end(), r.fresh_vars.begin(),
                        r.fresh_vars.end());
  return out;
}

std::string obligation_result(SmtSolver& solver, const Obligation& ob,
                              const std::string& script) {
  if (ob.expect == Obligation::Expect::Audit) return "audit";
  if (!solver.available()) return "unchecked";
  switch (solver.check(script)) {
    case SmtSolver::Result::Unsat: return "valid";
    case SmtSolver::Result::Sat: return "refuted";
    default: return "unknown";
  }
}

} // namespace

RunReport run_job(const VerificationJob& job) {
  namespace fs = std::filesystem;
  RunReport report;

  FreshNames fresh;
  {
    std::set<std::string> reserve;
    for (const auto& [name, proc] : job.processes) {
      auto fv = free_vars(proc);
      reserve.insert(fv.begin(), fv.end());
      for (const auto& v : fv) reserve.insert(name + v);
    }
    if (job.init_cond) collect_bexpr_vars(job.init_cond, &reserve, nullptr);
    if (job.rec_cond) collect_bexpr_vars(job.rec_cond, &reserve, nullptr);
    if (job.goal) collect_bexpr_vars(job.goal, &reserve, nullptr);
    fresh.reserve(reserve);
  }

  SmtSolver solver(job.smt_command);

  std::map<std::string, NamedAssertion> leaves;
  std::set<std::string> used_names;
  std::vector<Obligation> gen_obligations;
  for (const auto& [name, proc] : job.processes) {
    SpecGenerator gen(fresh, job.mutation);
    SpecResult spec = gen.generate(proc);
    report.process_specs.emplace_back(name, assertion_str(spec.assertion));
    NamedAssertion named = prefix_process(name, spec, used_names);
    for (const auto& ob : spec.obligations) {
      Obligation renamed = ob;
      // the generator worked pre-prefixing; rebase onto prefixed variables
      std::set<std::string> vs;
      collect_bexpr_vars(ob.hyp, &vs, nullptr);
      collect_bexpr_vars(ob.goal, &vs, nullptr);
      std::map<std::string, ExprPtr> sub;
      for (const auto& v : vs) sub.emplace(v, var(name + v));
      renamed.hyp = subst_vars(ob.hyp, sub);
      renamed.goal = subst_vars(ob.goal, sub);
      renamed.origin = name + ": " + ob.origin;
      gen_obligations.push_back(std::move(renamed));
    }
    leaves.emplace(name, std::move(named));
  }

  SyncEngine::Options opt;
  opt.rec_cond = job.rec_cond;
  opt.goal = job.goal;
  SyncEngine engine(fresh, solver, opt);

  NamedAssertion final_named = sync_tree(job.parallel, leaves, engine, job.init_cond);
  report.final_assertion = final_named.assertion;
  report.stats = engine.iteration_stats();

  std::vector<Obligation> obligations = std::move(gen_obligations);
  for (auto& ob : engine.take_obligations()) obligations.push_back(std::move(ob));

  fs::create_directories(fs::path(job.out_dir) / "obligations");
  json index = json::array();
  bool any_failed = false;
  int counter = 0;
  for (const auto& ob : obligations) {
    std::string script = to_smtlib(ob.goal, ob.hyp);
    std::string fname = "obligations/ob" + std::to_string(counter++) + ".smt2";
    {
      std::ofstream os(fs::path(job.out_dir) / fname);
      os << "; " << ob.origin << "\n" << script;
    }
    std::string result = obligation_result(const_cast<SmtSolver&>(solver), ob, script);
    if (ob.expect != Obligation::Expect::Audit &&
        (result == "refuted" || result == "unknown"))
      any_failed = true;
    report.obligations.push_back({ob, fname, result});
    json entry;
    entry["origin"] = ob.origin;
    entry["hypothesis"] = bexpr_str(ob.hyp);
    entry["goal"] = bexpr_str(ob.goal);
    entry["expect"] = ob.expect == Obligation::Expect::Audit
                          ? "audit"
                          : (ob.expect == Obligation::Expect::Unsat ? "unsat" : "valid");
    entry["file"] = fname;
    entry["result"] = result;
    index.push_back(entry);
  }
  {
    std::ofstream os(fs::path(job.out_dir) / "index.json");
    os << index.dump(2) << "\n";
  }
  {
    json st;
    st["branches_generated"] = report.stats.branches_generated;
    st["branches_pruned"] = report.stats.branches_pruned;
    st["branches_kept"] = report.stats.branches_kept;
    std::ofstream os(fs::path(job.out_dir) / "stats.json");
    os << st.dump(2) << "\n";
  }

  if (job.oracle_runs > 0) {
    OracleOptions oopt;
    oopt.runs = job.oracle_runs;
    oopt.seed = job.seed;
    oopt.unroll = job.unroll;
    oopt.rec_bound = 8 + 4L * job.unroll * (long)job.processes.size();
    report.oracle = run_oracle_checks(job, final_named.assertion,
                                      final_named.fresh_vars, oopt);
    report.oracle_ran = true;
  }

  std::ostringstream text;
  text << "== per-process specifications ==\n";
  for (const auto& [n, s] : report.process_specs)
    text << "[" << n << "]\n" << s << "\n\n";
  text << "== final assertion ==\n" << assertion_str(report.final_assertion) << "\n\n";
  text << "== branch statistics (per loop iteration) ==\n"
       << "generated: " << report.stats.branches_generated
       << "\npruned:    " << report.stats.branches_pruned
       << "\nkept:      " << report.stats.branches_kept << "\n\n";
  text << "== obligations ==\n";
  for (const auto& oo : report.obligations)
    text << oo.result << "  " << oo.file << "  [" << oo.obligation.origin << "]\n";
  if (report.oracle_ran) {
    text << "\n== oracle ==\nruns: " << report.oracle.runs
         << "  passed: " << report.oracle.passed
         << "  failed: " << report.oracle.failed
         << "  rejected: " << report.oracle.rejected << "\n";
    if (!report.oracle.first_counterexample.empty())
      text << "first counterexample:\n" << report.oracle.first_counterexample << "\n";
  }
  report.text = text.str();
  {
    std::ofstream os(fs::path(job.out_dir) / "report.txt");
    os << report.text;
  }

  if (any_failed)
    report.exit_code = 2;
  else if (report.oracle_ran && report.oracle.failed > 0)
    report.exit_code = 3;
  else
    report.exit_code = 0;
  return report;
}

} // namespace hcspver
