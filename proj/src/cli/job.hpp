#pragma once

#include "lang/parser.hpp"
#include "sync/engine.hpp"

#include <memory>
#include <string>
#include <vector>

namespace hcspver {

// Parallel composition tree over named processes.
struct ParTree {
  std::string leaf; // set for leaves
  std::set<std::string> channels;
  std::shared_ptr<ParTree> left, right;

  bool is_leaf() const { return !leaf.empty(); }
};

struct VerificationJob {
  std::vector<std::pair<std::string, ProcessPtr>> processes;
  std::shared_ptr<ParTree> parallel;
  BExprPtr init_cond;
  BExprPtr rec_cond;
  BExprPtr goal; // may be null

  int oracle_runs = 0;
  unsigned seed = 1;
  int unroll = 1;
  std::string smt_command;
  std::string out_dir = "out";
  int mutation = 0;
};

VerificationJob load_job(const std::string& path);
VerificationJob parse_job(const std::string& json_text);

struct ObligationOutcome {
  Obligation obligation;
  std::string file;   // relative path of the exported script
  std::string result; // "valid" | "refuted" | "unknown" | "unchecked" | "audit"
};

struct OracleOutcome {
  int runs = 0;
  int passed = 0;
  int failed = 0;
  int rejected = 0; // generator could not complete a run
  std::string first_counterexample;
};

struct RunReport {
  std::vector<std::pair<std::string, std::string>> process_specs; // name -> pretty
  AssertionPtr final_assertion;
  SyncStats stats;
  std::vector<ObligationOutcome> obligations;
  OracleOutcome oracle;
  bool oracle_ran = false;
  int exit_code = 0;
  std::string text; // full report body
};

// Generates per-process specifications, synchronizes them over the parallel
// tree, checks obligations with the configured solver, optionally runs the
// execution oracle, and writes report/obligation files under job.out_dir.
RunReport run_job(const VerificationJob& job);

// Builds the combined parallel process with prefixed variables, as executed
// by the oracle.
ProcessPtr job_parallel_process(const VerificationJob& job);

} // namespace hcspver
