#pragma once

#include "cli/job.hpp"
#include "semantics/exec.hpp"
#include "semantics/satisfies.hpp"

#include <optional>
#include <random>

namespace hcspver {

// One coordinated run of the whole parallel composition: a schedule per
// component (concatenated in tree order, as exec_parallel consumes them)
// together with the initial state used.
struct CoupledRun {
  State s0;
  Schedule schedule;
  State predicted_final;
};

// Builds schedules whose component runs synchronize: walks all components in
// lockstep, firing enabled handshakes (time never passes while a shared
// handshake is ready) and advancing time to the next release point otherwise.
// Returns nullopt when the walk deadlocks or exceeds its step budget.
class CoupledScheduler {
 public:
  CoupledScheduler(const VerificationJob& job, std::mt19937_64& rng);

  std::optional<CoupledRun> build(const State& s0, int loop_budget);

 private:
  const VerificationJob& job_;
  std::mt19937_64& rng_;
};

// Samples a state satisfying the condition by rejection over small rationals.
std::optional<State> sample_state(const std::set<std::string>& vars,
                                  const BExprPtr& accept, std::mt19937_64& rng,
                                  int max_tries = 20000);

struct OracleOptions {
  int runs = 0;
  unsigned seed = 1;
  int unroll = 1;
  long rec_bound = 16;
};

OracleOutcome run_oracle_checks(const VerificationJob& job,
                                const AssertionPtr& final_assertion,
                                const std::vector<FreshTimeVar>& fresh_vars,
                                const OracleOptions& opt);

} // namespace hcspver
