#include "cli/job.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"trace-based verifier for communicating hybrid processes"};
  app.require_subcommand(1);

  auto* verify = app.add_subcommand("verify", "verify a job file");
  std::string job_path;
  std::string out_dir;
  std::string smt_cmd;
  int oracle = -1;
  unsigned seed = 0;
  int unroll = 0;
  int mutate = 0;
  verify->add_option("job", job_path, "job JSON file")->required();
  verify->add_option("--out", out_dir, "output directory (default: from job, else ./out)");
  verify->add_option("--oracle", oracle, "number of random execution checks");
  verify->add_option("--seed", seed, "random seed for the oracle");
  verify->add_option("--smt", smt_cmd, "SMT solver command (SMT-LIB v2 script in, verdict out)");
  verify->add_option("--unroll", unroll, "loop unrolling bound for oracle runs");
  verify->add_option("--mutate", mutate, "enable a seeded rule mutation (testing)")
      ->group(""); // hidden

  CLI11_PARSE(app, argc, argv);

  try {
    hcspver::VerificationJob job = hcspver::load_job(job_path);
    if (!out_dir.empty()) job.out_dir = out_dir;
    if (oracle >= 0) job.oracle_runs = oracle;
    if (seed != 0) job.seed = seed;
    if (unroll > 0) job.unroll = unroll;
    if (!smt_cmd.empty()) job.smt_command = smt_cmd;
    if (mutate != 0) job.mutation = mutate;
    if (job.smt_command.empty()) {
      const char* env = std::getenv("HCSPVER_SMT");
      if (env) job.smt_command = env;
    }

    hcspver::RunReport report = hcspver::run_job(job);
    std::cout << report.text;
    return report.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
