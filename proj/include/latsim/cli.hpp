#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace latsim {

/// Experiment configuration shared by all CLI commands. Identical configs
/// (including the seed) produce byte-identical output regardless of the
/// worker thread count.
struct ExperimentConfig {
  std::string command;  // short-vector-scaling | ser-sweep | dmt-curves | primitive-count
  int m = 2;
  int n = 2;
  int t = 1;
  std::string code = "vblast";  // vblast | golden
  int qam = 4;
  std::vector<std::string> decoders;  // ml | nld | lll
  std::vector<double> snr_db;
  std::vector<double> eps_list;
  std::vector<double> r_grid;  // dmt-curves; default 0..M step 0.1
  int k_max = 3;               // primitive-count shells 1..k_max
  std::uint64_t trials = 100000;
  std::uint64_t seed = 1;
  int threads = 0;
  std::string out_path;         // empty = stdout
  std::string format = "csv";   // csv | json
};

/// Runs one command and returns the full result-file contents. Progress goes
/// to stderr only. Throws ConfigError (exit 2) on invalid configuration and
/// BudgetExceededError (exit 3) on exceeded compute budgets.
std::string run_command(const ExperimentConfig& config);

/// Exit-code mapping used by the binary: 0 success, 2 config, 3 budget.
int exit_code_for_current_exception();

}  // namespace latsim
