#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>

#include "coblab/core.hpp"

namespace coblab::cli {

// Exit-code contract.
inline constexpr int kExitPass = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitFail = 2;
inline constexpr int kExitInconclusive = 3;

enum class Command { solve_isometry, solve_contraction, solve_dyadic, check, growth, wold, dilate_test, oracle };

struct RunConfig {
  Command command = Command::check;
  std::string operator_file;
  std::string vector_file;
  std::string solution_file;      // check: y to verify
  std::string solution_out;       // solve-*: write y alone
  Tolerances tolerances;
  std::size_t cutoff = 512;
  int base = 2;
  double epsilon = 1.0;
  std::size_t horizon = 256;      // profiles and Browder diagnostic
  std::size_t samples = 0;        // solve-dyadic CSV; 0 picks a default
  bool report = false;
  std::string output;             // empty: stdout
  std::string format = "json";
};

/// Executes a parsed configuration. Diagnostics go to err.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv (and COBLAB_CUTOFF) and runs.
int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace coblab::cli
