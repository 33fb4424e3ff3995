#pragma once

#include <map>
#include <string>
#include <vector>

namespace tpmg {

/// Outcome of one iterative solve. residual_history[0] is the initial
/// residual norm and the history has iterations + 1 entries.
struct SolveReport {
  int iterations = 0;
  std::vector<double> residual_history;
  bool converged = false;
  bool breakdown = false;
  double wall_time = 0.0;  // iteration loop only, seconds
  std::map<std::string, std::string> config_echo;
  std::vector<std::string> warnings;

  double final_relative_residual() const {
    if (residual_history.empty() || residual_history.front() == 0.0) return 0.0;
    return residual_history.back() / residual_history.front();
  }
  double time_per_iteration() const { return iterations > 0 ? wall_time / iterations : 0.0; }
};

}  // namespace tpmg
