#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "mgvp/grid.h"
#include "mgvp/kernel.h"
#include "mgvp/simulation.h"

namespace mgvp {

/// One row of verify.csv. A check passes iff statistic <= tolerance.
/// Monte Carlo checks are named with an "mc_" prefix; every other statistic
/// is independent of the seed.
struct CheckResult {
  std::string name;
  double statistic;
  double tolerance;
  bool pass;
};

struct VerifySettings {
  VolterraKernel kernel;
  TimeGrid grid;
  MixParams params;
  std::size_t iu;                     // observation node
  std::vector<std::size_t> t_nodes;   // evaluation nodes for residual checks
  std::vector<double> b_list;         // noise levels for the MSE study
  std::size_t n_paths;
  std::uint64_t seed;
};

std::vector<CheckResult> run_verification(const VerifySettings& settings);

}  // namespace mgvp
