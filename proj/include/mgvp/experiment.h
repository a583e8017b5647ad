#pragma once

#include <filesystem>
#include <ostream>
#include <vector>

#include "mgvp/config.h"
#include "mgvp/verification.h"

namespace mgvp {

struct RunResult {
  bool all_pass = true;
  std::vector<std::filesystem::path> files;
};

/// Runs one experiment and writes its CSVs into config.out_dir:
///   predict    -> path.csv, mean.csv, cov.csv
///   covariance -> cov.csv
///   mse-study  -> mse.csv
///   verify     -> verify.csv
/// Failed numerical checks set all_pass = false; I/O errors throw.
RunResult run_experiment(const ExperimentConfig& config, std::ostream& log);

/// The settings `verify` uses for a config: u defaults to T/2 and the
/// evaluation nodes to {T/4, 3T/4, T}.
VerifySettings verify_settings(const ExperimentConfig& config);

}  // namespace mgvp
