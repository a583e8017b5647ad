#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mgvp/grid.h"
#include "mgvp/kernel.h"
#include "mgvp/simulation.h"

namespace mgvp {

enum class ExperimentKind { kPredict, kCovariance, kMseStudy, kVerify };

ExperimentKind parse_kind(std::string_view name);
std::string_view kind_name(ExperimentKind kind);

/// Flat key -> raw value map, as read from a config file or CLI flags.
using ConfigEntries = std::map<std::string, std::string>;

struct SnapNote {
  std::string key;
  double requested;
  double snapped;
  double distance;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::kVerify;

  std::string kernel_name = "bm";
  double hurst = 0.5;
  double theta = 1.0;
  double sigma = 1.0;
  std::string tabulated_path;

  double horizon = 1.0;
  std::size_t cells = 256;

  double a = 1.0;
  double b = 1.0;
  std::optional<double> rho;

  // Snapped to grid nodes; unset means the experiment's own default.
  std::optional<double> u;
  std::vector<double> t;
  std::vector<double> b_list{0.5, 1.0, 2.0};

  std::size_t n_paths = 100000;
  std::uint64_t seed = 42;
  std::string out_dir = ".";

  std::vector<SnapNote> snaps;

  TimeGrid grid() const { return TimeGrid(horizon, cells); }
  MixParams params() const { return MixParams(a, b); }
};

inline constexpr std::size_t kMinCells = 8;
inline constexpr std::size_t kMaxCells = 4096;
inline constexpr std::size_t kMinPaths = 100;
inline constexpr std::size_t kMaxPaths = 10000000;

/// Parses `key = value` lines. Blank lines and lines starting with '#' are
/// skipped; '-' in keys is read as '_'.
ConfigEntries parse_config_text(std::string_view text);
ConfigEntries read_config_file(const std::string& path);

/// Merges file entries with flag entries (flags win), validates, applies
/// defaults and snaps u and t to the grid. Errors name the offending key.
ExperimentConfig parse_config(const ConfigEntries& file, const ConfigEntries& flags = {});

/// Builds the configured kernel; tabulated kernels are loaded from
/// tabulated_path (CSV with header i,j,value; absent cells are zero).
VolterraKernel make_kernel(const ExperimentConfig& config);

}  // namespace mgvp
