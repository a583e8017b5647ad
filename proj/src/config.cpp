#include "mgvp/config.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "mgvp/prediction.h"

namespace mgvp {

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{"kind", "kernel", "hurst", "theta", "sigma", "tabulated", "horizon",
                                          "cells", "a", "b", "rho", "u", "t", "b_list", "paths", "seed", "out"};
  return keys;
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::string normalize_key(std::string key) {
  std::replace(key.begin(), key.end(), '-', '_');
  return key;
}

double to_double(const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty() || !std::isfinite(out)) {
    throw std::invalid_argument("malformed number for key '" + key + "': '" + raw + "'");
  }
  return out;
}

std::uint64_t to_unsigned(const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec == std::errc() && ptr == v.data() + v.size() && !v.empty()) return out;
  // Accept integral values written in floating notation, e.g. 1e5.
  const double d = to_double(key, raw);
  if (d < 0.0 || d != std::floor(d) || d > 1.8e19) {
    throw std::invalid_argument("malformed integer for key '" + key + "': '" + raw + "'");
  }
  return static_cast<std::uint64_t>(d);
}

std::vector<double> to_list(const std::string& key, const std::string& raw) {
  std::vector<double> out;
  std::string item;
  std::istringstream in(raw);
  while (std::getline(in, item, ',')) {
    if (trim(item).empty()) continue;
    out.push_back(to_double(key, item));
  }
  if (out.empty()) throw std::invalid_argument("empty list for key '" + key + "'");
  return out;
}

double snap_value(const TimeGrid& grid, const std::string& key, double requested, std::vector<SnapNote>& notes) {
  if (requested < 0.0 || requested > grid.horizon() * (1.0 + 1e-12)) {
    throw std::invalid_argument("key '" + key + "' must lie in [0, horizon]");
  }
  const auto s = grid.snap(requested);
  if (s.distance > 0.0) notes.push_back({key, requested, s.time, s.distance});
  return s.time;
}

}  // namespace

ExperimentKind parse_kind(std::string_view name) {
  if (name == "predict") return ExperimentKind::kPredict;
  if (name == "covariance") return ExperimentKind::kCovariance;
  if (name == "mse-study" || name == "mse_study") return ExperimentKind::kMseStudy;
  if (name == "verify") return ExperimentKind::kVerify;
  throw std::invalid_argument("unknown experiment kind '" + std::string(name) + "'");
}

std::string_view kind_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kPredict: return "predict";
    case ExperimentKind::kCovariance: return "covariance";
    case ExperimentKind::kMseStudy: return "mse-study";
    case ExperimentKind::kVerify: return "verify";
  }
  return "unknown";
}

ConfigEntries parse_config_text(std::string_view text) {
  ConfigEntries out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(line_no) + " is not 'key = value'");
    }
    const std::string key = normalize_key(trim(std::string_view(body).substr(0, eq)));
    if (key.empty()) throw std::invalid_argument("config line " + std::to_string(line_no) + " has an empty key");
    out[key] = trim(std::string_view(body).substr(eq + 1));
  }
  return out;
}

ConfigEntries read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

ExperimentConfig parse_config(const ConfigEntries& file, const ConfigEntries& flags) {
  ConfigEntries e;
  for (const auto& [k, v] : file) e[normalize_key(k)] = v;
  for (const auto& [k, v] : flags) e[normalize_key(k)] = v;
  for (const auto& [k, v] : e) {
    if (!known_keys().contains(k)) throw std::invalid_argument("unknown config key '" + k + "'");
  }
  auto has = [&](const char* k) { return e.contains(k); };

  ExperimentConfig c;
  if (has("kind")) c.kind = parse_kind(trim(e["kind"]));

  if (has("kernel")) c.kernel_name = trim(e["kernel"]);
  if (c.kernel_name != "bm" && c.kernel_name != "rl" && c.kernel_name != "ou" && c.kernel_name != "tabulated") {
    throw std::invalid_argument("unknown kernel '" + c.kernel_name + "' for key 'kernel' (bm, rl, ou, tabulated)");
  }
  if (has("hurst")) c.hurst = to_double("hurst", e["hurst"]);
  if (c.kernel_name == "rl" && !has("hurst")) throw std::invalid_argument("key 'hurst' is required for kernel rl");
  if (!(c.hurst > 0.0 && c.hurst < 1.0)) throw std::invalid_argument("hurst must lie in (0,1)");
  if (has("theta")) c.theta = to_double("theta", e["theta"]);
  if (c.theta < 0.0) throw std::invalid_argument("theta must be >= 0");
  if (has("sigma")) c.sigma = to_double("sigma", e["sigma"]);
  if (!(c.sigma > 0.0)) throw std::invalid_argument("sigma must be > 0");
  if (has("tabulated")) c.tabulated_path = trim(e["tabulated"]);
  if (c.kernel_name == "tabulated" && c.tabulated_path.empty()) {
    throw std::invalid_argument("key 'tabulated' is required for kernel tabulated");
  }

  if (has("horizon")) c.horizon = to_double("horizon", e["horizon"]);
  if (!(c.horizon > 0.0)) throw std::invalid_argument("horizon must be > 0");
  if (has("cells")) c.cells = to_unsigned("cells", e["cells"]);
  if (c.cells < kMinCells || c.cells > kMaxCells) throw std::invalid_argument("cells must lie in [8, 4096]");

  const bool has_ab = has("a") || has("b");
  if (has_ab && has("rho")) throw std::invalid_argument("give either a/b or rho, not both");
  if (has("rho")) {
    const double rho = to_double("rho", e["rho"]);
    if (std::abs(rho) > 1.0) throw std::invalid_argument("rho must lie in [-1,1]");
    const MixParams p = rho_to_mix(rho);
    c.rho = rho;
    c.a = p.a();
    c.b = p.b();
  } else if (has_ab) {
    // A lone a means a noiseless channel; a lone b keeps a = 1.
    c.a = has("a") ? to_double("a", e["a"]) : 1.0;
    c.b = has("b") ? to_double("b", e["b"]) : 0.0;
    if (c.a == 0.0 && c.b == 0.0) throw std::invalid_argument("degenerate observation channel: keys 'a' and 'b' are both zero");
  }

  const TimeGrid grid = c.grid();
  if (has("u")) c.u = snap_value(grid, "u", to_double("u", e["u"]), c.snaps);
  if (has("t")) {
    for (double t : to_list("t", e["t"])) c.t.push_back(snap_value(grid, "t", t, c.snaps));
  }
  if (has("b_list")) c.b_list = to_list("b_list", e["b_list"]);

  if (has("paths")) c.n_paths = to_unsigned("paths", e["paths"]);
  if (c.n_paths < kMinPaths || c.n_paths > kMaxPaths) throw std::invalid_argument("paths must lie in [100, 10000000]");
  if (has("seed")) c.seed = to_unsigned("seed", e["seed"]);
  if (has("out")) c.out_dir = trim(e["out"]);
  if (c.out_dir.empty()) throw std::invalid_argument("key 'out' must not be empty");
  return c;
}

VolterraKernel make_kernel(const ExperimentConfig& config) {
  if (config.kernel_name == "bm") return VolterraKernel::brownian();
  if (config.kernel_name == "rl") return VolterraKernel::riemann_liouville(config.hurst);
  if (config.kernel_name == "ou") return VolterraKernel::exponential_ou(config.theta, config.sigma);
  if (config.kernel_name != "tabulated") throw std::invalid_argument("unknown kernel '" + config.kernel_name + "'");

  std::ifstream in(config.tabulated_path);
  if (!in) throw std::runtime_error("cannot open tabulated kernel file " + config.tabulated_path);
  const TimeGrid grid = config.grid();
  const std::size_t n = grid.cells();
  std::vector<double> packed(n * (n + 1) / 2, 0.0);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = trim(line);
    if (body.empty() || body.front() == '#' || (line_no == 1 && body.rfind("i,", 0) == 0)) continue;
    std::istringstream row(body);
    std::string fi, fj, fv;
    if (!std::getline(row, fi, ',') || !std::getline(row, fj, ',') || !std::getline(row, fv)) {
      throw std::invalid_argument(config.tabulated_path + ":" + std::to_string(line_no) + ": expected i,j,value");
    }
    const auto i = to_unsigned("tabulated", fi);
    const auto j = to_unsigned("tabulated", fj);
    if (i < 1 || i > n || j >= i) {
      throw std::invalid_argument(config.tabulated_path + ":" + std::to_string(line_no) +
                                  ": need 1 <= i <= cells and j < i");
    }
    packed[i * (i - 1) / 2 + j] = to_double("tabulated", fv);
  }
  return VolterraKernel::tabulated(grid, std::move(packed));
}

}  // namespace mgvp
