#include "mgvp/experiment.h"

#include <system_error>

#include "mgvp/application.h"
#include "mgvp/covariance_matrix.h"
#include "mgvp/csv.h"
#include "mgvp/prediction.h"
#include "mgvp/simulation.h"

namespace mgvp {

namespace {

namespace fs = std::filesystem;

CsvTable matrix_table(const CovarianceMatrix& m) {
  CsvTable table({"t", "s", "cov"});
  const TimeGrid& g = m.grid();
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t k = 0; k < m.size(); ++k) {
      table.add_row({format_double(g.node(i)), format_double(g.node(k)), format_double(m(i, k))});
    }
  }
  return table;
}

void emit(const CsvTable& table, const fs::path& path, RunResult& result, std::ostream& log) {
  table.write(path);
  result.files.push_back(path);
  log << "wrote " << path.string() << '\n';
}

std::size_t resolve_node(const TimeGrid& grid, const std::optional<double>& t, double fallback) {
  return grid.node_index(t ? *t : grid.snap(fallback).time);
}

void run_predict(const ExperimentConfig& c, const fs::path& dir, RunResult& result, std::ostream& log) {
  const TimeGrid grid = c.grid();
  const KernelMatrix km(make_kernel(c), grid);
  const MixParams params = c.params();
  const std::size_t iu = resolve_node(grid, c.u, grid.horizon());

  const NoiseDraw noise = draw_noise(grid, c.seed, 0);
  const PathBundle bundle = make_bundle(km, noise, params);
  const PredictionLaw law = prediction_law(km, params, bundle.dWab, iu);

  CsvTable path({"t", "X", "Xt", "Xb", "Wab"});
  double w = 0.0;
  for (std::size_t i = 0; i < grid.nodes(); ++i) {
    if (i > 0) w += bundle.dWab[i - 1];
    path.add_row({format_double(grid.node(i)), format_double(bundle.X[i]), format_double(bundle.Xt[i]),
                  format_double(bundle.Xb[i]), format_double(w)});
  }
  CsvTable mean({"t", "mean"});
  for (std::size_t i = 0; i < grid.nodes(); ++i) {
    mean.add_row({format_double(grid.node(i)), format_double(law.mean[i])});
  }
  emit(path, dir / "path.csv", result, log);
  emit(mean, dir / "mean.csv", result, log);
  emit(matrix_table(law.cov), dir / "cov.csv", result, log);
}

void run_covariance(const ExperimentConfig& c, const fs::path& dir, RunResult& result, std::ostream& log) {
  const KernelMatrix km(make_kernel(c), c.grid());
  const CovarianceMatrix cov = covariance_matrix(km);
  result.all_pass = cov.is_valid_covariance();
  emit(matrix_table(cov), dir / "cov.csv", result, log);
}

void run_mse_study(const ExperimentConfig& c, const fs::path& dir, RunResult& result, std::ostream& log) {
  const TimeGrid grid = c.grid();
  const KernelMatrix km(make_kernel(c), grid);
  std::vector<double> times = c.t;
  if (times.empty()) times.push_back(grid.horizon());

  CsvTable table({"t", "b", "naive_analytic", "naive_mc", "naive_se", "filtered_analytic", "filtered_mc",
                  "filtered_se", "ratio", "pass"});
  for (double t : times) {
    for (const MseReport& row : variance_reduction_report(km, c.b_list, grid.node_index(t), c.n_paths, c.seed)) {
      result.all_pass = result.all_pass && row.pass();
      table.add_row({format_double(row.t), format_double(row.b), format_double(row.naive_analytic),
                     format_double(row.naive_mc.mse), format_double(row.naive_mc.standard_error),
                     format_double(row.filtered_analytic), format_double(row.filtered_mc.mse),
                     format_double(row.filtered_mc.standard_error), format_double(row.reduction_ratio),
                     row.pass() ? "true" : "false"});
    }
  }
  emit(table, dir / "mse.csv", result, log);
}

void run_verify(const ExperimentConfig& c, const fs::path& dir, RunResult& result, std::ostream& log) {
  CsvTable table({"check_name", "statistic", "tolerance", "pass"});
  for (const CheckResult& r : run_verification(verify_settings(c))) {
    result.all_pass = result.all_pass && r.pass;
    table.add_row({r.name, format_double(r.statistic), format_double(r.tolerance), r.pass ? "true" : "false"});
    log << (r.pass ? "PASS " : "FAIL ") << r.name << " statistic=" << format_double(r.statistic)
        << " tolerance=" << format_double(r.tolerance) << '\n';
  }
  emit(table, dir / "verify.csv", result, log);
}

}  // namespace

VerifySettings verify_settings(const ExperimentConfig& c) {
  const TimeGrid grid = c.grid();
  std::vector<std::size_t> t_nodes;
  if (c.t.empty()) {
    for (double f : {0.25, 0.75, 1.0}) t_nodes.push_back(grid.snap(f * grid.horizon()).index);
  } else {
    for (double t : c.t) t_nodes.push_back(grid.node_index(t));
  }
  return VerifySettings{make_kernel(c), grid,     c.params(), resolve_node(grid, c.u, 0.5 * grid.horizon()),
                        t_nodes,        c.b_list, c.n_paths,  c.seed};
}

RunResult run_experiment(const ExperimentConfig& config, std::ostream& log) {
  const fs::path dir(config.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());

  RunResult result;
  switch (config.kind) {
    case ExperimentKind::kPredict: run_predict(config, dir, result, log); break;
    case ExperimentKind::kCovariance: run_covariance(config, dir, result, log); break;
    case ExperimentKind::kMseStudy: run_mse_study(config, dir, result, log); break;
    case ExperimentKind::kVerify: run_verify(config, dir, result, log); break;
  }
  return result;
}

}  // namespace mgvp
