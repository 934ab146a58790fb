#include "tarp/bench.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "tarp/error.hpp"
#include "tarp/parallel.hpp"

namespace tarp {

namespace {

struct Moments {
  double mean = 0.0;
  double sd = 0.0;
};

Moments moments(const std::vector<double>& v) {
  Moments m;
  if (v.empty()) return m;
  for (double x : v) m.mean += x;
  m.mean /= static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - m.mean) * (x - m.mean);
    m.sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
  }
  return m;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

std::vector<BenchRow> run_experiment(const BenchOptions& o, int r, double delta) {
  const std::uint64_t experiment_seed = derive_seed(o.seed, static_cast<std::uint64_t>(r));
  SchemeSpec spec{o.scheme, o.n + o.n_test, o.p, o.noise_sd, experiment_seed};
  const Simulated sim = generate(spec);

  std::vector<Eigen::Index> train_idx(static_cast<std::size_t>(o.n));
  std::vector<Eigen::Index> test_idx(static_cast<std::size_t>(o.n_test));
  for (Eigen::Index i = 0; i < o.n; ++i) train_idx[static_cast<std::size_t>(i)] = i;
  for (Eigen::Index i = 0; i < o.n_test; ++i) test_idx[static_cast<std::size_t>(i)] = o.n + i;
  const Dataset train = select_rows(sim.data, train_idx);
  const Dataset test = select_rows(sim.data, test_idx);
  auto [standardized, params] = standardize(train);

  std::vector<BenchRow> rows;
  FitOptions fit_options;
  fit_options.threads = 1;
  for (TarpVariant v : o.variants) {
    const std::uint64_t master =
        derive_seed(experiment_seed, 1000 + static_cast<std::uint64_t>(v));
    const auto configs = sample_config_grid(o.n, o.p, o.ensemble_size, v, delta, master);
    const TarpModel model = fit_tarp(standardized, params, configs, fit_options, master);
    const TarpPrediction pred = predict_tarp(model, test.design, o.level);
    rows.push_back({r, v, evaluate_regression(pred.point, pred.lo, pred.hi, test.response)});
  }
  return rows;
}

}  // namespace

BenchResult run_benchmark(const BenchOptions& o) {
  if (o.replicates < 1) throw InvalidArgument("bench needs at least one replicate");
  if (o.n_test < 1) throw InvalidArgument("bench needs at least one test row");
  if (o.variants.empty()) throw InvalidArgument("bench needs at least one variant");

  BenchResult result;
  result.delta = o.delta.value_or(default_delta(o.n, o.p));

  std::vector<std::vector<BenchRow>> per_experiment(static_cast<std::size_t>(o.replicates));
  parallel_for_index(per_experiment.size(), o.threads, [&](std::size_t r) {
    per_experiment[r] = run_experiment(o, static_cast<int>(r), result.delta);
  });
  for (auto& rows : per_experiment)
    for (auto& row : rows) result.rows.push_back(std::move(row));

  for (TarpVariant v : o.variants) {
    std::vector<double> mspe, ecp, width;
    for (const auto& row : result.rows) {
      if (row.method != v) continue;
      mspe.push_back(row.report.mspe);
      ecp.push_back(row.report.ecp);
      width.push_back(row.report.mean_width);
    }
    BenchSummary s;
    s.method = v;
    const Moments a = moments(mspe), b = moments(ecp), c = moments(width);
    s.mspe_mean = a.mean;
    s.mspe_sd = a.sd;
    s.mspe_median = median(mspe);
    s.ecp_mean = b.mean;
    s.ecp_sd = b.sd;
    s.width_mean = c.mean;
    s.width_sd = c.sd;
    result.summaries.push_back(s);
  }
  return result;
}

void write_bench_csv(const BenchResult& result, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << "replicate,method,mspe,ecp,width\n";
  for (const auto& row : result.rows)
    out << row.replicate << ',' << to_string(row.method) << ',' << format_double(row.report.mspe)
        << ',' << format_double(row.report.ecp) << ',' << format_double(row.report.mean_width)
        << '\n';
  for (const auto& s : result.summaries) {
    out << "mean," << to_string(s.method) << ',' << format_double(s.mspe_mean) << ','
        << format_double(s.ecp_mean) << ',' << format_double(s.width_mean) << '\n';
    out << "sd," << to_string(s.method) << ',' << format_double(s.mspe_sd) << ','
        << format_double(s.ecp_sd) << ',' << format_double(s.width_sd) << '\n';
  }
  if (!out) throw DataError("write to '" + path.string() + "' failed");
}

void write_plot_data(const BenchResult& result, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << "replicate,method,metric,value\n";
  for (const auto& row : result.rows) {
    const std::string prefix = std::to_string(row.replicate) + "," + to_string(row.method) + ",";
    out << prefix << "mspe," << format_double(row.report.mspe) << '\n';
    out << prefix << "ecp," << format_double(row.report.ecp) << '\n';
    out << prefix << "width," << format_double(row.report.mean_width) << '\n';
  }
  if (!out) throw DataError("write to '" + path.string() + "' failed");
}

}  // namespace tarp
