#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tarp/ensemble.hpp"
#include "tarp/metrics.hpp"
#include "tarp/simgen.hpp"

namespace tarp {

/// Repeated train/test experiments on one simulation scheme.
struct BenchOptions {
  Scheme scheme = Scheme::III;
  Eigen::Index n = 200;       // training rows
  Eigen::Index p = 2000;
  Eigen::Index n_test = 100;  // held-out rows per experiment
  int replicates = 30;
  int ensemble_size = 50;
  std::vector<TarpVariant> variants{TarpVariant::ris_rp};
  std::optional<double> delta;  // default_delta(n, p) when unset
  double level = 0.5;
  double noise_sd = 1.0;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

struct BenchRow {
  int replicate = 0;
  TarpVariant method = TarpVariant::ris_rp;
  RegressionReport report;
};

struct BenchSummary {
  TarpVariant method = TarpVariant::ris_rp;
  double mspe_mean = 0.0, mspe_sd = 0.0, mspe_median = 0.0;
  double ecp_mean = 0.0, ecp_sd = 0.0;
  double width_mean = 0.0, width_sd = 0.0;
};

struct BenchResult {
  std::vector<BenchRow> rows;  // replicate-major, variants in option order
  std::vector<BenchSummary> summaries;
  double delta = 0.0;
};

/// Runs every experiment; experiments are spread over `threads` workers and
/// each ensemble fit is single-threaded, so output does not depend on the
/// thread count.
BenchResult run_benchmark(const BenchOptions& options);

/// One row per (replicate, method) followed by mean and sd rows per method.
void write_bench_csv(const BenchResult& result, const std::filesystem::path& path);

/// Long format: replicate,method,metric,value.
void write_plot_data(const BenchResult& result, const std::filesystem::path& path);

}  // namespace tarp
