#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "tarp/data.hpp"
#include "tarp/posterior.hpp"
#include "tarp/projection.hpp"
#include "tarp/screening.hpp"

namespace tarp {

enum class TarpVariant { ris_rp, ris_pcr, plain_rp_baseline };

std::string to_string(TarpVariant v);
TarpVariant tarp_variant_from_string(const std::string& s);

/// Tuning for one replicate of the ensemble.
struct TarpConfig {
  Eigen::Index m = 1;
  double psi = 1.0 / 6.0;
  double delta = 2.0;
  TarpVariant variant = TarpVariant::ris_rp;
  std::uint64_t seed = 0;

  bool operator==(const TarpConfig&) const = default;
};

/// Hyperparameters and execution settings shared by every replicate.
struct FitOptions {
  double a_sigma = kDefaultSigmaShape;
  double b_sigma = kDefaultSigmaRate;
  double sigma_theta2 = 1.0;  // logistic prior variance
  unsigned threads = 1;
};

using ReplicatePosterior = std::variant<GaussianPosterior, LaplacePosterior>;

struct Replicate {
  TarpConfig config;
  ProjectionMatrix projection;
  ReplicatePosterior posterior;
};

struct TarpModel {
  std::vector<Replicate> replicates;
  StandardizationParams standardization;
  std::vector<std::string> column_names;  // may be empty
  ResponseKind response_kind = ResponseKind::continuous;
  std::uint64_t master_seed = 0;
  std::uint64_t data_hash = 0;
  Eigen::Index n_train = 0;
  FitOptions options;

  Eigen::Index predictors() const { return standardization.column_means.size(); }
};

/// Per-point output of the aggregated model. Continuous models fill point/lo/hi;
/// binary models fill probability.
struct TarpPrediction {
  ResponseKind kind = ResponseKind::continuous;
  Eigen::VectorXd point;
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;
  Eigen::VectorXd probability;
};

/// Inclusive m range used by the grid: [ceil(2 ln p), min(floor(3n/4), p)],
/// with the lower end dropped to 1 when it exceeds the upper end.
std::pair<Eigen::Index, Eigen::Index> projection_dimension_range(Eigen::Index n, Eigen::Index p);

/// N configurations with m uniform on projection_dimension_range and psi
/// uniform on (0.1, 0.4). Each config's seed is derived from master_seed and
/// its index.
std::vector<TarpConfig> sample_config_grid(Eigen::Index n, Eigen::Index p, int N,
                                           TarpVariant variant, double delta,
                                           std::uint64_t master_seed);

/// FNV-1a over the bytes of the design and response.
std::uint64_t hash_dataset(const Dataset& d);

/// Fits every configuration on already standardized data. Correlations are
/// computed once; replicates run on `options.threads` workers and are stored
/// in configuration order.
TarpModel fit_tarp(const Dataset& standardized, const StandardizationParams& params,
                   const std::vector<TarpConfig>& configs, const FitOptions& options = {},
                   std::uint64_t master_seed = 0);

/// Standardizes `raw_train` and fits.
TarpModel fit_tarp(const Dataset& raw_train, const std::vector<TarpConfig>& configs,
                   const FitOptions& options = {}, std::uint64_t master_seed = 0);

/// Fits one replicate; exposed for testing.
Replicate fit_replicate(const Dataset& standardized, const Eigen::VectorXd& correlations,
                        const TarpConfig& config, const FitOptions& options);

/// Averages replicate predictions for raw (unstandardized) rows. Intervals
/// are central quantiles of the equal-weight mixture of replicate predictive
/// t distributions.
TarpPrediction predict_tarp(const TarpModel& model, const Eigen::MatrixXd& X_new,
                            double level = 0.5);

/// One location-scale Student t.
struct TComponent {
  double df = 1.0;
  double location = 0.0;
  double scale = 1.0;  // standard-deviation-like scale, not squared
};

double mixture_cdf(const std::vector<TComponent>& components, double x);

/// x with mixture_cdf(x) = prob, by bisection between the smallest and
/// largest component quantiles. Returns the common quantile exactly when all
/// components are identical.
double mixture_quantile(const std::vector<TComponent>& components, double prob);

/// Central `level` interval of the mixture. When every component is the same
/// this is exactly central_interval of that component.
Interval mixture_central_interval(const std::vector<TComponent>& components, double level);

}  // namespace tarp
