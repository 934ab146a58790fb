#pragma once

#include <vector>

#include <Eigen/Dense>

#include "tarp/rng.hpp"

namespace tarp {

/// Marginal correlations of each predictor with the response.
struct Correlations {
  Eigen::VectorXd r;
  /// Set when the response has no spread; every r_j is then 0.
  bool degenerate_response = false;
};

/// Correlations plus the randomized-screening inclusion probabilities.
struct ScreeningProfile {
  Eigen::VectorXd correlations;
  Eigen::VectorXd probabilities;
  double delta = 0.0;
  bool degenerate_response = false;
  /// True when every correlation was zero and uniform probabilities were used.
  bool uniform_fallback = false;
};

/// Selected predictor subset.
class InclusionVector {
 public:
  InclusionVector() = default;
  explicit InclusionVector(std::vector<bool> gamma);

  static InclusionVector all(Eigen::Index p);

  const std::vector<bool>& gamma() const { return gamma_; }
  Eigen::Index size() const { return static_cast<Eigen::Index>(gamma_.size()); }
  Eigen::Index count() const { return static_cast<Eigen::Index>(active_.size()); }
  bool operator[](Eigen::Index j) const { return gamma_[static_cast<std::size_t>(j)]; }
  /// Indices of the selected predictors, ascending.
  const std::vector<Eigen::Index>& active() const { return active_; }

  bool operator==(const InclusionVector& other) const { return gamma_ == other.gamma_; }

 private:
  std::vector<bool> gamma_;
  std::vector<Eigen::Index> active_;
};

/// Sample Pearson correlation of each column of X with y. Columns or
/// responses with zero spread give r = 0.
Correlations marginal_correlations(const Eigen::MatrixXd& X, const Eigen::VectorXd& y);

/// q_j = (|r_j| / max_k |r_k|)^delta. When every r_j is 0 the result is the
/// uniform min(1, fallback_count / p).
Eigen::VectorXd inclusion_probabilities(const Eigen::VectorXd& r, double delta);

/// Expected subset size used by the all-zero-correlation fallback:
/// ceil(2 ln p), at least 1.
double fallback_count(Eigen::Index p);

ScreeningProfile screen(const Correlations& corr, double delta);

/// Independent Bernoulli(q_j) draws. Never returns an empty set: empty draws
/// are redrawn up to 100 times, after which argmax q is included.
InclusionVector sample_inclusion(const Eigen::VectorXd& q, Rng& rng);

/// max{0, (1 + ln(p / n)) / 2}
double default_delta(Eigen::Index n, Eigen::Index p);

}  // namespace tarp
