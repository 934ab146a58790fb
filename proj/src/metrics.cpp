#include "tarp/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include <json.hpp>

#include "tarp/error.hpp"

namespace tarp {

namespace {

void require_same_length(Eigen::Index a, Eigen::Index b, const char* who) {
  if (a != b)
    throw DataError(std::string(who) + ": length mismatch (" + std::to_string(a) + " vs " +
                    std::to_string(b) + ")");
}

}  // namespace

RegressionReport evaluate_regression(const Eigen::VectorXd& pred, const Eigen::VectorXd& lo,
                                     const Eigen::VectorXd& hi, const Eigen::VectorXd& y_true) {
  require_same_length(pred.size(), y_true.size(), "evaluate_regression");
  require_same_length(lo.size(), y_true.size(), "evaluate_regression");
  require_same_length(hi.size(), y_true.size(), "evaluate_regression");
  if (y_true.size() == 0) throw DataError("evaluate_regression: no points");

  RegressionReport r;
  r.residuals = y_true - pred;
  r.mspe = r.residuals.squaredNorm() / static_cast<double>(y_true.size());
  Eigen::Index covered = 0;
  for (Eigen::Index i = 0; i < y_true.size(); ++i)
    if (y_true[i] >= lo[i] && y_true[i] <= hi[i]) ++covered;
  r.ecp = static_cast<double>(covered) / static_cast<double>(y_true.size());
  r.mean_width = (hi - lo).mean();
  return r;
}

RegressionReport evaluate_regression(const Eigen::VectorXd& pred,
                                     const std::vector<Interval>& intervals,
                                     const Eigen::VectorXd& y_true) {
  const auto k = static_cast<Eigen::Index>(intervals.size());
  Eigen::VectorXd lo(k), hi(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    lo[i] = intervals[static_cast<std::size_t>(i)].lo;
    hi[i] = intervals[static_cast<std::size_t>(i)].hi;
  }
  return evaluate_regression(pred, lo, hi, y_true);
}

double auc(const Eigen::VectorXd& score, const Eigen::VectorXd& y_true) {
  require_same_length(score.size(), y_true.size(), "auc");
  const auto n = static_cast<std::size_t>(score.size());
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return score[static_cast<Eigen::Index>(a)] < score[static_cast<Eigen::Index>(b)];
  });
  // Average ranks over tied groups.
  double rank_sum_pos = 0.0;
  double n_pos = 0.0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && score[static_cast<Eigen::Index>(order[j + 1])] ==
                            score[static_cast<Eigen::Index>(order[i])])
      ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k)
      if (y_true[static_cast<Eigen::Index>(order[k])] == 1.0) {
        rank_sum_pos += avg_rank;
        n_pos += 1.0;
      }
    i = j + 1;
  }
  const double n_neg = static_cast<double>(n) - n_pos;
  if (n_pos == 0.0 || n_neg == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return (rank_sum_pos - n_pos * (n_pos + 1.0) / 2.0) / (n_pos * n_neg);
}

double calibration_msd(const Eigen::VectorXd& prob, const Eigen::VectorXd& y_true) {
  require_same_length(prob.size(), y_true.size(), "calibration_msd");
  std::array<double, 10> count{}, positives{};
  for (Eigen::Index i = 0; i < prob.size(); ++i) {
    const auto bin = std::min<std::size_t>(9, static_cast<std::size_t>(std::max(0.0, prob[i]) * 10.0));
    count[bin] += 1.0;
    positives[bin] += y_true[i];
  }
  double sum = 0.0;
  int occupied = 0;
  for (std::size_t k = 0; k < 10; ++k) {
    if (count[k] == 0.0) continue;
    const double mid = (static_cast<double>(k) + 0.5) / 10.0;
    const double diff = positives[k] / count[k] - mid;
    sum += diff * diff;
    ++occupied;
  }
  return occupied ? sum / occupied : 0.0;
}

ClassificationReport evaluate_classification(const Eigen::VectorXd& prob,
                                             const Eigen::VectorXd& y_true, double threshold) {
  require_same_length(prob.size(), y_true.size(), "evaluate_classification");
  if (prob.size() == 0) throw DataError("evaluate_classification: no points");
  ClassificationReport r;
  Eigen::Index wrong = 0;
  for (Eigen::Index i = 0; i < prob.size(); ++i) {
    if (!(prob[i] >= 0.0 && prob[i] <= 1.0))
      throw DataError("evaluate_classification: probabilities must lie in [0, 1]");
    const double label = prob[i] > threshold ? 1.0 : 0.0;
    if (label != y_true[i]) ++wrong;
  }
  r.misclassification_rate = static_cast<double>(wrong) / static_cast<double>(prob.size());
  r.auc = auc(prob, y_true);
  r.auc_defined = !std::isnan(r.auc);
  r.msd_calibration = calibration_msd(prob, y_true);
  return r;
}

double frequentist_interval(double residual_mse, double leverage, double df, double level) {
  if (!(df >= 1.0)) throw InvalidArgument("frequentist_interval: df must be at least 1");
  if (!(leverage >= 0.0)) throw InvalidArgument("frequentist_interval: leverage must be >= 0");
  if (!(residual_mse >= 0.0)) throw InvalidArgument("frequentist_interval: mse must be >= 0");
  return t_quantile(df, level) * std::sqrt(residual_mse * (1.0 + leverage));
}

std::string to_json(const RegressionReport& r) {
  return nlohmann::json{{"mspe", r.mspe}, {"ecp", r.ecp}, {"mean_width", r.mean_width}}.dump();
}

std::string to_json(const ClassificationReport& r) {
  nlohmann::json j{{"misclassification_rate", r.misclassification_rate},
                   {"msd_calibration", r.msd_calibration}};
  j["auc"] = r.auc_defined ? nlohmann::json(r.auc) : nlohmann::json(nullptr);
  return j.dump();
}

}  // namespace tarp
