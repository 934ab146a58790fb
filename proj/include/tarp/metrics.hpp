#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tarp/posterior.hpp"

namespace tarp {

struct RegressionReport {
  double mspe = 0.0;
  double ecp = 0.0;
  double mean_width = 0.0;
  Eigen::VectorXd residuals;  // y - prediction
};

struct ClassificationReport {
  double misclassification_rate = 0.0;
  double auc = 0.0;
  bool auc_defined = true;  // false when only one class is present
  double msd_calibration = 0.0;
};

/// Mean squared error, coverage of closed intervals and mean interval width.
RegressionReport evaluate_regression(const Eigen::VectorXd& pred,
                                     const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                                     const Eigen::VectorXd& y_true);
RegressionReport evaluate_regression(const Eigen::VectorXd& pred,
                                     const std::vector<Interval>& intervals,
                                     const Eigen::VectorXd& y_true);

/// Rank-based AUC with half credit for ties (Mann-Whitney).
double auc(const Eigen::VectorXd& score, const Eigen::VectorXd& y_true);

/// Mean over nonempty deciles of (observed positive fraction - bin midpoint)^2.
double calibration_msd(const Eigen::VectorXd& prob, const Eigen::VectorXd& y_true);

ClassificationReport evaluate_classification(const Eigen::VectorXd& prob,
                                             const Eigen::VectorXd& y_true,
                                             double threshold = 0.5);

/// Half-width t_{df,(1+level)/2} * sqrt(residual_mse * (1 + leverage)).
double frequentist_interval(double residual_mse, double leverage, double df, double level);

std::string to_json(const RegressionReport& r);
std::string to_json(const ClassificationReport& r);

}  // namespace tarp
