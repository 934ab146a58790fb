#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace tarp {

/// Normal-inverse-gamma posterior for y = Z theta + e in the compressed space,
/// with theta | sigma^2 ~ N(0, sigma^2 I) and sigma^2 ~ IG(a_sigma, b_sigma).
struct GaussianPosterior {
  Eigen::VectorXd location;           // posterior mean of theta
  Eigen::MatrixXd precision_inverse;  // (Z'Z + I)^-1
  Eigen::MatrixXd scale;              // scale matrix of the posterior t
  double df = 0.0;                    // n + 2 a_sigma
  double ig_shape = 0.0;              // a_sigma + n / 2
  double ig_rate = 0.0;               // b_sigma + residual_quadratic / 2
  double residual_quadratic = 0.0;    // y'y - mu' (Z'Z + I) mu
  Eigen::Index n = 0;
  double a_sigma = 0.0;
  double b_sigma = 0.0;

  Eigen::Index dim() const { return location.size(); }
  /// Covariance of theta under the posterior t (requires df > 2).
  Eigen::MatrixXd theta_covariance() const;
  /// (residual_quadratic + 2 b_sigma) / (n + 2 a_sigma)
  double noise_scale() const;
};

/// Multivariate-t predictive for new compressed rows.
struct PredictiveT {
  double df = 0.0;
  Eigen::VectorXd location;
  Eigen::VectorXd marginal_scale;  // diagonal of the scale matrix
  Eigen::MatrixXd scale_matrix;    // empty unless requested
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Gaussian-prior logistic regression approximated at its posterior mode.
struct LaplacePosterior {
  Eigen::VectorXd mode;
  Eigen::MatrixXd hessian_at_mode;  // negative Hessian of the log posterior
  double prior_variance = 1.0;
  int iterations = 0;
  double gradient_norm = 0.0;
};

inline constexpr double kDefaultSigmaShape = 0.02;
inline constexpr double kDefaultSigmaRate = 0.02;

GaussianPosterior fit_gaussian(const Eigen::MatrixXd& Z, const Eigen::VectorXd& y,
                               double a_sigma = kDefaultSigmaShape,
                               double b_sigma = kDefaultSigmaRate);

/// (Z'Z + I)^-1 Z' y by Householder QR on the stacked system [Z; I] theta = [y; 0].
/// Independent of the Cholesky route used by fit_gaussian.
Eigen::VectorXd ridge_estimator_qr(const Eigen::MatrixXd& Z, const Eigen::VectorXd& y);

/// Z_new mu.
Eigen::VectorXd point_predict(const GaussianPosterior& post, const Eigen::MatrixXd& Z_new);

PredictiveT predictive(const GaussianPosterior& post, const Eigen::MatrixXd& Z_new,
                       bool full_scale_matrix = false);

/// Upper (1 + level) / 2 quantile of Student t with `df` degrees of freedom.
double t_quantile(double df, double level);

/// Symmetric central interval per point.
std::vector<Interval> central_interval(const PredictiveT& pred, double level);

/// Log posterior (up to a constant) and its gradient for logistic regression
/// with a N(0, sigma_theta2 I) prior.
double logistic_log_posterior(const Eigen::MatrixXd& Z, const Eigen::VectorXd& y,
                              double sigma_theta2, const Eigen::VectorXd& theta);
Eigen::VectorXd logistic_gradient(const Eigen::MatrixXd& Z, const Eigen::VectorXd& y,
                                  double sigma_theta2, const Eigen::VectorXd& theta);

/// Damped Newton ascent to gradient norm < 1e-8 (at most 100 iterations).
LaplacePosterior fit_bernoulli_laplace(const Eigen::MatrixXd& Z, const Eigen::VectorXd& y,
                                       double sigma_theta2 = 1.0);

Eigen::VectorXd predict_prob(const LaplacePosterior& post, const Eigen::MatrixXd& Z_new);

}  // namespace tarp
