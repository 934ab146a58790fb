#include "tarp/posterior.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "tarp/error.hpp"

namespace tarp {

Eigen::MatrixXd GaussianPosterior::theta_covariance() const {
  if (!(df > 2.0)) throw NumericalError("posterior covariance needs df > 2");
  return scale * (df / (df - 2.0));
}

double GaussianPosterior::noise_scale() const {
  return (residual_quadratic + 2.0 * b_sigma) / (static_cast<double>(n) + 2.0 * a_sigma);
}

GaussianPosterior fit_gaussian(const Eigen::MatrixXd& Z, const Eigen::VectorXd& y,
                               double a_sigma, double b_sigma) {
  if (Z.rows() != y.size())
    throw DataError("fit_gaussian: design has " + std::to_string(Z.rows()) +
                    " rows, response has " + std::to_string(y.size()));
  if (!(a_sigma > 0.0 && b_sigma > 0.0))
    throw InvalidArgument("inverse-gamma hyperparameters must be positive");
  if (!Z.allFinite() || !y.allFinite()) throw DataError("fit_gaussian: non-finite input");

  const Eigen::Index m = Z.cols();
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(m, m);
  A.selfadjointView<Eigen::Lower>().rankUpdate(Z.transpose());
  A = A.selfadjointView<Eigen::Lower>();

  Eigen::LLT<Eigen::MatrixXd> llt(A);
  // Z'Z + I has every eigenvalue >= 1.
  if (llt.info() != Eigen::Success) throw NumericalError("Cholesky of Z'Z + I failed");

  GaussianPosterior post;
  post.n = Z.rows();
  post.a_sigma = a_sigma;
  post.b_sigma = b_sigma;
  post.location = llt.solve(Z.transpose() * y);
  post.precision_inverse = llt.solve(Eigen::MatrixXd::Identity(m, m));
  post.precision_inverse =
      0.5 * (post.precision_inverse + post.precision_inverse.transpose()).eval();
  // y'y - mu'(Z'Z + I)mu == ||y - Z mu||^2 + ||mu||^2, which avoids cancellation.
  post.residual_quadratic = (y - Z * post.location).squaredNorm() + post.location.squaredNorm();
  post.df = static_cast<double>(post.n) + 2.0 * a_sigma;
  post.ig_shape = a_sigma + 0.5 * static_cast<double>(post.n);
  post.ig_rate = b_sigma + 0.5 * post.residual_quadratic;
  post.scale = post.noise_scale() * post.precision_inverse;
  return post;
}

Eigen::VectorXd ridge_estimator_qr(const Eigen::MatrixXd& Z, const Eigen::VectorXd& y) {
  if (Z.rows() != y.size()) throw DataError("ridge_estimator_qr: dimension mismatch");
  const Eigen::Index n = Z.rows();
  const Eigen::Index m = Z.cols();
  Eigen::MatrixXd stacked(n + m, m);
  stacked << Z, Eigen::MatrixXd::Identity(m, m);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + m);
  rhs.head(n) = y;
  return stacked.householderQr().solve(rhs);
}

namespace {

void check_columns(const Eigen::MatrixXd& Z_new, Eigen::Index m, const char* who) {
  if (Z_new.cols() != m)
    throw DataError(std::string(who) + ": new design has " + std::to_string(Z_new.cols()) +
                    " columns, posterior has dimension " + std::to_string(m));
}

}  // namespace

Eigen::VectorXd point_predict(const GaussianPosterior& post, const Eigen::MatrixXd& Z_new) {
  check_columns(Z_new, post.dim(), "point_predict");
  return Z_new * post.location;
}

PredictiveT predictive(const GaussianPosterior& post, const Eigen::MatrixXd& Z_new,
                       bool full_scale_matrix) {
  check_columns(Z_new, post.dim(), "predictive");
  PredictiveT pred;
  pred.df = post.df;
  pred.location = Z_new * post.location;
  const double c = post.noise_scale();
  const Eigen::MatrixXd ZP = Z_new * post.precision_inverse;
  pred.marginal_scale =
      c * (1.0 + (ZP.array() * Z_new.array()).rowwise().sum()).matrix();
  if (full_scale_matrix) {
    pred.scale_matrix = Eigen::MatrixXd::Identity(Z_new.rows(), Z_new.rows());
    pred.scale_matrix.noalias() += ZP * Z_new.transpose();
    pred.scale_matrix *= c;
  }
  return pred;
}

double t_quantile(double df, double level) {
  if (!(level > 0.0 && level < 1.0)) throw InvalidArgument("level must lie in (0, 1)");
  if (!(df > 0.0)) throw InvalidArgument("degrees of freedom must be positive");
  const double prob = 0.5 * (1.0 + level);
  if (std::isinf(df)) return boost::math::quantile(boost::math::normal_distribution<>(), prob);
  return boost::math::quantile(boost::math::students_t_distribution<>(df), prob);
}

std::vector<Interval> central_interval(const PredictiveT& pred, double level) {
  const double q = t_quantile(pred.df, level);
  std::vector<Interval> out(static_cast<std::size_t>(pred.location.size()));
  for (Eigen::Index i = 0; i < pred.location.size(); ++i) {
    const double half = q * std::sqrt(pred.marginal_scale[i]);
    out[static_cast<std::size_t>(i)] = {pred.location[i] - half, pred.location[i] + half};
  }
  return out;
}

namespace {

double log1p_exp(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

double logistic(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

void check_logistic_inputs(const Eigen::MatrixXd& Z, const Eigen::VectorXd& y,
                           double sigma_theta2) {
  if (Z.rows() != y.size()) throw DataError("logistic fit: dimension mismatch");
  if (!(sigma_theta2 > 0.0)) throw InvalidArgument("prior variance must be positive");
  for (Eigen::Index i = 0; i < y.size(); ++i)
    if (y[i] != 0.0 && y[i] != 1.0) throw DataError("logistic fit: response must be 0/1");
}

}  // namespace

double logistic_log_posterior(const Eigen::MatrixXd& Z, const Eigen::VectorXd& y,
                              double sigma_theta2, const Eigen::VectorXd& theta) {
  const Eigen::VectorXd eta = Z * theta;
  double ll = 0.0;
  for (Eigen::Index i = 0; i < eta.size(); ++i) ll += y[i] * eta[i] - log1p_exp(eta[i]);
  return ll - theta.squaredNorm() / (2.0 * sigma_theta2);
}

Eigen::VectorXd logistic_gradient(const Eigen::MatrixXd& Z, const Eigen::VectorXd& y,
                                  double sigma_theta2, const Eigen::VectorXd& theta) {
  const Eigen::VectorXd eta = Z * theta;
  Eigen::VectorXd resid(eta.size());
  for (Eigen::Index i = 0; i < eta.size(); ++i) resid[i] = y[i] - logistic(eta[i]);
  return Z.transpose() * resid - theta / sigma_theta2;
}

LaplacePosterior fit_bernoulli_laplace(const Eigen::MatrixXd& Z, const Eigen::VectorXd& y,
                                       double sigma_theta2) {
  check_logistic_inputs(Z, y, sigma_theta2);
  constexpr double kTol = 1e-8;
  constexpr int kMaxIter = 100;

  const Eigen::Index m = Z.cols();
  LaplacePosterior post;
  post.prior_variance = sigma_theta2;
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(m);
  double f = logistic_log_posterior(Z, y, sigma_theta2, theta);

  auto neg_hessian = [&](const Eigen::VectorXd& th) {
    const Eigen::VectorXd eta = Z * th;
    Eigen::VectorXd w(eta.size());
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
      const double pi = logistic(eta[i]);
      w[i] = pi * (1.0 - pi);
    }
    Eigen::MatrixXd H = Eigen::MatrixXd::Identity(m, m) / sigma_theta2;
    H.noalias() += Z.transpose() * w.asDiagonal() * Z;
    return H;
  };

  Eigen::VectorXd grad = logistic_gradient(Z, y, sigma_theta2, theta);
  int iter = 0;
  while (grad.norm() >= kTol && iter < kMaxIter) {
    ++iter;
    Eigen::LLT<Eigen::MatrixXd> llt(neg_hessian(theta));
    if (llt.info() != Eigen::Success) throw NumericalError("logistic Hessian lost definiteness");
    const Eigen::VectorXd step = llt.solve(grad);

    double t = 1.0;
    Eigen::VectorXd candidate = theta + step;
    double f_new = logistic_log_posterior(Z, y, sigma_theta2, candidate);
    for (int halving = 0; halving < 60 && f_new < f - 1e-14 * (1.0 + std::abs(f)); ++halving) {
      t *= 0.5;
      candidate = theta + t * step;
      f_new = logistic_log_posterior(Z, y, sigma_theta2, candidate);
    }
    theta = std::move(candidate);
    f = f_new;
    grad = logistic_gradient(Z, y, sigma_theta2, theta);
  }
  post.iterations = iter;
  post.gradient_norm = grad.norm();
  if (post.gradient_norm >= kTol)
    throw NumericalError("logistic Newton iterations did not converge (gradient norm " +
                         std::to_string(post.gradient_norm) + ")");
  post.mode = std::move(theta);
  post.hessian_at_mode = neg_hessian(post.mode);
  return post;
}

Eigen::VectorXd predict_prob(const LaplacePosterior& post, const Eigen::MatrixXd& Z_new) {
  if (Z_new.cols() != post.mode.size())
    throw DataError("predict_prob: new design has " + std::to_string(Z_new.cols()) +
                    " columns, posterior has dimension " + std::to_string(post.mode.size()));
  const Eigen::VectorXd eta = Z_new * post.mode;
  return eta.unaryExpr([](double e) { return logistic(e); });
}

}  // namespace tarp
