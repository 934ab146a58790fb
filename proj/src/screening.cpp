#include "tarp/screening.hpp"

#include <cmath>

#include "tarp/error.hpp"

namespace tarp {

InclusionVector::InclusionVector(std::vector<bool> gamma) : gamma_(std::move(gamma)) {
  for (std::size_t j = 0; j < gamma_.size(); ++j)
    if (gamma_[j]) active_.push_back(static_cast<Eigen::Index>(j));
}

InclusionVector InclusionVector::all(Eigen::Index p) {
  return InclusionVector(std::vector<bool>(static_cast<std::size_t>(p), true));
}

Correlations marginal_correlations(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  if (X.rows() != y.size())
    throw DataError("marginal_correlations: X has " + std::to_string(X.rows()) +
                    " rows, y has " + std::to_string(y.size()));
  if (X.rows() < 2) throw DataError("marginal_correlations: need at least 2 rows");

  Correlations out;
  out.r = Eigen::VectorXd::Zero(X.cols());
  const Eigen::VectorXd yc = y.array() - y.mean();
  const double y_norm = yc.norm();
  if (y_norm <= 1e-12 * std::max(1.0, y.cwiseAbs().maxCoeff())) {
    out.degenerate_response = true;
    return out;
  }
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    const Eigen::VectorXd xc = X.col(j).array() - X.col(j).mean();
    const double x_norm = xc.norm();
    if (x_norm <= 1e-12 * std::max(1.0, X.col(j).cwiseAbs().maxCoeff())) continue;
    out.r[j] = std::clamp(xc.dot(yc) / (x_norm * y_norm), -1.0, 1.0);
  }
  return out;
}

double fallback_count(Eigen::Index p) {
  return std::max(1.0, std::ceil(2.0 * std::log(static_cast<double>(p))));
}

Eigen::VectorXd inclusion_probabilities(const Eigen::VectorXd& r, double delta) {
  if (!(delta >= 0.0)) throw InvalidArgument("delta must be non-negative");
  const Eigen::Index p = r.size();
  const double r_max = p > 0 ? r.cwiseAbs().maxCoeff() : 0.0;
  if (r_max == 0.0)
    return Eigen::VectorXd::Constant(
        p, std::min(1.0, fallback_count(p) / static_cast<double>(p)));
  Eigen::VectorXd q(p);
  for (Eigen::Index j = 0; j < p; ++j)
    q[j] = std::pow(std::abs(r[j]) / r_max, delta);
  return q;
}

ScreeningProfile screen(const Correlations& corr, double delta) {
  ScreeningProfile s;
  s.correlations = corr.r;
  s.delta = delta;
  s.degenerate_response = corr.degenerate_response;
  s.uniform_fallback = corr.r.size() > 0 && corr.r.cwiseAbs().maxCoeff() == 0.0;
  s.probabilities = inclusion_probabilities(corr.r, delta);
  return s;
}

InclusionVector sample_inclusion(const Eigen::VectorXd& q, Rng& rng) {
  const Eigen::Index p = q.size();
  if (p == 0) throw InvalidArgument("sample_inclusion: empty probability vector");
  for (Eigen::Index j = 0; j < p; ++j)
    if (!(q[j] >= 0.0 && q[j] <= 1.0))
      throw InvalidArgument("sample_inclusion: probabilities must lie in [0, 1]");

  std::vector<bool> gamma(static_cast<std::size_t>(p));
  for (int attempt = 0; attempt < 100; ++attempt) {
    bool any = false;
    for (Eigen::Index j = 0; j < p; ++j) {
      const bool g = rng.bernoulli(q[j]);
      gamma[static_cast<std::size_t>(j)] = g;
      any = any || g;
    }
    if (any) return InclusionVector(std::move(gamma));
  }
  Eigen::Index best = 0;
  q.maxCoeff(&best);
  gamma[static_cast<std::size_t>(best)] = true;
  return InclusionVector(std::move(gamma));
}

double default_delta(Eigen::Index n, Eigen::Index p) {
  if (n < 1 || p < 1) throw InvalidArgument("default_delta: n and p must be positive");
  return std::max(0.0, (1.0 + std::log(static_cast<double>(p) / static_cast<double>(n))) / 2.0);
}

}  // namespace tarp
