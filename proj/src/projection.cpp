#include "tarp/projection.hpp"

#include <cmath>
#include <limits>

#include "tarp/error.hpp"
#include "tarp/rng.hpp"

namespace tarp {

std::string to_string(ProjectionVariant v) {
  switch (v) {
    case ProjectionVariant::ris_rp:
      return "ris_rp";
    case ProjectionVariant::sparse_variant:
      return "sparse_variant";
    case ProjectionVariant::ris_pcr:
      return "ris_pcr";
  }
  return "?";
}

ProjectionVariant projection_variant_from_string(const std::string& s) {
  if (s == "ris_rp") return ProjectionVariant::ris_rp;
  if (s == "sparse_variant") return ProjectionVariant::sparse_variant;
  if (s == "ris_pcr") return ProjectionVariant::ris_pcr;
  throw InvalidArgument("unknown projection variant '" + s + "'");
}

Eigen::MatrixXd ProjectionMatrix::to_dense() const {
  Eigen::MatrixXd R = Eigen::MatrixXd::Zero(rows_, cols());
  if (variant_ == ProjectionVariant::ris_pcr) {
    const auto& active = gamma_.active();
    for (std::size_t a = 0; a < active.size(); ++a)
      R.col(active[a]) = block_.col(static_cast<Eigen::Index>(a));
    return R;
  }
  for (Eigen::Index j = 0; j < cols(); ++j)
    for (Eigen::Index k = col_ptr_[j]; k < col_ptr_[j + 1]; ++k)
      R(row_index_[k], j) = values_[k];
  return R;
}

bool ProjectionMatrix::operator==(const ProjectionMatrix& o) const {
  return variant_ == o.variant_ && rows_ == o.rows_ && requested_rows_ == o.requested_rows_ &&
         gamma_ == o.gamma_ && psi_ == o.psi_ && kappa_ == o.kappa_ &&
         kappa_n_ == o.kappa_n_ && seed_ == o.seed_ && col_ptr_ == o.col_ptr_ &&
         row_index_ == o.row_index_ && values_ == o.values_ &&
         block_.rows() == o.block_.rows() && block_.cols() == o.block_.cols() &&
         block_ == o.block_;
}

namespace {

// Fills the compressed-column structure by visiting every (row, active column)
// cell once in column-major order. `draw` returns 0 for an empty cell.
template <typename Draw>
void fill_columns(const InclusionVector& gamma, Eigen::Index m, Draw&& draw,
                  std::vector<Eigen::Index>& col_ptr, std::vector<Eigen::Index>& row_index,
                  std::vector<double>& values) {
  const Eigen::Index p = gamma.size();
  col_ptr.assign(static_cast<std::size_t>(p + 1), 0);
  row_index.clear();
  values.clear();
  for (Eigen::Index j = 0; j < p; ++j) {
    if (gamma[j]) {
      for (Eigen::Index k = 0; k < m; ++k) {
        const double v = draw();
        if (v != 0.0) {
          row_index.push_back(k);
          values.push_back(v);
        }
      }
    }
    col_ptr[static_cast<std::size_t>(j + 1)] = static_cast<Eigen::Index>(values.size());
  }
}

}  // namespace

ProjectionMatrix sample_ris_rp(const InclusionVector& gamma, Eigen::Index m, double psi,
                               std::uint64_t seed) {
  if (!(psi > 0.0 && psi < 0.5)) throw InvalidArgument("psi must lie in (0, 0.5)");
  if (m < 1) throw InvalidArgument("projection needs at least one row");

  ProjectionMatrix R;
  R.variant_ = ProjectionVariant::ris_rp;
  R.rows_ = R.requested_rows_ = m;
  R.gamma_ = gamma;
  R.psi_ = psi;
  R.seed_ = seed;

  Rng rng(seed);
  const double magnitude = 1.0 / std::sqrt(2.0 * psi);
  fill_columns(
      gamma, m,
      [&] {
        const double u = rng.uniform();
        if (u < psi) return -magnitude;
        if (u < 2.0 * psi) return magnitude;
        return 0.0;
      },
      R.col_ptr_, R.row_index_, R.values_);
  return R;
}

ProjectionMatrix sample_sparse_variant(const InclusionVector& gamma, Eigen::Index m,
                                       double kappa, Eigen::Index n, std::uint64_t seed) {
  if (m < 1) throw InvalidArgument("projection needs at least one row");
  if (n < 1) throw InvalidArgument("sparse variant needs n >= 1");
  const double n_kappa = std::pow(static_cast<double>(n), kappa);
  if (!(n_kappa >= 1.0) || !std::isfinite(n_kappa))
    throw InvalidArgument("n^kappa must be at least 1 (got kappa = " +
                          std::to_string(kappa) + ")");

  ProjectionMatrix R;
  R.variant_ = ProjectionVariant::sparse_variant;
  R.rows_ = R.requested_rows_ = m;
  R.gamma_ = gamma;
  R.kappa_ = kappa;
  R.kappa_n_ = n;
  R.seed_ = seed;

  Rng rng(seed);
  const double half = 0.5 / n_kappa;
  const double magnitude = std::sqrt(n_kappa) / std::sqrt(static_cast<double>(m));
  fill_columns(
      gamma, m,
      [&] {
        const double u = rng.uniform();
        if (u < half) return -magnitude;
        if (u < 2.0 * half) return magnitude;
        return 0.0;
      },
      R.col_ptr_, R.row_index_, R.values_);
  return R;
}

ProjectionMatrix ProjectionMatrix::from_pcr_block(InclusionVector gamma,
                                                  Eigen::Index requested_rows,
                                                  Eigen::MatrixXd block) {
  if (block.cols() != gamma.count())
    throw DataError("principal-component block width does not match inclusion count");
  ProjectionMatrix R;
  R.variant_ = ProjectionVariant::ris_pcr;
  R.rows_ = block.rows();
  R.requested_rows_ = requested_rows;
  R.gamma_ = std::move(gamma);
  R.block_ = std::move(block);
  return R;
}

ProjectionMatrix compute_ris_pcr(const Eigen::MatrixXd& X, const InclusionVector& gamma,
                                 Eigen::Index m) {
  if (m < 1) throw InvalidArgument("projection needs at least one row");
  if (X.cols() != gamma.size())
    throw DataError("compute_ris_pcr: X has " + std::to_string(X.cols()) +
                    " columns, inclusion vector has " + std::to_string(gamma.size()));

  const auto& active = gamma.active();
  const auto p_gamma = static_cast<Eigen::Index>(active.size());
  Eigen::MatrixXd Xg(X.rows(), p_gamma);
  for (Eigen::Index a = 0; a < p_gamma; ++a) Xg.col(a) = X.col(active[a]);

  Eigen::BDCSVD<Eigen::MatrixXd> svd(Xg, Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  const double tol = s.size() > 0 ? static_cast<double>(std::max(Xg.rows(), Xg.cols())) *
                                        std::numeric_limits<double>::epsilon() * s[0]
                                  : 0.0;
  Eigen::Index rank = 0;
  while (rank < s.size() && s[rank] > tol) ++rank;
  const Eigen::Index m_eff = std::min(m, rank);

  Eigen::MatrixXd block = svd.matrixV().leftCols(m_eff).transpose();
  for (Eigen::Index k = 0; k < m_eff; ++k) {
    Eigen::Index arg = 0;
    block.row(k).cwiseAbs().maxCoeff(&arg);
    if (block(k, arg) < 0.0) block.row(k) *= -1.0;
  }
  return ProjectionMatrix::from_pcr_block(gamma, m, std::move(block));
}

Eigen::MatrixXd compress(const Eigen::MatrixXd& X, const ProjectionMatrix& R) {
  if (X.cols() != R.cols())
    throw DataError("compress: X has " + std::to_string(X.cols()) +
                    " columns, projection expects " + std::to_string(R.cols()));
  Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(X.rows(), R.rows());
  if (R.variant() == ProjectionVariant::ris_pcr) {
    const auto& active = R.gamma().active();
    Eigen::MatrixXd Xg(X.rows(), static_cast<Eigen::Index>(active.size()));
    for (std::size_t a = 0; a < active.size(); ++a)
      Xg.col(static_cast<Eigen::Index>(a)) = X.col(active[a]);
    Z.noalias() = Xg * R.active_block().transpose();
    return Z;
  }
  const auto& ptr = R.col_ptr();
  const auto& rows = R.row_index();
  const auto& vals = R.values();
  for (Eigen::Index j = 0; j < R.cols(); ++j)
    for (Eigen::Index k = ptr[j]; k < ptr[j + 1]; ++k) Z.col(rows[k]) += vals[k] * X.col(j);
  return Z;
}

}  // namespace tarp
