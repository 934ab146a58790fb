#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "tarp/screening.hpp"

namespace tarp {

enum class ProjectionVariant { ris_rp, sparse_variant, ris_pcr };

std::string to_string(ProjectionVariant v);
ProjectionVariant projection_variant_from_string(const std::string& s);

/// An m x p compression map whose columns outside the inclusion set are zero.
///
/// Random variants keep their nonzeros in compressed-column form and can be
/// regenerated from (gamma, m, parameter, seed). The principal-component
/// variant keeps a dense m x p_gamma block over the active columns.
class ProjectionMatrix {
 public:
  ProjectionVariant variant() const { return variant_; }
  Eigen::Index rows() const { return rows_; }
  Eigen::Index cols() const { return gamma_.size(); }
  /// m asked for at construction; rows() may be smaller for ris_pcr when the
  /// selected block is rank deficient.
  Eigen::Index requested_rows() const { return requested_rows_; }
  const InclusionVector& gamma() const { return gamma_; }

  double psi() const { return psi_; }
  double kappa() const { return kappa_; }
  Eigen::Index kappa_n() const { return kappa_n_; }
  std::uint64_t seed() const { return seed_; }

  /// Nonzeros of the random variants; empty for ris_pcr.
  const std::vector<Eigen::Index>& col_ptr() const { return col_ptr_; }
  const std::vector<Eigen::Index>& row_index() const { return row_index_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t nonzeros() const { return values_.size(); }

  /// Dense m x p_gamma block over gamma().active() (ris_pcr only).
  const Eigen::MatrixXd& active_block() const { return block_; }

  Eigen::MatrixXd to_dense() const;

  bool operator==(const ProjectionMatrix& o) const;

  static ProjectionMatrix from_pcr_block(InclusionVector gamma, Eigen::Index requested_rows,
                                         Eigen::MatrixXd block);

 private:
  friend ProjectionMatrix sample_ris_rp(const InclusionVector&, Eigen::Index, double,
                                        std::uint64_t);
  friend ProjectionMatrix sample_sparse_variant(const InclusionVector&, Eigen::Index,
                                                double, Eigen::Index, std::uint64_t);

  ProjectionVariant variant_ = ProjectionVariant::ris_rp;
  Eigen::Index rows_ = 0;
  Eigen::Index requested_rows_ = 0;
  InclusionVector gamma_;
  double psi_ = 0.0;
  double kappa_ = 0.0;
  Eigen::Index kappa_n_ = 0;
  std::uint64_t seed_ = 0;

  std::vector<Eigen::Index> col_ptr_;
  std::vector<Eigen::Index> row_index_;
  std::vector<double> values_;
  Eigen::MatrixXd block_;
};

/// Three-point map on the active columns: +-1/sqrt(2 psi) with probability
/// psi each, 0 otherwise. Requires 0 < psi < 0.5.
ProjectionMatrix sample_ris_rp(const InclusionVector& gamma, Eigen::Index m, double psi,
                               std::uint64_t seed);

/// Very sparse map: +-n^(kappa/2)/sqrt(m) with probability 1/(2 n^kappa) each.
ProjectionMatrix sample_sparse_variant(const InclusionVector& gamma, Eigen::Index m,
                                       double kappa, Eigen::Index n, std::uint64_t seed);

/// Rows are the leading right singular vectors of the active block of X,
/// sign-normalized so each row's largest-magnitude entry is positive.
ProjectionMatrix compute_ris_pcr(const Eigen::MatrixXd& X, const InclusionVector& gamma,
                                 Eigen::Index m);

/// Z = X R^T (n x m).
Eigen::MatrixXd compress(const Eigen::MatrixXd& X, const ProjectionMatrix& R);

}  // namespace tarp
