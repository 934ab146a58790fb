#include <doctest.h>

#include <cmath>

#include "tarp/error.hpp"
#include "tarp/projection.hpp"
#include "test_util.hpp"

using namespace tarp;

namespace {

InclusionVector pattern(std::initializer_list<int> bits) {
  std::vector<bool> g;
  for (int b : bits) g.push_back(b != 0);
  return InclusionVector(g);
}

}  // namespace

TEST_CASE("three-point map: support, structure and determinism") {
  const auto gamma = pattern({1, 0, 1, 1, 0, 1});
  const auto R = sample_ris_rp(gamma, 20, 1.0 / 6.0, 11);
  CHECK(R.rows() == 20);
  CHECK(R.cols() == 6);
  const Eigen::MatrixXd D = R.to_dense();
  const double mag = std::sqrt(3.0);
  for (Eigen::Index j = 0; j < 6; ++j) {
    for (Eigen::Index k = 0; k < 20; ++k) {
      const double v = D(k, j);
      if (!gamma[j]) {
        CHECK(v == 0.0);
      } else {
        CHECK((v == 0.0 || std::abs(std::abs(v) - mag) < 1e-15));
      }
    }
  }
  CHECK(sample_ris_rp(gamma, 20, 1.0 / 6.0, 11) == R);
  CHECK(!(sample_ris_rp(gamma, 20, 1.0 / 6.0, 12) == R));
}

TEST_CASE("three-point map rejects invalid psi and m") {
  const auto gamma = InclusionVector::all(4);
  CHECK_THROWS_AS((void)sample_ris_rp(gamma, 3, 0.0, 1), InvalidArgument);
  CHECK_THROWS_AS((void)sample_ris_rp(gamma, 3, 0.5, 1), InvalidArgument);
  CHECK_THROWS_AS((void)sample_ris_rp(gamma, 0, 0.2, 1), InvalidArgument);
}

TEST_CASE("three-point entries: frequencies at psi = 1/6") {
  const auto R = sample_ris_rp(InclusionVector::all(1000), 300, 1.0 / 6.0, 5);
  const double total = 300.0 * 1000.0;
  double pos = 0, neg = 0;
  for (double v : R.values()) (v > 0 ? pos : neg) += 1.0;
  // Each sign has probability 1/6; sd of the frequency is about 6.8e-4.
  CHECK(std::abs(pos / total - 1.0 / 6.0) < 0.004);
  CHECK(std::abs(neg / total - 1.0 / 6.0) < 0.004);
}

TEST_CASE("three-point entries: mean 0 and variance 1") {
  for (double psi : {0.1, 1.0 / 6.0, 0.4}) {
    const auto R = sample_ris_rp(InclusionVector::all(1000), 1000, psi, 21);
    double s = 0, ss = 0;
    for (double v : R.values()) {
      s += v;
      ss += v * v;
    }
    const double count = 1e6;
    CHECK(std::abs(s / count) < 0.005);
    CHECK(std::abs(ss / count - 1.0) < 0.01);
  }
}

TEST_CASE("sparse variant: substituted magnitudes and probability") {
  const auto R = sample_sparse_variant(InclusionVector::all(4000), 25, 1.0, 100, 3);
  for (double v : R.values()) CHECK(std::abs(std::abs(v) - 2.0) < 1e-15);
  const double freq = static_cast<double>(R.nonzeros()) / (25.0 * 4000.0);
  CHECK(std::abs(freq - 0.01) < 0.0015);
}

TEST_CASE("sparse variant: second moment is 1/m") {
  const Eigen::Index m = 40;
  const auto R = sample_sparse_variant(InclusionVector::all(25000), m, 0.5, 400, 8);
  double ss = 0;
  for (double v : R.values()) ss += v * v;
  const double count = static_cast<double>(m) * 25000.0;
  CHECK(std::abs(ss / count * m - 1.0) < 0.02);
}

TEST_CASE("sparse variant: kappa = 0 is dense Rademacher over sqrt(m)") {
  const auto R = sample_sparse_variant(InclusionVector::all(50), 9, 0.0, 100, 4);
  CHECK(R.nonzeros() == 9 * 50);
  for (double v : R.values()) CHECK(std::abs(std::abs(v) - 1.0 / 3.0) < 1e-15);
  CHECK_THROWS_AS((void)sample_sparse_variant(InclusionVector::all(5), 3, -1.0, 100, 1),
                  InvalidArgument);
}

TEST_CASE("principal-component map of orthogonal columns") {
  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(6, 4);
  X(0, 0) = 1.0;   // norm 1
  X(1, 1) = 3.0;   // norm 3
  X(2, 2) = -2.0;  // norm 2
  X(3, 3) = 10.0;  // excluded by gamma
  const auto gamma = pattern({1, 1, 1, 0});
  const auto R = compute_ris_pcr(X, gamma, 1);
  const Eigen::MatrixXd D = R.to_dense();
  CHECK(R.rows() == 1);
  CHECK(D(0, 1) == doctest::Approx(1.0));
  CHECK(std::abs(D(0, 0)) < 1e-12);
  CHECK(std::abs(D(0, 2)) < 1e-12);
  CHECK(D(0, 3) == 0.0);

  const auto R2 = compute_ris_pcr(X, gamma, 2);
  CHECK(std::abs(R2.to_dense()(1, 2)) == doctest::Approx(1.0));
}

TEST_CASE("principal-component map: orthonormal rows, contraction and rank truncation") {
  Rng rng(17);
  const Eigen::MatrixXd X = test::random_matrix(30, 50, rng);
  std::vector<bool> g(50);
  for (std::size_t j = 0; j < 50; ++j) g[j] = rng.bernoulli(0.5);
  g[0] = true;
  const InclusionVector gamma(g);

  const auto R = compute_ris_pcr(X, gamma, 10);
  const Eigen::MatrixXd D = R.to_dense();
  CHECK((D * D.transpose() - Eigen::MatrixXd::Identity(10, 10)).cwiseAbs().maxCoeff() < 1e-8);
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    double xg = 0.0;
    for (auto j : gamma.active()) xg += X(i, j) * X(i, j);
    CHECK((D * X.row(i).transpose()).norm() <= std::sqrt(xg) + 1e-12);
  }
  for (Eigen::Index j = 0; j < 50; ++j)
    if (!gamma[j]) CHECK(D.col(j).isZero(0.0));

  // canonical sign: largest-magnitude entry of each row is positive
  for (Eigen::Index k = 0; k < D.rows(); ++k) {
    Eigen::Index arg;
    D.row(k).cwiseAbs().maxCoeff(&arg);
    CHECK(D(k, arg) > 0.0);
  }
  CHECK(compute_ris_pcr(X, gamma, 10) == R);

  // Rank-3 block: m = 8 is truncated to 3.
  const Eigen::MatrixXd low = test::random_matrix(30, 3, rng) * test::random_matrix(3, 50, rng);
  const auto T = compute_ris_pcr(low, InclusionVector::all(50), 8);
  CHECK(T.rows() == 3);
  CHECK(T.requested_rows() == 8);

  // Fewer selected columns than m.
  const auto few = compute_ris_pcr(X, pattern({1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0,
                                               0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0,
                                               0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}),
                                   5);
  CHECK(few.rows() == 2);
}

TEST_CASE("compress matches the dense product") {
  Rng rng(23);
  const Eigen::MatrixXd X = test::random_matrix(5, 8, rng);
  std::vector<bool> g{1, 1, 0, 1, 0, 1, 1, 1};
  const InclusionVector gamma(g);
  for (const auto& R : {sample_ris_rp(gamma, 3, 0.3, 1), sample_sparse_variant(gamma, 3, 0.2, 10, 2),
                        compute_ris_pcr(X, gamma, 3)}) {
    const Eigen::MatrixXd Z = compress(X, R);
    const Eigen::MatrixXd oracle = X * R.to_dense().transpose();
    CHECK((Z - oracle).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("compress: selector row, zero map and shape errors") {
  Rng rng(2);
  const Eigen::MatrixXd X = test::random_matrix(6, 4, rng);
  Eigen::MatrixXd selector = Eigen::MatrixXd::Zero(1, 4);
  selector(0, 2) = 1.0;
  const auto sel = ProjectionMatrix::from_pcr_block(pattern({0, 0, 1, 0}), 1, Eigen::MatrixXd::Ones(1, 1));
  CHECK(compress(X, sel).col(0) == X.col(2));

  const auto zero = ProjectionMatrix::from_pcr_block(pattern({0, 0, 1, 0}), 2, Eigen::MatrixXd::Zero(2, 1));
  CHECK(compress(X, zero).isZero(0.0));

  CHECK_THROWS_AS((void)compress(test::random_matrix(6, 5, rng), sel), DataError);
}

TEST_CASE("three-point rows preserve squared norms on average") {
  // E (R_k x)^2 = ||x_gamma||^2 per row, so E ||R x||^2 = m ||x_gamma||^2.
  Rng rng(31);
  const Eigen::VectorXd x = test::random_vector(40, rng);
  std::vector<bool> g(40);
  for (std::size_t j = 0; j < 40; ++j) g[j] = j % 3 != 0;
  const InclusionVector gamma(g);
  double target = 0;
  for (auto j : gamma.active()) target += x[j] * x[j];

  const Eigen::Index m = 1000;
  double total = 0.0;
  const int mats = 100;  // 10^5 rows
  for (int t = 0; t < mats; ++t) {
    const auto R = sample_ris_rp(gamma, m, 0.25, derive_seed(99, static_cast<std::uint64_t>(t)));
    Eigen::MatrixXd xm = x.transpose();
    total += compress(xm, R).squaredNorm();
  }
  const double per_row = total / (static_cast<double>(m) * mats);
  CHECK(std::abs(per_row / target - 1.0) < 0.01);
}

TEST_CASE("sparse variant preserves squared norms on average") {
  Rng rng(41);
  const Eigen::VectorXd x = test::random_vector(60, rng);
  const InclusionVector gamma = InclusionVector::all(60);
  const double target = x.squaredNorm();
  const Eigen::Index m = 50;
  double total = 0.0;
  const int mats = 20000;
  Eigen::MatrixXd xm = x.transpose();
  for (int t = 0; t < mats; ++t) {
    const auto R = sample_sparse_variant(gamma, m, 0.5, 16, derive_seed(5, static_cast<std::uint64_t>(t)));
    total += compress(xm, R).squaredNorm();
  }
  CHECK(std::abs(total / mats / target - 1.0) < 0.01);
}
