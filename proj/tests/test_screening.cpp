#include <doctest.h>

#include <cmath>

#include "tarp/error.hpp"
#include "tarp/screening.hpp"
#include "test_util.hpp"

using namespace tarp;

TEST_CASE("marginal correlations: hand-checked cases") {
  SUBCASE("perfect correlation") {
    Eigen::MatrixXd X(4, 1);
    X << 1, 2, 3, 5;
    const auto c = marginal_correlations(X, X.col(0));
    CHECK(c.r[0] == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("orthogonal to centered y") {
    Eigen::MatrixXd X(4, 1);
    X << 1, -1, -1, 1;
    const Eigen::Vector4d y(1, 1, -1, -1);
    CHECK(std::abs(marginal_correlations(X, y).r[0]) < 1e-12);
  }
  SUBCASE("anti-correlated pair") {
    Eigen::MatrixXd X(4, 2);
    X << 1, -1, -1, 1, 1, -1, -1, 1;
    const auto c = marginal_correlations(X, X.col(0));
    CHECK(c.r[0] == doctest::Approx(1.0));
    CHECK(c.r[1] == doctest::Approx(-1.0));
  }
}

TEST_CASE("degenerate columns and responses give zero correlation") {
  Eigen::MatrixXd X(3, 2);
  X << 1, 4, 2, 4, 3, 4;
  const auto c = marginal_correlations(X, Eigen::Vector3d(1, 0, 2));
  CHECK(c.r[1] == 0.0);
  CHECK(!c.degenerate_response);

  const auto flat = marginal_correlations(X, Eigen::Vector3d(2, 2, 2));
  CHECK(flat.degenerate_response);
  CHECK(flat.r.isZero());
  CHECK_THROWS_AS((void)marginal_correlations(X, Eigen::Vector2d(1, 2)), DataError);
}

TEST_CASE("inclusion probabilities: worked examples") {
  const Eigen::Vector3d r(0.8, 0.4, 0.2);
  const auto q = inclusion_probabilities(r, 2.0);
  CHECK(q[0] == doctest::Approx(1.0));
  CHECK(q[1] == doctest::Approx(0.25));
  CHECK(q[2] == doctest::Approx(0.0625));

  const auto ones = inclusion_probabilities(Eigen::Vector3d(0.3, -0.1, 0.05), 0.0);
  CHECK(ones == Eigen::Vector3d::Ones());

  const auto steep = inclusion_probabilities(Eigen::Vector2d(0.8, 0.4), 20.0);
  CHECK(steep[0] == 1.0);
  CHECK(steep[1] == doctest::Approx(std::pow(0.5, 20)).epsilon(1e-12));
  CHECK(steep[1] == doctest::Approx(9.5e-7).epsilon(0.01));

  // sign of r is irrelevant
  const auto neg = inclusion_probabilities(Eigen::Vector2d(-0.8, 0.4), 2.0);
  CHECK(neg[0] == 1.0);
  CHECK(neg[1] == doctest::Approx(0.25));

  CHECK_THROWS_AS((void)inclusion_probabilities(r, -1.0), InvalidArgument);
}

TEST_CASE("all-zero correlations fall back to uniform probabilities") {
  const Eigen::VectorXd r = Eigen::VectorXd::Zero(100);
  const auto q = inclusion_probabilities(r, 2.0);
  const double expected = std::ceil(2.0 * std::log(100.0)) / 100.0;
  CHECK(q.isConstant(expected));
  const auto small = inclusion_probabilities(Eigen::VectorXd::Zero(3), 2.0);
  CHECK(small.isConstant(1.0));

  const auto profile = screen({r, true}, 2.0);
  CHECK(profile.uniform_fallback);
  CHECK(profile.degenerate_response);
}

TEST_CASE("inclusion probabilities: max is one and monotone in |r|") {
  Rng rng(101);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::VectorXd r(30);
    for (Eigen::Index j = 0; j < 30; ++j) r[j] = rng.uniform(-1.0, 1.0);
    const double delta = rng.uniform(0.0, 10.0);
    const auto q = inclusion_probabilities(r, delta);
    CHECK(q.maxCoeff() == 1.0);
    for (Eigen::Index i = 0; i < 30; ++i) {
      CHECK(q[i] >= 0.0);
      CHECK(q[i] <= 1.0);
      for (Eigen::Index j = 0; j < 30; ++j)
        if (std::abs(r[i]) >= std::abs(r[j])) CHECK(q[i] >= q[j]);
    }
  }
}

TEST_CASE("affine response transforms leave |r| and q unchanged") {
  Rng rng(5);
  const Eigen::MatrixXd X = test::random_matrix(40, 25, rng);
  const Eigen::VectorXd y = test::random_vector(40, rng);
  const auto base = marginal_correlations(X, y);
  for (double a : {-3.0, 0.01, 250.0}) {
    const Eigen::VectorXd y2 = (a * y.array() + 17.0).matrix();
    const auto c = marginal_correlations(X, y2);
    CHECK((c.r.cwiseAbs() - base.r.cwiseAbs()).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((inclusion_probabilities(c.r, 1.7) - inclusion_probabilities(base.r, 1.7))
              .cwiseAbs()
              .maxCoeff() < 1e-10);
  }
}

TEST_CASE("sample_inclusion: degenerate, determinism and expected count") {
  Rng rng(1);
  const Eigen::Vector3d certain(1, 0, 0);
  for (int i = 0; i < 100; ++i) {
    const auto g = sample_inclusion(certain, rng);
    CHECK(g.count() == 1);
    CHECK(g[0]);
  }

  const Eigen::Vector3d q(1, 0.5, 0.5);
  Rng a(99), b(99);
  CHECK(sample_inclusion(q, a) == sample_inclusion(q, b));

  Rng mc(2024);
  const int draws = 100000;
  double total = 0.0;
  for (int i = 0; i < draws; ++i) total += static_cast<double>(sample_inclusion(q, mc).count());
  CHECK(std::abs(total / draws - 2.0) < 0.01);
}

TEST_CASE("sample_inclusion matches sum q within three standard errors") {
  Rng rng(77);
  Eigen::VectorXd q(50);
  for (Eigen::Index j = 0; j < 50; ++j) q[j] = rng.uniform();
  q[0] = 1.0;
  const double expected = q.sum();
  const double var = (q.array() * (1.0 - q.array())).sum();
  const int draws = 20000;
  double total = 0.0;
  for (int i = 0; i < draws; ++i) total += static_cast<double>(sample_inclusion(q, rng).count());
  CHECK(std::abs(total / draws - expected) < 3.0 * std::sqrt(var / draws));
}

TEST_CASE("sample_inclusion never returns an empty set") {
  Rng rng(3);
  const Eigen::VectorXd tiny = Eigen::VectorXd::Constant(5, 1e-12);
  const auto g = sample_inclusion(tiny, rng);
  CHECK(g.count() >= 1);
  CHECK_THROWS_AS((void)sample_inclusion(Eigen::Vector2d(0.5, 1.5), rng), InvalidArgument);
}

TEST_CASE("large delta selects only the strongest predictor") {
  const Eigen::VectorXd r = (Eigen::VectorXd(5) << 0.3, 0.9, 0.5, -0.6, 0.1).finished();
  const auto q = inclusion_probabilities(r, 50.0);
  Rng rng(8);
  int exact = 0;
  for (int i = 0; i < 100; ++i) {
    const auto g = sample_inclusion(q, rng);
    if (g.count() == 1 && g[1]) ++exact;
  }
  CHECK(exact >= 99);
}

TEST_CASE("default delta") {
  CHECK(default_delta(100, 100) == doctest::Approx(0.5));
  CHECK(default_delta(1000, static_cast<Eigen::Index>(std::round(1000 * std::exp(1.0)))) ==
        doctest::Approx(1.0).epsilon(1e-3));
  const double d = default_delta(200, 2000);
  CHECK(d == doctest::Approx((1.0 + std::log(10.0)) / 2.0));
  CHECK(d == doctest::Approx(1.651).epsilon(1e-3));
  CHECK(default_delta(1000, 10) == 0.0);
  CHECK_THROWS_AS((void)default_delta(0, 5), InvalidArgument);
}
