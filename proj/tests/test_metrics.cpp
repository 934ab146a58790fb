#include <doctest.h>

#include <cmath>
#include <limits>

#include "tarp/error.hpp"
#include "tarp/metrics.hpp"
#include "tarp/rng.hpp"

using namespace tarp;

TEST_CASE("regression metrics: worked example") {
  const Eigen::Vector3d y(0, 1, 2), pred(0, 0, 0);
  const Eigen::Vector3d lo = Eigen::Vector3d::Constant(-0.5), hi = Eigen::Vector3d::Constant(0.5);
  const auto r = evaluate_regression(pred, lo, hi, y);
  CHECK(r.mspe == doctest::Approx(5.0 / 3.0));
  CHECK(r.ecp == doctest::Approx(1.0 / 3.0));
  CHECK(r.mean_width == doctest::Approx(1.0));
  CHECK(r.residuals == y);

  const auto perfect = evaluate_regression(y, std::vector<Interval>(3, {-1e9, 1e9}), y);
  CHECK(perfect.mspe == 0.0);
  CHECK(perfect.ecp == 1.0);

  // boundary counts as covered
  CHECK(evaluate_regression(pred, lo, hi, Eigen::Vector3d(0.5, -0.5, 0)).ecp == 1.0);

  const Eigen::Vector3d shift = Eigen::Vector3d::Constant(42.0);
  CHECK(evaluate_regression(pred + shift, lo + shift, hi + shift, y + shift).mspe ==
        doctest::Approx(r.mspe));

  CHECK_THROWS_AS((void)evaluate_regression(pred, lo, hi, Eigen::Vector2d(1, 2)), DataError);
}

TEST_CASE("coverage is monotone in nominal level for nested intervals") {
  Rng rng(1);
  Eigen::VectorXd y(2000);
  for (Eigen::Index i = 0; i < 2000; ++i) y[i] = rng.normal();
  const Eigen::VectorXd pred = Eigen::VectorXd::Zero(2000);
  double prev = -1.0;
  for (double level : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    const double h = t_quantile(std::numeric_limits<double>::infinity(), level);
    const auto r = evaluate_regression(pred, Eigen::VectorXd::Constant(2000, -h),
                                       Eigen::VectorXd::Constant(2000, h), y);
    CHECK(r.ecp >= prev);
    CHECK(std::abs(r.ecp - level) < 0.04);
    prev = r.ecp;
  }
}

TEST_CASE("classification metrics") {
  const Eigen::Vector4d y(0, 0, 1, 1);
  const auto sep = evaluate_classification(Eigen::Vector4d(0.1, 0.2, 0.8, 0.9), y);
  CHECK(sep.misclassification_rate == 0.0);
  CHECK(sep.auc == 1.0);

  const auto exact = evaluate_classification(y, y);
  CHECK(exact.msd_calibration == doctest::Approx(0.0025));

  CHECK(auc(Eigen::Vector4d(0.5, 0.5, 0.5, 0.5), y) == 0.5);
  CHECK(auc(Eigen::Vector4d(0.2, 0.6, 0.4, 0.9), y) == doctest::Approx(0.75));

  const auto one_class = evaluate_classification(Eigen::Vector3d(0.2, 0.3, 0.9), Eigen::Vector3d(1, 1, 1));
  CHECK(!one_class.auc_defined);
  CHECK(std::isnan(auc(Eigen::Vector3d(0.2, 0.3, 0.9), Eigen::Vector3d(1, 1, 1))));

  CHECK_THROWS_AS((void)evaluate_classification(Eigen::Vector2d(0.1, 0.2), y), DataError);
}

TEST_CASE("AUC of unrelated scores is one half; invariant to monotone maps") {
  Rng rng(2);
  const Eigen::Index n = 100000;
  Eigen::VectorXd prob(n), y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    prob[i] = rng.uniform();
    y[i] = rng.bernoulli(0.5) ? 1.0 : 0.0;
  }
  CHECK(std::abs(auc(prob, y) - 0.5) < 0.01);

  Eigen::VectorXd s(200), lab(200);
  for (Eigen::Index i = 0; i < 200; ++i) {
    lab[i] = rng.bernoulli(0.4) ? 1.0 : 0.0;
    s[i] = std::round((lab[i] + rng.normal()) * 4.0) / 4.0;  // with ties
  }
  const Eigen::VectorXd transformed = s.array().exp().matrix() * 3.0;
  CHECK(auc(transformed, lab) == auc(s, lab));

  // brute-force Mann-Whitney oracle
  double wins = 0.0, pairs = 0.0;
  for (Eigen::Index i = 0; i < 200; ++i)
    for (Eigen::Index j = 0; j < 200; ++j)
      if (lab[i] == 1.0 && lab[j] == 0.0) {
        pairs += 1.0;
        wins += s[i] > s[j] ? 1.0 : (s[i] == s[j] ? 0.5 : 0.0);
      }
  CHECK(auc(s, lab) == doctest::Approx(wins / pairs).epsilon(1e-12));
}

TEST_CASE("calibration MSD skips empty bins") {
  // all mass in bin [0.3, 0.4): observed fraction 0.5, midpoint 0.35
  const Eigen::Vector4d prob(0.31, 0.32, 0.33, 0.34), y(0, 1, 0, 1);
  CHECK(calibration_msd(prob, y) == doctest::Approx(0.15 * 0.15));
}

TEST_CASE("frequentist interval") {
  const double big = 1e8;
  CHECK(frequentist_interval(4.0, 0.0, big, 0.5) == doctest::Approx(0.6744897501960817 * 2.0).epsilon(1e-6));
  CHECK(frequentist_interval(2.0, 0.3, 10, 0.5) / frequentist_interval(1.0, 0.3, 10, 0.5) ==
        doctest::Approx(std::sqrt(2.0)));
  double prev = 0.0;
  for (double tail : {1e-1, 1e-3, 1e-6, 1e-9, 1e-12}) {
    const double w = frequentist_interval(1.0, 0.0, 10, 1.0 - tail);
    CHECK(w > 1.5 * prev);
    prev = w;
  }
  CHECK(frequentist_interval(1.0, 0.0, 1, 1.0 - 1e-12) > 1e11);
  CHECK_THROWS_AS((void)frequentist_interval(1.0, -0.1, 10, 0.5), InvalidArgument);
  CHECK_THROWS_AS((void)frequentist_interval(1.0, 0.1, 0, 0.5), InvalidArgument);
}

TEST_CASE("reports serialize to JSON") {
  RegressionReport r;
  r.mspe = 1.5;
  r.ecp = 0.5;
  r.mean_width = 2.0;
  const std::string s = to_json(r);
  CHECK(s.find("\"mspe\"") != std::string::npos);
  CHECK(s.find("\"ecp\"") != std::string::npos);
  CHECK(to_json(ClassificationReport{}).find("\"auc\"") != std::string::npos);
}
