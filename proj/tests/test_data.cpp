#include <doctest.h>

#include <algorithm>
#include <set>

#include "tarp/data.hpp"
#include "tarp/error.hpp"
#include "test_util.hpp"

using namespace tarp;

TEST_CASE("load_csv extracts the target column") {
  const auto path = test::write_file("small.csv", "a,b,y\n1,2,3\n4,5,6\n7,8,9\n");
  const Dataset d = load_csv(path, "y");
  CHECK(d.rows() == 3);
  CHECK(d.cols() == 2);
  CHECK(d.column_names == std::vector<std::string>{"a", "b"});
  CHECK(d.design(1, 0) == 4.0);
  CHECK(d.design(2, 1) == 8.0);
  CHECK(d.response[2] == 9.0);
}

TEST_CASE("load_csv keeps column order when the target is in the middle") {
  const auto path = test::write_file("middle.csv", "a,y,b\n1,2,3\n4,5,6\n");
  const Dataset d = load_csv(path, "y");
  CHECK(d.column_names == std::vector<std::string>{"a", "b"});
  CHECK(d.design(0, 1) == 3.0);
  CHECK(d.response[1] == 5.0);
}

TEST_CASE("load_csv error paths") {
  SUBCASE("non-numeric cell names row and column") {
    const auto path = test::write_file("bad.csv", "a,b,y\n1,2,3\n4,abc,6\n");
    try {
      (void)load_csv(path, "y");
      FAIL("expected DataError");
    } catch (const DataError& e) {
      const std::string msg = e.what();
      CHECK(msg.find("abc") != std::string::npos);
      CHECK(msg.find("row 3") != std::string::npos);
      CHECK(msg.find("'b'") != std::string::npos);
    }
  }
  SUBCASE("missing target") {
    const auto path = test::write_file("notarget.csv", "a,b\n1,2\n3,4\n");
    CHECK_THROWS_WITH_AS((void)load_csv(path, "y"), doctest::Contains("target column 'y'"),
                         DataError);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS((void)load_csv(test::tmp_path("does_not_exist.csv"), "y"), DataError);
  }
  SUBCASE("fewer than two rows") {
    const auto path = test::write_file("onerow.csv", "a,y\n1,2\n");
    CHECK_THROWS_AS((void)load_csv(path, "y"), DataError);
  }
  SUBCASE("ragged row") {
    const auto path = test::write_file("ragged.csv", "a,y\n1,2\n3\n");
    CHECK_THROWS_AS((void)load_csv(path, "y"), DataError);
  }
  SUBCASE("binary response must be 0/1") {
    const auto path = test::write_file("binbad.csv", "a,y\n1,0\n2,2\n");
    CHECK_THROWS_AS((void)load_csv(path, "y", ResponseKind::binary), DataError);
  }
}

TEST_CASE("save_csv and load_csv round trip exactly") {
  Rng rng(5);
  Dataset d;
  d.design = test::random_matrix(4, 3, rng);
  d.response = test::random_vector(4, rng);
  d.column_names = {"u", "v", "w"};
  const auto path = test::tmp_path("roundtrip.csv");
  save_csv(d, path, "target");
  const Dataset back = load_csv(path, "target");
  CHECK(back.design == d.design);
  CHECK(back.response == d.response);
  CHECK(back.column_names == d.column_names);
}

TEST_CASE("standardize centers and scales") {
  Dataset d;
  d.design.resize(3, 2);
  d.design << 1, 5, 2, 5, 3, 5;
  d.response = Eigen::Vector3d(1, 2, 6);
  const auto [s, params] = standardize(d);

  CHECK(s.design(0, 0) == doctest::Approx(-1.0));
  CHECK(s.design(1, 0) == doctest::Approx(0.0));
  CHECK(s.design(2, 0) == doctest::Approx(1.0));
  CHECK(params.column_means[0] == doctest::Approx(2.0));
  CHECK(params.column_scales[0] == doctest::Approx(1.0));

  // constant column: centered, flagged, scale 1
  CHECK(s.design.col(1).isZero());
  CHECK(params.constant_columns[1]);
  CHECK(!params.constant_columns[0]);
  CHECK(params.column_scales[1] == 1.0);

  CHECK(params.response_mean == doctest::Approx(3.0));
  CHECK(s.response.sum() == doctest::Approx(0.0));
}

TEST_CASE("standardize is idempotent") {
  Rng rng(11);
  Dataset d;
  d.design = test::random_matrix(20, 5, rng) * 3.0;
  d.design.array() += 7.0;
  d.response = test::random_vector(20, rng);
  const auto once = standardize(d).first;
  const auto twice = standardize(once).first;
  CHECK((once.design - twice.design).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((once.response - twice.response).cwiseAbs().maxCoeff() < 1e-12);

  for (Eigen::Index j = 0; j < once.cols(); ++j) {
    CHECK(std::abs(once.design.col(j).mean()) < 1e-12);
    CHECK(once.design.col(j).squaredNorm() / 19.0 == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("binary responses are not centered") {
  Dataset d;
  d.design = Eigen::MatrixXd::Random(4, 2);
  d.response = Eigen::Vector4d(0, 1, 1, 0);
  d.response_kind = ResponseKind::binary;
  const auto [s, params] = standardize(d);
  CHECK(s.response == d.response);
  CHECK(params.response_mean == 0.0);
}

TEST_CASE("held-out data uses training parameters") {
  Rng rng(3);
  Dataset d;
  d.design = test::random_matrix(100, 4, rng);
  d.response = test::random_vector(100, rng);
  auto [train, test_set] = split(d, 0.3, 17);
  const auto params = standardize(train).second;
  const Eigen::MatrixXd t = params.apply(test_set.design);
  // Training means are not the test means, so transformed test columns are off-center.
  int nonzero = 0;
  for (Eigen::Index j = 0; j < t.cols(); ++j)
    if (std::abs(t.col(j).mean()) > 1e-8) ++nonzero;
  CHECK(nonzero == t.cols());
  CHECK_THROWS_AS((void)params.apply(Eigen::MatrixXd::Zero(3, 5)), DataError);
}

TEST_CASE("split sizes, determinism and partition") {
  Dataset d;
  d.design.resize(100, 1);
  for (int i = 0; i < 100; ++i) d.design(i, 0) = i;
  d.response = d.design.col(0);

  const auto [tr, te] = split(d, 0.2, 7);
  CHECK(tr.rows() == 80);
  CHECK(te.rows() == 20);

  const auto [tr2, te2] = split(d, 0.2, 7);
  CHECK(tr.design == tr2.design);
  CHECK(te.design == te2.design);

  const auto [tr3, te3] = split(d, 0.2, 8);
  CHECK(te.design != te3.design);

  std::set<double> all;
  for (Eigen::Index i = 0; i < tr.rows(); ++i) all.insert(tr.design(i, 0));
  for (Eigen::Index i = 0; i < te.rows(); ++i) {
    CHECK(all.count(te.design(i, 0)) == 0);
    all.insert(te.design(i, 0));
  }
  CHECK(all.size() == 100);
}

TEST_CASE("split rejects invalid fractions") {
  Dataset d;
  d.design = Eigen::MatrixXd::Zero(100, 1);
  d.response = Eigen::VectorXd::Zero(100);
  CHECK_THROWS_AS((void)split(d, 0.99, 1), InvalidArgument);
  CHECK_THROWS_AS((void)split(d, 0.0, 1), InvalidArgument);
  CHECK_THROWS_AS((void)split(d, 1.0, 1), InvalidArgument);
  CHECK_THROWS_AS((void)split(d, -0.5, 1), InvalidArgument);
}
