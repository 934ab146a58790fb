#include "tarp/simgen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tarp/error.hpp"

namespace tarp {

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::I:
      return "I";
    case Scheme::II:
      return "II";
    case Scheme::III:
      return "III";
    case Scheme::IV:
      return "IV";
  }
  return "?";
}

Scheme scheme_from_string(const std::string& s) {
  if (s == "I" || s == "1") return Scheme::I;
  if (s == "II" || s == "2") return Scheme::II;
  if (s == "III" || s == "3") return Scheme::III;
  if (s == "IV" || s == "4") return Scheme::IV;
  throw InvalidArgument("unknown scheme '" + s + "' (expected I, II, III or IV)");
}

void SchemeSpec::validate() const {
  if (n < 2) throw InvalidArgument("scheme needs n >= 2");
  if (!(noise_sd >= 0.0)) throw InvalidArgument("noise_sd must be non-negative");
  switch (scheme) {
    case Scheme::I:
      if (p < 30) throw InvalidArgument("scheme I needs p >= 30");
      break;
    case Scheme::II:
      if (p % 100 != 0 || p / 100 < 3)
        throw InvalidArgument("scheme II needs p a multiple of 100 with p/100 >= 3");
      break;
    case Scheme::III:
      if (p < 3) throw InvalidArgument("scheme III needs p >= 3");
      break;
    case Scheme::IV:
      if (p < 20) throw InvalidArgument("scheme IV needs p >= 20");
      break;
  }
}

namespace {

// `count` distinct draws from `pool`, returned sorted.
std::vector<Eigen::Index> choose(std::vector<Eigen::Index> pool, Eigen::Index count, Rng& rng) {
  const auto size = static_cast<Eigen::Index>(pool.size());
  for (Eigen::Index i = 0; i < count; ++i)
    std::swap(pool[static_cast<std::size_t>(i)],
              pool[static_cast<std::size_t>(rng.uniform_int(i, size - 1))]);
  pool.resize(static_cast<std::size_t>(count));
  std::sort(pool.begin(), pool.end());
  return pool;
}

std::vector<Eigen::Index> range(Eigen::Index lo, Eigen::Index hi) {
  std::vector<Eigen::Index> v(static_cast<std::size_t>(hi - lo));
  std::iota(v.begin(), v.end(), lo);
  return v;
}

void scheme_one(const SchemeSpec& s, Rng& rng, Eigen::MatrixXd& X, Truth& t) {
  t.active = choose(range(0, s.p), 30, rng);
  for (auto j : t.active) t.beta[j] = 1.0;
  const double innov = std::sqrt(1.0 - 0.81);
  for (Eigen::Index i = 0; i < s.n; ++i) {
    double prev = rng.normal();
    X(i, 0) = prev;
    for (Eigen::Index j = 1; j < s.p; ++j) {
      prev = 0.9 * prev + innov * rng.normal();
      X(i, j) = prev;
    }
  }
}

void scheme_two(const SchemeSpec& s, Rng& rng, Eigen::MatrixXd& X, Truth& t) {
  const Eigen::Index blocks = s.p / 100 - 2;
  const Eigen::Index low_blocks = blocks / 2;
  const Eigen::Index independent_start = 100 * blocks;
  auto rho_of = [&](Eigen::Index b) { return b < low_blocks ? 0.3 : 0.9; };

  auto high = choose(range(100 * low_blocks, independent_start), 20, rng);
  auto indep = choose(range(independent_start, s.p), 1, rng);
  t.active = high;
  t.active.insert(t.active.end(), indep.begin(), indep.end());
  for (auto j : t.active) t.beta[j] = 1.0;

  for (Eigen::Index i = 0; i < s.n; ++i) {
    for (Eigen::Index b = 0; b < blocks; ++b) {
      const double rho = rho_of(b);
      const double shared = std::sqrt(rho) * rng.normal();
      const double own = std::sqrt(1.0 - rho);
      for (Eigen::Index j = 100 * b; j < 100 * (b + 1); ++j) X(i, j) = shared + own * rng.normal();
    }
    for (Eigen::Index j = independent_start; j < s.p; ++j) X(i, j) = rng.normal();
  }
}

void scheme_three(const SchemeSpec& s, Rng& rng, Eigen::MatrixXd& X, Truth& t) {
  Eigen::MatrixXd G(s.p, 3);
  for (Eigen::Index k = 0; k < 3; ++k)
    for (Eigen::Index j = 0; j < s.p; ++j) G(j, k) = rng.normal();
  const Eigen::MatrixXd P = G.householderQr().householderQ() * Eigen::MatrixXd::Identity(s.p, 3);
  t.beta = P.col(0);

  const Eigen::Vector3d sd(15.0, 10.0, 7.0);
  Eigen::MatrixXd W(s.n, 3);
  for (Eigen::Index i = 0; i < s.n; ++i)
    for (Eigen::Index k = 0; k < 3; ++k) W(i, k) = sd[k] * rng.normal();
  X.noalias() = W * P.transpose();
}

void scheme_four(const SchemeSpec& s, Rng& rng, Eigen::MatrixXd& X, Truth& t) {
  constexpr double T = 5.0;
  t.active = choose(range(0, s.p), 20, rng);
  for (auto j : t.active) t.beta[j] = rng.uniform(2.0, 2.5);

  Eigen::VectorXd times(s.p);
  for (Eigen::Index j = 0; j < s.p; ++j)
    times[j] = T * static_cast<double>(j + 1) / static_cast<double>(s.p + 1);
  const double c = bridge_scale(T);
  for (Eigen::Index i = 0; i < s.n; ++i)
    X.row(i) = (5.0 + c * brownian_bridge(times, T, rng).array()).matrix().transpose();
}

}  // namespace

double bridge_scale(double T) { return 5.0 / (4.0 * std::sqrt(T / 4.0)); }

Eigen::VectorXd brownian_bridge(const Eigen::VectorXd& times, double T, Rng& rng) {
  if (!(T > 0.0)) throw InvalidArgument("bridge horizon must be positive");
  Eigen::VectorXd w(times.size());
  double t_prev = 0.0;
  double w_prev = 0.0;
  for (Eigen::Index k = 0; k < times.size(); ++k) {
    const double dt = times[k] - t_prev;
    if (dt < 0.0 || times[k] > T) throw InvalidArgument("bridge times must ascend within [0, T]");
    w_prev += dt > 0.0 ? std::sqrt(dt) * rng.normal() : 0.0;
    w[k] = w_prev;
    t_prev = times[k];
  }
  const double rest = T - t_prev;
  const double w_T = w_prev + (rest > 0.0 ? std::sqrt(rest) * rng.normal() : 0.0);
  Eigen::VectorXd b(times.size());
  for (Eigen::Index k = 0; k < times.size(); ++k) {
    // Exact zeros at the pinned ends.
    if (times[k] == 0.0 || times[k] == T)
      b[k] = 0.0;
    else
      b[k] = w[k] - (times[k] / T) * w_T;
  }
  return b;
}

Simulated generate(const SchemeSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  Simulated out;
  out.truth.scheme = spec.scheme;
  out.truth.beta = Eigen::VectorXd::Zero(spec.p);
  Eigen::MatrixXd X(spec.n, spec.p);
  switch (spec.scheme) {
    case Scheme::I:
      scheme_one(spec, rng, X, out.truth);
      break;
    case Scheme::II:
      scheme_two(spec, rng, X, out.truth);
      break;
    case Scheme::III:
      scheme_three(spec, rng, X, out.truth);
      break;
    case Scheme::IV:
      scheme_four(spec, rng, X, out.truth);
      break;
  }
  Eigen::VectorXd y = X * out.truth.beta;
  for (Eigen::Index i = 0; i < spec.n; ++i) y[i] += spec.noise_sd * rng.normal();

  out.data.design = std::move(X);
  out.data.response = std::move(y);
  out.data.response_kind = ResponseKind::continuous;
  out.data.column_names.reserve(static_cast<std::size_t>(spec.p));
  for (Eigen::Index j = 0; j < spec.p; ++j) out.data.column_names.push_back("x" + std::to_string(j + 1));
  return out;
}

Simulated generate_two_class(Eigen::Index n, Eigen::Index p, Eigen::Index informative,
                             double shift, std::uint64_t seed) {
  if (n < 2 || p < 1 || informative < 1 || informative > p)
    throw InvalidArgument("generate_two_class: need n >= 2 and 1 <= informative <= p");
  Rng rng(seed);
  Simulated out;
  out.truth.beta = Eigen::VectorXd::Zero(p);
  out.truth.active = range(0, informative);
  out.truth.beta.head(informative).setConstant(shift);

  Dataset& d = out.data;
  d.response_kind = ResponseKind::binary;
  d.design.resize(n, p);
  d.response.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double label = static_cast<double>(i % 2);
    d.response[i] = label;
    const double sign = label == 1.0 ? 1.0 : -1.0;
    for (Eigen::Index j = 0; j < p; ++j)
      d.design(i, j) = rng.normal() + (j < informative ? sign * shift : 0.0);
  }
  for (Eigen::Index j = 0; j < p; ++j) d.column_names.push_back("x" + std::to_string(j + 1));
  return out;
}

}  // namespace tarp
