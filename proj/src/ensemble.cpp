#include "tarp/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <optional>

#include <boost/math/distributions/students_t.hpp>

#include "tarp/error.hpp"
#include "tarp/parallel.hpp"
#include "tarp/rng.hpp"

namespace tarp {

std::string to_string(TarpVariant v) {
  switch (v) {
    case TarpVariant::ris_rp:
      return "ris_rp";
    case TarpVariant::ris_pcr:
      return "ris_pcr";
    case TarpVariant::plain_rp_baseline:
      return "plain_rp";
  }
  return "?";
}

TarpVariant tarp_variant_from_string(const std::string& s) {
  if (s == "ris_rp") return TarpVariant::ris_rp;
  if (s == "ris_pcr") return TarpVariant::ris_pcr;
  if (s == "plain_rp" || s == "plain_rp_baseline") return TarpVariant::plain_rp_baseline;
  throw InvalidArgument("unknown variant '" + s + "' (expected ris_rp, ris_pcr or plain_rp)");
}

std::pair<Eigen::Index, Eigen::Index> projection_dimension_range(Eigen::Index n, Eigen::Index p) {
  if (n < 2 || p < 1) throw InvalidArgument("projection range needs n >= 2 and p >= 1");
  const auto hi = std::min<Eigen::Index>(3 * n / 4, p);
  auto lo = static_cast<Eigen::Index>(std::ceil(2.0 * std::log(static_cast<double>(p))));
  if (lo > hi || lo < 1) lo = 1;
  return {lo, std::max<Eigen::Index>(hi, 1)};
}

std::vector<TarpConfig> sample_config_grid(Eigen::Index n, Eigen::Index p, int N,
                                           TarpVariant variant, double delta,
                                           std::uint64_t master_seed) {
  if (N < 1) throw InvalidArgument("ensemble size N must be at least 1");
  if (!(delta >= 0.0)) throw InvalidArgument("delta must be non-negative");
  const auto [lo, hi] = projection_dimension_range(n, p);
  std::vector<TarpConfig> out(static_cast<std::size_t>(N));
  for (int l = 0; l < N; ++l) {
    TarpConfig& c = out[static_cast<std::size_t>(l)];
    c.seed = derive_seed(master_seed, static_cast<std::uint64_t>(l));
    Rng rng(c.seed);
    c.m = rng.uniform_int(lo, hi);
    c.psi = 0.1 + 0.3 * rng.uniform_open();
    c.delta = delta;
    c.variant = variant;
  }
  return out;
}

std::uint64_t hash_dataset(const Dataset& d) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](const double* data, Eigen::Index count) {
    const auto* bytes = reinterpret_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < static_cast<std::size_t>(count) * sizeof(double); ++i) {
      h ^= bytes[i];
      h *= 0x100000001b3ULL;
    }
  };
  mix(d.design.data(), d.design.size());
  mix(d.response.data(), d.response.size());
  return h;
}

Replicate fit_replicate(const Dataset& data, const Eigen::VectorXd& correlations,
                        const TarpConfig& config, const FitOptions& options) {
  const Eigen::Index p = data.cols();
  InclusionVector gamma;
  if (config.variant == TarpVariant::plain_rp_baseline) {
    gamma = InclusionVector::all(p);
  } else {
    Rng gamma_rng(derive_seed(config.seed, 0));
    gamma = sample_inclusion(inclusion_probabilities(correlations, config.delta), gamma_rng);
  }

  Replicate rep{config, {}, GaussianPosterior{}};
  if (config.variant == TarpVariant::ris_pcr)
    rep.projection = compute_ris_pcr(data.design, gamma, config.m);
  else
    rep.projection = sample_ris_rp(gamma, config.m, config.psi, derive_seed(config.seed, 1));

  const Eigen::MatrixXd Z = compress(data.design, rep.projection);
  if (data.response_kind == ResponseKind::binary)
    rep.posterior = fit_bernoulli_laplace(Z, data.response, options.sigma_theta2);
  else
    rep.posterior = fit_gaussian(Z, data.response, options.a_sigma, options.b_sigma);
  return rep;
}

TarpModel fit_tarp(const Dataset& data, const StandardizationParams& params,
                   const std::vector<TarpConfig>& configs, const FitOptions& options,
                   std::uint64_t master_seed) {
  if (configs.empty()) throw InvalidArgument("fit_tarp needs at least one configuration");
  data.validate();
  if (params.column_means.size() != data.cols())
    throw DataError("standardization parameters do not match the design width");

  const Correlations corr = marginal_correlations(data.design, data.response);

  TarpModel model;
  model.standardization = params;
  model.column_names = data.column_names;
  model.response_kind = data.response_kind;
  model.master_seed = master_seed;
  model.data_hash = hash_dataset(data);
  model.n_train = data.rows();
  model.options = options;
  model.options.threads = 1;  // execution detail, not part of the fitted model

  std::vector<std::optional<Replicate>> slots(configs.size());
  parallel_for_index(configs.size(), options.threads, [&](std::size_t l) {
    try {
      slots[l] = fit_replicate(data, corr.r, configs[l], options);
    } catch (const NumericalError& e) {
      throw NumericalError("replicate " + std::to_string(l) + ": " + e.what());
    } catch (const InvalidArgument& e) {
      throw InvalidArgument("replicate " + std::to_string(l) + ": " + e.what());
    } catch (const DataError& e) {
      throw DataError("replicate " + std::to_string(l) + ": " + e.what());
    }
  });
  model.replicates.reserve(configs.size());
  for (auto& s : slots) model.replicates.push_back(std::move(*s));
  return model;
}

TarpModel fit_tarp(const Dataset& raw_train, const std::vector<TarpConfig>& configs,
                   const FitOptions& options, std::uint64_t master_seed) {
  raw_train.validate();
  auto [standardized, params] = standardize(raw_train);
  return fit_tarp(standardized, params, configs, options, master_seed);
}

namespace {

double t_cdf(const TComponent& c, double x) {
  return boost::math::cdf(boost::math::students_t_distribution<>(c.df),
                          (x - c.location) / c.scale);
}

double t_component_quantile(const TComponent& c, double prob) {
  return c.location +
         c.scale * boost::math::quantile(boost::math::students_t_distribution<>(c.df), prob);
}

bool all_identical(const std::vector<TComponent>& components) {
  const TComponent& first = components.front();
  return std::all_of(components.begin(), components.end(), [&](const TComponent& c) {
    return c.df == first.df && c.location == first.location && c.scale == first.scale;
  });
}

}  // namespace

double mixture_cdf(const std::vector<TComponent>& components, double x) {
  if (components.empty()) throw InvalidArgument("mixture_cdf: empty mixture");
  double s = 0.0;
  for (const auto& c : components) s += t_cdf(c, x);
  return s / static_cast<double>(components.size());
}

double mixture_quantile(const std::vector<TComponent>& components, double prob) {
  if (components.empty()) throw InvalidArgument("mixture_quantile: empty mixture");
  if (!(prob > 0.0 && prob < 1.0))
    throw InvalidArgument("mixture_quantile: prob must lie in (0, 1)");
  if (all_identical(components)) return t_component_quantile(components.front(), prob);

  // The mixture quantile lies between the extreme component quantiles.
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& c : components) {
    const double q = t_component_quantile(c, prob);
    lo = std::min(lo, q);
    hi = std::max(hi, q);
  }
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (mixture_cdf(components, mid) < prob)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

Interval mixture_central_interval(const std::vector<TComponent>& components, double level) {
  if (components.empty()) throw InvalidArgument("mixture_central_interval: empty mixture");
  if (all_identical(components)) {
    // Same arithmetic as central_interval, so a one-member mixture reproduces it.
    const TComponent& c = components.front();
    const double half = t_quantile(c.df, level) * c.scale;
    return {c.location - half, c.location + half};
  }
  return {mixture_quantile(components, 0.5 * (1.0 - level)),
          mixture_quantile(components, 0.5 * (1.0 + level))};
}

TarpPrediction predict_tarp(const TarpModel& model, const Eigen::MatrixXd& X_new, double level) {
  if (model.replicates.empty()) throw InvalidArgument("predict_tarp: model has no replicates");
  if (!(level > 0.0 && level < 1.0)) throw InvalidArgument("level must lie in (0, 1)");
  const Eigen::MatrixXd Xs = model.standardization.apply(X_new);
  const Eigen::Index n_new = Xs.rows();
  const auto N = model.replicates.size();

  TarpPrediction out;
  out.kind = model.response_kind;

  if (model.response_kind == ResponseKind::binary) {
    out.probability = Eigen::VectorXd::Zero(n_new);
    for (const auto& rep : model.replicates) {
      const auto& post = std::get<LaplacePosterior>(rep.posterior);
      out.probability += predict_prob(post, compress(Xs, rep.projection));
    }
    out.probability /= static_cast<double>(N);
    return out;
  }

  std::vector<PredictiveT> preds;
  preds.reserve(N);
  out.point = Eigen::VectorXd::Zero(n_new);
  for (const auto& rep : model.replicates) {
    const auto& post = std::get<GaussianPosterior>(rep.posterior);
    preds.push_back(predictive(post, compress(Xs, rep.projection)));
    out.point += preds.back().location;
  }
  out.point /= static_cast<double>(N);
  const double shift = model.standardization.response_mean;
  out.point.array() += shift;

  out.lo.resize(n_new);
  out.hi.resize(n_new);
  std::vector<TComponent> mix(N);
  for (Eigen::Index i = 0; i < n_new; ++i) {
    for (std::size_t l = 0; l < N; ++l)
      mix[l] = {preds[l].df, preds[l].location[i], std::sqrt(preds[l].marginal_scale[i])};
    const Interval iv = mixture_central_interval(mix, level);
    out.lo[i] = iv.lo + shift;
    out.hi[i] = iv.hi + shift;
  }
  return out;
}

}  // namespace tarp
