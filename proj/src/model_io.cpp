#include "tarp/model_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tarp/error.hpp"

namespace tarp {

using nlohmann::json;

namespace {

json to_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    std::vector<double> r(static_cast<std::size_t>(m.cols()));
    for (Eigen::Index j = 0; j < m.cols(); ++j) r[static_cast<std::size_t>(j)] = m(i, j);
    rows.push_back(std::move(r));
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(rows)}};
}

Eigen::VectorXd vector_from(const json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Eigen::MatrixXd matrix_from(const json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  Eigen::MatrixXd m(rows, cols);
  const auto& data = j.at("data");
  if (static_cast<Eigen::Index>(data.size()) != rows) throw DataError("matrix row count mismatch");
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto r = data[static_cast<std::size_t>(i)].get<std::vector<double>>();
    if (static_cast<Eigen::Index>(r.size()) != cols) throw DataError("matrix column count mismatch");
    for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = r[static_cast<std::size_t>(k)];
  }
  return m;
}

std::string encode_bits(const std::vector<bool>& bits) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve((bits.size() + 3) / 4);
  for (std::size_t i = 0; i < bits.size(); i += 4) {
    unsigned nibble = 0;
    for (std::size_t b = 0; b < 4 && i + b < bits.size(); ++b)
      if (bits[i + b]) nibble |= 1u << b;
    out.push_back(kHex[nibble]);
  }
  return out;
}

std::vector<bool> decode_bits(const std::string& hex, std::size_t count) {
  if (hex.size() != (count + 3) / 4) throw DataError("inclusion bitset has wrong length");
  std::vector<bool> bits(count);
  for (std::size_t i = 0; i < hex.size(); ++i) {
    const char c = hex[i];
    unsigned nibble;
    if (c >= '0' && c <= '9')
      nibble = static_cast<unsigned>(c - '0');
    else if (c >= 'a' && c <= 'f')
      nibble = static_cast<unsigned>(c - 'a' + 10);
    else
      throw DataError("inclusion bitset has invalid character");
    for (std::size_t b = 0; b < 4 && 4 * i + b < count; ++b) bits[4 * i + b] = (nibble >> b) & 1u;
  }
  return bits;
}

json projection_to_json(const ProjectionMatrix& R) {
  json j{{"variant", to_string(R.variant())},
         {"rows", R.rows()},
         {"requested_rows", R.requested_rows()},
         {"cols", R.cols()},
         {"gamma", encode_bits(R.gamma().gamma())}};
  switch (R.variant()) {
    case ProjectionVariant::ris_rp:
      j["psi"] = R.psi();
      j["seed"] = R.seed();
      break;
    case ProjectionVariant::sparse_variant:
      j["kappa"] = R.kappa();
      j["kappa_n"] = R.kappa_n();
      j["seed"] = R.seed();
      break;
    case ProjectionVariant::ris_pcr:
      j["block"] = to_json(R.active_block());
      break;
  }
  return j;
}

ProjectionMatrix projection_from_json(const json& j) {
  const auto variant = projection_variant_from_string(j.at("variant").get<std::string>());
  const auto cols = j.at("cols").get<std::size_t>();
  InclusionVector gamma(decode_bits(j.at("gamma").get<std::string>(), cols));
  const auto requested = j.at("requested_rows").get<Eigen::Index>();
  switch (variant) {
    case ProjectionVariant::ris_rp:
      return sample_ris_rp(gamma, requested, j.at("psi").get<double>(),
                           j.at("seed").get<std::uint64_t>());
    case ProjectionVariant::sparse_variant:
      return sample_sparse_variant(gamma, requested, j.at("kappa").get<double>(),
                                   j.at("kappa_n").get<Eigen::Index>(),
                                   j.at("seed").get<std::uint64_t>());
    case ProjectionVariant::ris_pcr:
      return ProjectionMatrix::from_pcr_block(std::move(gamma), requested,
                                              matrix_from(j.at("block")));
  }
  throw DataError("unreachable projection variant");
}

json posterior_to_json(const ReplicatePosterior& post) {
  if (const auto* g = std::get_if<GaussianPosterior>(&post)) {
    return {{"kind", "gaussian"},
            {"location", to_json(g->location)},
            {"precision_inverse", to_json(g->precision_inverse)},
            {"residual_quadratic", g->residual_quadratic},
            {"n", g->n},
            {"a_sigma", g->a_sigma},
            {"b_sigma", g->b_sigma}};
  }
  const auto& l = std::get<LaplacePosterior>(post);
  return {{"kind", "laplace"},
          {"mode", to_json(l.mode)},
          {"hessian_at_mode", to_json(l.hessian_at_mode)},
          {"prior_variance", l.prior_variance},
          {"iterations", l.iterations},
          {"gradient_norm", l.gradient_norm}};
}

ReplicatePosterior posterior_from_json(const json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "gaussian") {
    GaussianPosterior g;
    g.location = vector_from(j.at("location"));
    g.precision_inverse = matrix_from(j.at("precision_inverse"));
    g.residual_quadratic = j.at("residual_quadratic").get<double>();
    g.n = j.at("n").get<Eigen::Index>();
    g.a_sigma = j.at("a_sigma").get<double>();
    g.b_sigma = j.at("b_sigma").get<double>();
    // Derived fields use the same expressions as fit_gaussian.
    g.df = static_cast<double>(g.n) + 2.0 * g.a_sigma;
    g.ig_shape = g.a_sigma + 0.5 * static_cast<double>(g.n);
    g.ig_rate = g.b_sigma + 0.5 * g.residual_quadratic;
    g.scale = g.noise_scale() * g.precision_inverse;
    return g;
  }
  if (kind == "laplace") {
    LaplacePosterior l;
    l.mode = vector_from(j.at("mode"));
    l.hessian_at_mode = matrix_from(j.at("hessian_at_mode"));
    l.prior_variance = j.at("prior_variance").get<double>();
    l.iterations = j.at("iterations").get<int>();
    l.gradient_norm = j.at("gradient_norm").get<double>();
    return l;
  }
  throw DataError("unknown posterior kind '" + kind + "'");
}

}  // namespace

std::string serialize_model(const TarpModel& model) {
  json reps = json::array();
  for (const auto& rep : model.replicates) {
    const auto& c = rep.config;
    reps.push_back({{"config",
                     {{"m", c.m},
                      {"psi", c.psi},
                      {"delta", c.delta},
                      {"variant", to_string(c.variant)},
                      {"seed", c.seed}}},
                    {"projection", projection_to_json(rep.projection)},
                    {"posterior", posterior_to_json(rep.posterior)}});
  }
  std::vector<int> constant(model.standardization.constant_columns.begin(),
                            model.standardization.constant_columns.end());
  const json doc{
      {"format", "tarp-model"},
      {"version", kModelFormatVersion},
      {"response_kind", to_string(model.response_kind)},
      {"master_seed", model.master_seed},
      {"data_hash", model.data_hash},
      {"n_train", model.n_train},
      {"column_names", model.column_names},
      {"options",
       {{"a_sigma", model.options.a_sigma},
        {"b_sigma", model.options.b_sigma},
        {"sigma_theta2", model.options.sigma_theta2}}},
      {"standardization",
       {{"column_means", to_json(model.standardization.column_means)},
        {"column_scales", to_json(model.standardization.column_scales)},
        {"constant_columns", constant},
        {"response_mean", model.standardization.response_mean}}},
      {"replicates", std::move(reps)}};
  return doc.dump() + "\n";
}

TarpModel deserialize_model(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw DataError(std::string("model file is not valid JSON: ") + e.what());
  }
  try {
    if (doc.at("format").get<std::string>() != "tarp-model")
      throw DataError("not a tarp model file");
    const int version = doc.at("version").get<int>();
    if (version != kModelFormatVersion)
      throw DataError("unsupported model format version " + std::to_string(version));

    TarpModel model;
    model.response_kind = response_kind_from_string(doc.at("response_kind").get<std::string>());
    model.master_seed = doc.at("master_seed").get<std::uint64_t>();
    model.data_hash = doc.at("data_hash").get<std::uint64_t>();
    model.n_train = doc.at("n_train").get<Eigen::Index>();
    model.column_names = doc.at("column_names").get<std::vector<std::string>>();
    const auto& opt = doc.at("options");
    model.options.a_sigma = opt.at("a_sigma").get<double>();
    model.options.b_sigma = opt.at("b_sigma").get<double>();
    model.options.sigma_theta2 = opt.at("sigma_theta2").get<double>();
    const auto& st = doc.at("standardization");
    model.standardization.column_means = vector_from(st.at("column_means"));
    model.standardization.column_scales = vector_from(st.at("column_scales"));
    for (int c : st.at("constant_columns").get<std::vector<int>>())
      model.standardization.constant_columns.push_back(c != 0);
    model.standardization.response_mean = st.at("response_mean").get<double>();

    for (const auto& r : doc.at("replicates")) {
      const auto& c = r.at("config");
      TarpConfig cfg;
      cfg.m = c.at("m").get<Eigen::Index>();
      cfg.psi = c.at("psi").get<double>();
      cfg.delta = c.at("delta").get<double>();
      cfg.variant = tarp_variant_from_string(c.at("variant").get<std::string>());
      cfg.seed = c.at("seed").get<std::uint64_t>();
      model.replicates.push_back(
          {cfg, projection_from_json(r.at("projection")), posterior_from_json(r.at("posterior"))});
    }
    if (model.replicates.empty()) throw DataError("model file has no replicates");
    return model;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed model file: ") + e.what());
  }
}

void save_model(const TarpModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << serialize_model(model);
  if (!out) throw DataError("write to '" + path.string() + "' failed");
}

TarpModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return deserialize_model(ss.str());
}

}  // namespace tarp
