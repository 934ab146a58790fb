#include "tarp/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tarp/bench.hpp"
#include "tarp/data.hpp"
#include "tarp/ensemble.hpp"
#include "tarp/error.hpp"
#include "tarp/model_io.hpp"
#include "tarp/simgen.hpp"

namespace tarp::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

unsigned default_threads() {
  if (const char* env = std::getenv("TARP_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  return 1;
}

std::vector<TarpVariant> parse_variants(const std::string& text) {
  std::vector<TarpVariant> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(tarp_variant_from_string(item));
  if (out.empty()) throw InvalidArgument("no variant given");
  return out;
}

/// Files produced by the current command; removed unless commit() is called.
class OutputGuard {
 public:
  void add(const fs::path& p) { paths_.push_back(p); }
  void commit() { paths_.clear(); }
  ~OutputGuard() {
    std::error_code ec;
    for (const auto& p : paths_) fs::remove(p, ec);
  }

 private:
  std::vector<fs::path> paths_;
};

std::string timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream ss;
  ss << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return ss.str();
}

json resolved_options(const CLI::App& sub) {
  json opts = json::object();
  for (const CLI::Option* opt : sub.get_options()) {
    if (opt->get_lnames().empty()) continue;
    const std::string& name = opt->get_lnames().front();
    if (name == "help" || name == "config") continue;
    if (opt->count() > 0) {
      const auto& r = opt->results();
      opts[name] = r.size() == 1 ? json(r.front()) : json(r);
    } else {
      opts[name] = opt->get_default_str();
    }
  }
  return opts;
}

/// Reproducibility record next to a primary output. Timestamps live only here.
void write_metadata(const fs::path& primary, const CLI::App& sub, double seconds,
                    OutputGuard& guard, json extra = json::object()) {
  const fs::path meta = primary.string() + ".meta.json";
  json doc{{"command", sub.get_name()},
           {"options", resolved_options(sub)},
           {"timestamp", timestamp()},
           {"wall_seconds", seconds}};
  for (auto& [k, v] : extra.items()) doc[k] = v;
  guard.add(meta);
  std::ofstream out(meta);
  out << doc.dump(2) << '\n';
  if (!out) throw DataError("cannot write '" + meta.string() + "'");
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct SimulateArgs {
  std::string scheme = "I";
  Eigen::Index n = 200;
  Eigen::Index p = 2000;
  double noise_sd = 1.0;
  std::uint64_t seed = 1;
  std::string out = "simulated.csv";
  std::string truth;
};

struct FitArgs {
  std::string train;
  std::string target = "y";
  std::string response = "continuous";
  std::string out = "model.json";
  int N = 100;
  std::string variant = "ris_rp";
  std::optional<double> delta;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  double a_sigma = kDefaultSigmaShape;
  double b_sigma = kDefaultSigmaRate;
  double sigma_theta2 = 1.0;
};

struct PredictArgs {
  std::string model;
  std::string data;
  std::string target;
  double level = 0.5;
  std::string out = "predictions.csv";
};

struct BenchArgs {
  std::string scheme = "III";
  Eigen::Index n = 200;
  Eigen::Index p = 2000;
  Eigen::Index n_test = 100;
  int replicates = 30;
  int N = 50;
  std::string variant = "ris_rp";
  std::optional<double> delta;
  double level = 0.5;
  double noise_sd = 1.0;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::string out = "bench.csv";
  std::string plot_data;
};

void do_simulate(const SimulateArgs& a, const CLI::App& sub, std::ostream& out,
                 OutputGuard& guard) {
  const auto t0 = std::chrono::steady_clock::now();
  SchemeSpec spec{scheme_from_string(a.scheme), a.n, a.p, a.noise_sd, a.seed};
  const Simulated sim = generate(spec);

  const fs::path csv = a.out;
  const fs::path truth_path = a.truth.empty() ? fs::path(a.out + ".truth.json") : fs::path(a.truth);
  guard.add(csv);
  save_csv(sim.data, csv, "y");

  json truth{{"scheme", to_string(sim.truth.scheme)},
             {"n", a.n},
             {"p", a.p},
             {"noise_sd", a.noise_sd},
             {"seed", a.seed},
             {"active", sim.truth.active}};
  std::vector<Eigen::Index> nz;
  std::vector<double> values;
  for (Eigen::Index j = 0; j < sim.truth.beta.size(); ++j)
    if (sim.truth.beta[j] != 0.0) {
      nz.push_back(j);
      values.push_back(sim.truth.beta[j]);
    }
  truth["beta_index"] = nz;
  truth["beta_value"] = values;
  guard.add(truth_path);
  std::ofstream tf(truth_path);
  tf << truth.dump(2) << '\n';
  if (!tf) throw DataError("cannot write '" + truth_path.string() + "'");

  write_metadata(csv, sub, seconds_since(t0), guard);
  out << "wrote " << a.n << " x " << a.p << " scheme " << to_string(spec.scheme) << " data to "
      << csv.string() << "\n";
}

void do_fit(const FitArgs& a, const CLI::App& sub, std::ostream& out, OutputGuard& guard) {
  const auto t0 = std::chrono::steady_clock::now();
  const ResponseKind kind = response_kind_from_string(a.response);
  const Dataset raw = load_csv(a.train, a.target, kind);
  auto [data, params] = standardize(raw);

  const TarpVariant variant = tarp_variant_from_string(a.variant);
  const double delta = a.delta.value_or(default_delta(data.rows(), data.cols()));
  const auto configs = sample_config_grid(data.rows(), data.cols(), a.N, variant, delta, a.seed);

  FitOptions options;
  options.a_sigma = a.a_sigma;
  options.b_sigma = a.b_sigma;
  options.sigma_theta2 = a.sigma_theta2;
  options.threads = a.threads;
  const TarpModel model = fit_tarp(data, params, configs, options, a.seed);

  guard.add(a.out);
  save_model(model, a.out);
  const double seconds = seconds_since(t0);

  Eigen::Index m_lo = model.replicates.front().projection.rows(), m_hi = m_lo;
  for (const auto& rep : model.replicates) {
    m_lo = std::min(m_lo, rep.projection.rows());
    m_hi = std::max(m_hi, rep.projection.rows());
  }
  write_metadata(a.out, sub, seconds, guard,
                 {{"delta", delta}, {"m_min", m_lo}, {"m_max", m_hi}});
  out << "fitted " << model.replicates.size() << " replicates (" << to_string(variant)
      << ", delta " << delta << ", m in [" << m_lo << ", " << m_hi << "], n " << data.rows()
      << ", p " << data.cols() << ") in " << std::fixed << std::setprecision(2) << seconds
      << " s -> " << a.out << "\n";
  out.unsetf(std::ios::fixed);
}

Eigen::MatrixXd select_predictors(const CsvTable& table, const TarpModel& model,
                                  const std::string& target) {
  const Eigen::Index p = model.predictors();
  Eigen::MatrixXd X(table.values.rows(), p);
  if (!model.column_names.empty()) {
    for (Eigen::Index j = 0; j < p; ++j) {
      const auto& name = model.column_names[static_cast<std::size_t>(j)];
      const auto it = std::find(table.header.begin(), table.header.end(), name);
      if (it == table.header.end()) throw DataError("predictor column '" + name + "' not found");
      X.col(j) = table.values.col(it - table.header.begin());
    }
    return X;
  }
  Eigen::Index j = 0;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (table.header[c] == target) continue;
    if (j == p) throw DataError("data has more predictor columns than the model");
    X.col(j++) = table.values.col(static_cast<Eigen::Index>(c));
  }
  if (j != p) throw DataError("data has fewer predictor columns than the model");
  return X;
}

void do_predict(const PredictArgs& a, const CLI::App& sub, std::ostream& out, OutputGuard& guard) {
  const auto t0 = std::chrono::steady_clock::now();
  const TarpModel model = load_model(a.model);
  const CsvTable table = read_csv_table(a.data);
  if (!table.values.allFinite()) throw DataError("prediction data contains non-finite values");
  const Eigen::MatrixXd X = select_predictors(table, model, a.target);
  const TarpPrediction pred = predict_tarp(model, X, a.level);

  guard.add(a.out);
  std::ofstream f(a.out);
  if (!f) throw DataError("cannot write '" + a.out + "'");
  if (pred.kind == ResponseKind::binary) {
    f << "probability\n";
    for (Eigen::Index i = 0; i < pred.probability.size(); ++i)
      f << format_double(pred.probability[i]) << '\n';
  } else {
    f << "point,lo,hi\n";
    for (Eigen::Index i = 0; i < pred.point.size(); ++i)
      f << format_double(pred.point[i]) << ',' << format_double(pred.lo[i]) << ','
        << format_double(pred.hi[i]) << '\n';
  }
  f.close();
  if (!f) throw DataError("write to '" + a.out + "' failed");
  write_metadata(a.out, sub, seconds_since(t0), guard);
  out << "wrote " << X.rows() << " predictions to " << a.out << "\n";
}

void do_bench(const BenchArgs& a, const CLI::App& sub, std::ostream& out, OutputGuard& guard) {
  const auto t0 = std::chrono::steady_clock::now();
  BenchOptions o;
  o.scheme = scheme_from_string(a.scheme);
  o.n = a.n;
  o.p = a.p;
  o.n_test = a.n_test;
  o.replicates = a.replicates;
  o.ensemble_size = a.N;
  o.variants = parse_variants(a.variant);
  o.delta = a.delta;
  o.level = a.level;
  o.noise_sd = a.noise_sd;
  o.seed = a.seed;
  o.threads = a.threads;
  const BenchResult result = run_benchmark(o);

  guard.add(a.out);
  write_bench_csv(result, a.out);
  const std::string plot = a.plot_data.empty() ? a.out + ".long.csv" : a.plot_data;
  guard.add(plot);
  write_plot_data(result, plot);
  write_metadata(a.out, sub, seconds_since(t0), guard, {{"delta", result.delta}});

  out << "scheme " << to_string(o.scheme) << ", n " << o.n << ", p " << o.p << ", "
      << o.replicates << " replicates, N " << o.ensemble_size << ", delta " << result.delta
      << "\n";
  out << std::left << std::setw(10) << "method" << std::setw(22) << "MSPE mean (sd)"
      << std::setw(22) << "ECP mean (sd)" << "width mean (sd)\n";
  out << std::fixed << std::setprecision(3);
  for (const auto& s : result.summaries) {
    auto cell = [](double m, double sd) {
      std::ostringstream c;
      c << std::fixed << std::setprecision(3) << m << " (" << sd << ")";
      return c.str();
    };
    out << std::setw(10) << to_string(s.method) << std::setw(22) << cell(s.mspe_mean, s.mspe_sd)
        << std::setw(22) << cell(s.ecp_mean, s.ecp_sd) << cell(s.width_mean, s.width_sd) << "\n";
  }
  out.unsetf(std::ios::fixed);
}

/// Replaces `--config FILE` with the file's `key = value` entries as flags.
/// Keys already given on the command line are skipped so flags win.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  std::string file;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      file = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      file = args[i].substr(9);
    } else {
      out.push_back(args[i]);
    }
  }
  if (file.empty()) return out;

  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigINI().from_file(file);
  } catch (const CLI::FileError& e) {
    throw InvalidArgument(std::string("config file: ") + e.what());
  }
  auto given = [&](const std::string& flag) {
    for (const auto& a : out)
      if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
    return false;
  };
  for (const auto& item : items) {
    if (item.name == "++" || item.name == "--") continue;  // section markers
    const std::string flag = "--" + item.name;
    if (given(flag)) continue;
    out.push_back(flag);
    out.insert(out.end(), item.inputs.begin(), item.inputs.end());
  }
  return out;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Targeted random projection regression"};
  app.require_subcommand(1);
  const unsigned threads = default_threads();
  std::string config_file;  // consumed by expand_config; declared for --help

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Generate a simulation-scheme dataset");
  simulate->add_option("--config", config_file, "key = value option file; flags take precedence");
  simulate->add_option("--scheme", sim.scheme, "I, II, III or IV")->capture_default_str();
  simulate->add_option("--n", sim.n, "rows")->capture_default_str();
  simulate->add_option("--p", sim.p, "predictors")->capture_default_str();
  simulate->add_option("--noise-sd", sim.noise_sd, "error standard deviation")->capture_default_str();
  simulate->add_option("--seed", sim.seed, "random seed")->capture_default_str();
  simulate->add_option("--out", sim.out, "output CSV (columns x1..xp, y)")->capture_default_str();
  simulate->add_option("--truth", sim.truth, "truth JSON (default <out>.truth.json)");

  FitArgs fit;
  fit.threads = threads;
  auto* fitc = app.add_subcommand("fit", "Fit an ensemble to a training CSV");
  fitc->add_option("--config", config_file, "key = value option file; flags take precedence");
  fitc->add_option("--train", fit.train, "training CSV with header")->required();
  fitc->add_option("--target", fit.target, "response column")->capture_default_str();
  fitc->add_option("--response", fit.response, "continuous or binary")->capture_default_str();
  fitc->add_option("--out", fit.out, "model file")->capture_default_str();
  fitc->add_option("--N", fit.N, "number of replicates")->capture_default_str();
  fitc->add_option("--variant", fit.variant, "ris_rp, ris_pcr or plain_rp")->capture_default_str();
  fitc->add_option("--delta", fit.delta, "screening exponent (default max{0,(1+ln(p/n))/2})");
  fitc->add_option("--seed", fit.seed, "master seed")->capture_default_str();
  fitc->add_option("--threads", fit.threads, "worker threads (env TARP_THREADS)")->capture_default_str();
  fitc->add_option("--a-sigma", fit.a_sigma, "inverse-gamma shape")->capture_default_str();
  fitc->add_option("--b-sigma", fit.b_sigma, "inverse-gamma rate")->capture_default_str();
  fitc->add_option("--sigma-theta2", fit.sigma_theta2, "logistic prior variance")->capture_default_str();

  PredictArgs pr;
  auto* predict = app.add_subcommand(
      "predict", "Predict new rows; writes point,lo,hi (continuous) or probability (binary)");
  predict->add_option("--config", config_file, "key = value option file; flags take precedence");
  predict->add_option("--model", pr.model, "model file")->required();
  predict->add_option("--data", pr.data, "CSV with the model's predictor columns")->required();
  predict->add_option("--target", pr.target, "column to ignore when the model has no names");
  predict->add_option("--level", pr.level, "interval level")->capture_default_str();
  predict->add_option("--out", pr.out, "output CSV")->capture_default_str();

  BenchArgs be;
  be.threads = threads;
  auto* bench = app.add_subcommand(
      "bench",
      "Repeated train/test experiments; writes replicate,method,mspe,ecp,width rows plus "
      "mean/sd rows, and long-format replicate,method,metric,value plot data");
  bench->add_option("--config", config_file, "key = value option file; flags take precedence");
  bench->add_option("--scheme", be.scheme, "I, II, III or IV")->capture_default_str();
  bench->add_option("--n", be.n, "training rows")->capture_default_str();
  bench->add_option("--p", be.p, "predictors")->capture_default_str();
  bench->add_option("--n-test", be.n_test, "test rows")->capture_default_str();
  bench->add_option("--replicates", be.replicates, "experiments")->capture_default_str();
  bench->add_option("--N", be.N, "ensemble size")->capture_default_str();
  bench->add_option("--variant", be.variant, "comma-separated list of ris_rp, ris_pcr, plain_rp")
      ->capture_default_str();
  bench->add_option("--delta", be.delta, "screening exponent");
  bench->add_option("--level", be.level, "interval level")->capture_default_str();
  bench->add_option("--noise-sd", be.noise_sd, "error standard deviation")->capture_default_str();
  bench->add_option("--seed", be.seed, "seed")->capture_default_str();
  bench->add_option("--threads", be.threads, "worker threads (env TARP_THREADS)")->capture_default_str();
  bench->add_option("--out", be.out, "metrics CSV")->capture_default_str();
  bench->add_option("--plot-data", be.plot_data, "long-format CSV (default <out>.long.csv)");

  std::vector<std::string> expanded;
  try {
    expanded = expand_config(args);
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  std::vector<const char*> argv;
  argv.reserve(expanded.size());
  for (const auto& a : expanded) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kSuccess;
    }
    err << "error: " << e.what() << "\n";
    if (!app.get_subcommands().empty())
      err << app.get_subcommands().front()->help();
    return kUsage;
  }

  OutputGuard guard;
  try {
    if (*simulate) do_simulate(sim, *simulate, out, guard);
    if (*fitc) do_fit(fit, *fitc, out, guard);
    if (*predict) do_predict(pr, *predict, out, guard);
    if (*bench) do_bench(be, *bench, out, guard);
    guard.commit();
    return kSuccess;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kDataError;
  }
}

}  // namespace tarp::cli
