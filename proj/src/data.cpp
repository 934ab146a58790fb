#include "tarp/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "tarp/error.hpp"
#include "tarp/rng.hpp"

namespace tarp {

std::string to_string(ResponseKind kind) {
  return kind == ResponseKind::binary ? "binary" : "continuous";
}

ResponseKind response_kind_from_string(const std::string& s) {
  if (s == "continuous") return ResponseKind::continuous;
  if (s == "binary") return ResponseKind::binary;
  throw InvalidArgument("unknown response kind '" + s + "'");
}

void Dataset::validate() const {
  if (response.size() != design.rows())
    throw DataError("design has " + std::to_string(design.rows()) +
                    " rows but response has " + std::to_string(response.size()));
  if (!column_names.empty() &&
      static_cast<Eigen::Index>(column_names.size()) != design.cols())
    throw DataError("column name count does not match design columns");
  if (!design.allFinite() || !response.allFinite())
    throw DataError("dataset contains NaN or infinite values");
  if (response_kind == ResponseKind::binary) {
    for (Eigen::Index i = 0; i < response.size(); ++i)
      if (response[i] != 0.0 && response[i] != 1.0)
        throw DataError("binary response must be 0 or 1 (row " +
                        std::to_string(i + 1) + ")");
  }
}

Eigen::MatrixXd StandardizationParams::apply(const Eigen::MatrixXd& design) const {
  if (design.cols() != column_means.size())
    throw DataError("design has " + std::to_string(design.cols()) +
                    " columns, standardization expects " +
                    std::to_string(column_means.size()));
  Eigen::MatrixXd out = design;
  for (Eigen::Index j = 0; j < out.cols(); ++j)
    out.col(j) = (out.col(j).array() - column_means[j]) / column_scales[j];
  return out;
}

Eigen::VectorXd StandardizationParams::center_response(const Eigen::VectorXd& y) const {
  return y.array() - response_mean;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r\"");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\"");
  return s.substr(first, last - first + 1);
}

double parse_cell(const std::string& raw, std::size_t row, const std::string& col) {
  const std::string s = trim(raw);
  double value = 0.0;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  if (begin != end && *begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (s.empty() || ec != std::errc() || ptr != end || !std::isfinite(value))
    throw DataError("non-numeric value '" + s + "' at row " + std::to_string(row) +
                    ", column '" + col + "'");
  return value;
}

}  // namespace

CsvTable read_csv_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "'");

  std::string line;
  if (!std::getline(in, line)) throw DataError("'" + path.string() + "' is empty");
  CsvTable table;
  table.header = split_line(line);
  for (auto& h : table.header) h = trim(h);

  std::vector<std::vector<double>> rows;
  std::size_t row = 1;  // header is row 1 in file coordinates
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const auto cells = split_line(line);
    if (cells.size() != table.header.size())
      throw DataError("row " + std::to_string(row) + " has " + std::to_string(cells.size()) +
                      " fields, expected " + std::to_string(table.header.size()));
    std::vector<double> values(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c)
      values[c] = parse_cell(cells[c], row, table.header[c]);
    rows.push_back(std::move(values));
  }
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto w = static_cast<Eigen::Index>(table.header.size());
  table.values.resize(n, w);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index c = 0; c < w; ++c)
      table.values(i, c) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)];
  return table;
}

Dataset load_csv(const std::filesystem::path& path, const std::string& target,
                 ResponseKind kind) {
  // Check the header before parsing the body so a missing target is reported first.
  {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    std::string line;
    if (!std::getline(in, line)) throw DataError("'" + path.string() + "' is empty");
    auto header = split_line(line);
    for (auto& h : header) h = trim(h);
    if (std::find(header.begin(), header.end(), target) == header.end())
      throw DataError("target column '" + target + "' not found in '" + path.string() + "'");
  }
  CsvTable table = read_csv_table(path);
  if (table.values.rows() < 2)
    throw DataError("'" + path.string() + "' needs at least 2 data rows");
  if (table.header.size() < 2)
    throw DataError("'" + path.string() + "' has no predictor columns");

  const auto target_col = static_cast<Eigen::Index>(
      std::find(table.header.begin(), table.header.end(), target) - table.header.begin());
  Dataset d;
  d.response_kind = kind;
  d.response = table.values.col(target_col);
  d.design.resize(table.values.rows(), table.values.cols() - 1);
  Eigen::Index j = 0;
  for (Eigen::Index c = 0; c < table.values.cols(); ++c) {
    if (c == target_col) continue;
    d.design.col(j++) = table.values.col(c);
    d.column_names.push_back(table.header[static_cast<std::size_t>(c)]);
  }
  d.validate();
  return d;
}

std::string format_double(double x) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

void save_csv(const Dataset& d, const std::filesystem::path& path,
              const std::string& target) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  for (Eigen::Index j = 0; j < d.cols(); ++j) {
    if (j < static_cast<Eigen::Index>(d.column_names.size()))
      out << d.column_names[j];
    else
      out << "x" << (j + 1);
    out << ',';
  }
  out << target << '\n';
  for (Eigen::Index i = 0; i < d.rows(); ++i) {
    for (Eigen::Index j = 0; j < d.cols(); ++j) out << format_double(d.design(i, j)) << ',';
    out << format_double(d.response[i]) << '\n';
  }
  if (!out) throw DataError("write to '" + path.string() + "' failed");
}

std::pair<Dataset, StandardizationParams> standardize(const Dataset& d) {
  const Eigen::Index n = d.rows();
  const Eigen::Index p = d.cols();
  if (n < 2) throw DataError("standardize needs at least 2 rows");

  StandardizationParams params;
  params.column_means = d.design.colwise().mean().transpose();
  params.column_scales = Eigen::VectorXd::Ones(p);
  params.constant_columns.assign(static_cast<std::size_t>(p), false);

  Dataset out = d;
  for (Eigen::Index j = 0; j < p; ++j) {
    out.design.col(j).array() -= params.column_means[j];
    const double sd = std::sqrt(out.design.col(j).squaredNorm() / static_cast<double>(n - 1));
    // Relative test: a column whose spread is at rounding level is constant.
    const double ref = std::max(1.0, std::abs(params.column_means[j]));
    if (sd <= 1e-12 * ref) {
      params.constant_columns[static_cast<std::size_t>(j)] = true;
      out.design.col(j).setZero();
    } else {
      params.column_scales[j] = sd;
      out.design.col(j) /= sd;
    }
  }
  if (d.response_kind == ResponseKind::continuous) {
    params.response_mean = d.response.mean();
    out.response = params.center_response(d.response);
  }
  return {std::move(out), std::move(params)};
}

Dataset select_rows(const Dataset& d, const std::vector<Eigen::Index>& idx) {
  Dataset out;
  out.response_kind = d.response_kind;
  out.column_names = d.column_names;
  out.design.resize(static_cast<Eigen::Index>(idx.size()), d.cols());
  out.response.resize(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) {
    out.design.row(static_cast<Eigen::Index>(k)) = d.design.row(idx[k]);
    out.response[static_cast<Eigen::Index>(k)] = d.response[idx[k]];
  }
  return out;
}

std::pair<Dataset, Dataset> split(const Dataset& d, double test_fraction,
                                  std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0))
    throw InvalidArgument("test fraction must lie in (0, 1)");
  const Eigen::Index n = d.rows();
  // ceil(n (1 - f)) == n - floor(n f); the latter avoids 1 - f rounding up.
  const auto n_test = static_cast<Eigen::Index>(
      std::floor(static_cast<double>(n) * test_fraction + 1e-9));
  const Eigen::Index n_train = n - n_test;
  if (n_train < 2)
    throw InvalidArgument("split leaves " + std::to_string(n_train) +
                          " training rows; at least 2 required");
  if (n_train >= n) throw InvalidArgument("split leaves no test rows");

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  Rng rng(seed);
  for (Eigen::Index i = n - 1; i > 0; --i)
    std::swap(order[static_cast<std::size_t>(i)],
              order[static_cast<std::size_t>(rng.uniform_int(0, i))]);

  std::vector<Eigen::Index> train(order.begin(), order.begin() + n_train);
  std::vector<Eigen::Index> test(order.begin() + n_train, order.end());
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
  return {select_rows(d, train), select_rows(d, test)};
}

}  // namespace tarp
