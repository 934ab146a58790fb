#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace tarp {

enum class ResponseKind { continuous, binary };

std::string to_string(ResponseKind kind);
ResponseKind response_kind_from_string(const std::string& s);

/// Tabular regression data: n rows of p predictors plus one response.
struct Dataset {
  Eigen::MatrixXd design;  // n x p, column-major
  Eigen::VectorXd response;
  ResponseKind response_kind = ResponseKind::continuous;
  std::vector<std::string> column_names;

  Eigen::Index rows() const { return design.rows(); }
  Eigen::Index cols() const { return design.cols(); }

  /// Checks shape agreement, finiteness and binary coding. Throws DataError.
  void validate() const;
};

/// Centering and scaling learned on a training set.
struct StandardizationParams {
  Eigen::VectorXd column_means;
  Eigen::VectorXd column_scales;  // 1 for constant columns
  std::vector<bool> constant_columns;
  double response_mean = 0.0;  // 0 for binary responses

  /// Maps a raw design matrix into the standardized training coordinates.
  Eigen::MatrixXd apply(const Eigen::MatrixXd& design) const;
  Eigen::VectorXd center_response(const Eigen::VectorXd& y) const;
};

/// Raw numeric CSV contents.
struct CsvTable {
  std::vector<std::string> header;
  Eigen::MatrixXd values;  // rows x header.size()
};

/// Reads a header-row CSV whose cells are all numbers. Reports the file row
/// and column name of any cell that does not parse.
CsvTable read_csv_table(const std::filesystem::path& path);

/// Reads a header-row CSV; `target` names the response column.
Dataset load_csv(const std::filesystem::path& path, const std::string& target,
                 ResponseKind kind = ResponseKind::continuous);

/// Writes design columns followed by the response column named `target`.
void save_csv(const Dataset& d, const std::filesystem::path& path,
              const std::string& target = "y");

/// Centers and scales columns (sample sd, divisor n-1) and centers a
/// continuous response.
std::pair<Dataset, StandardizationParams> standardize(const Dataset& d);

/// Random row partition; train gets ceil(n * (1 - test_fraction)) rows.
std::pair<Dataset, Dataset> split(const Dataset& d, double test_fraction,
                                  std::uint64_t seed);

/// Shortest decimal text that parses back to exactly `x`.
std::string format_double(double x);

/// Rows `idx` of `d`, in the given order.
Dataset select_rows(const Dataset& d, const std::vector<Eigen::Index>& idx);

}  // namespace tarp
