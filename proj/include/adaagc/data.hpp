#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include <Eigen/SparseCore>

#include "adaagc/core.hpp"

namespace adaagc {

using SparseRows = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Training examples (a_i, b_i): one sparse row per example.
struct LabeledDataset {
  SparseRows rows;
  Vector labels;

  Index n() const { return rows.rows(); }
  Index d() const { return rows.cols(); }
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Parses LibSVM text: `<label> <idx>:<val> ...` per line, 1-based strictly
/// increasing indices. Blank lines and `#` comments are skipped. d is the
/// largest index seen, or `min_dimension` when that is larger.
LabeledDataset parse_libsvm(std::istream& in, Index min_dimension = 0);
LabeledDataset parse_libsvm(std::string_view text, Index min_dimension = 0);
LabeledDataset load_libsvm(const std::filesystem::path& path,
                           Index min_dimension = 0);

/// Writes the dataset back in LibSVM format using shortest round-trip
/// decimal representations.
void write_libsvm(std::ostream& out, const LabeledDataset& data);

enum class ScalingMode { none, unit_row, minmax_column };

ScalingMode parse_scaling_mode(std::string_view name);

/// Returns a transformed copy. minmax_column maps each column's range
/// (implicit zeros included) onto [0, 1]; implicit zeros of a column whose
/// minimum is nonzero become stored entries. Constant columns map to 0.
LabeledDataset scale_features(const LabeledDataset& data, ScalingMode mode);

/// Maps {0,1} labels to {-1,+1}; accepts labels already in {-1,+1} and
/// rejects everything else with InvalidConfiguration.
LabeledDataset as_classification(const LabeledDataset& data);

}  // namespace adaagc
