#include "adaagc/data.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <vector>

namespace adaagc {

ParseError::ParseError(std::size_t line, const std::string& what)
    : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

namespace {

bool parse_double(std::string_view tok, double& out) {
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  if (tok.empty()) return false;
  const auto* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

bool parse_index(std::string_view tok, long long& out) {
  const auto* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, out);
  return !tok.empty() && ec == std::errc() && ptr == end;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
      ++i;
    std::size_t j = i;
    while (j < line.size() &&
           !std::isspace(static_cast<unsigned char>(line[j])))
      ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

void append_shortest(std::string& out, double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, ptr);
}

}  // namespace

LabeledDataset parse_libsvm(std::istream& in, Index min_dimension) {
  std::vector<Eigen::Triplet<double>> entries;
  std::vector<double> labels;
  Index max_index = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view(line);
    if (auto hash = view.find('#'); hash != std::string_view::npos) {
      view = view.substr(0, hash);
    }
    const auto tokens = split_ws(view);
    if (tokens.empty()) continue;

    double label = 0.0;
    if (!parse_double(tokens[0], label)) {
      throw ParseError(lineno, "label '" + std::string(tokens[0]) +
                                   "' is not a number");
    }
    const auto row = static_cast<Index>(labels.size());
    long long previous = 0;
    for (std::size_t t = 1; t < tokens.size(); ++t) {
      const auto tok = tokens[t];
      const auto colon = tok.find(':');
      if (colon == std::string_view::npos) {
        throw ParseError(lineno, "token '" + std::string(tok) +
                                     "' is not of the form index:value");
      }
      long long idx = 0;
      double val = 0.0;
      if (!parse_index(tok.substr(0, colon), idx) || idx < 1) {
        throw ParseError(lineno, "bad feature index in '" + std::string(tok) +
                                     "'");
      }
      if (!parse_double(tok.substr(colon + 1), val)) {
        throw ParseError(lineno, "bad feature value in '" + std::string(tok) +
                                     "'");
      }
      if (idx <= previous) {
        throw ParseError(lineno, "feature indices must be strictly increasing");
      }
      previous = idx;
      entries.emplace_back(row, static_cast<Index>(idx - 1), val);
      max_index = std::max<Index>(max_index, static_cast<Index>(idx));
    }
    labels.push_back(label);
  }

  LabeledDataset data;
  const Index d = std::max(max_index, min_dimension);
  data.rows.resize(static_cast<Index>(labels.size()), d);
  data.rows.setFromTriplets(entries.begin(), entries.end());
  data.rows.makeCompressed();
  data.labels = Eigen::Map<const Vector>(labels.data(),
                                         static_cast<Index>(labels.size()));
  return data;
}

LabeledDataset parse_libsvm(std::string_view text, Index min_dimension) {
  std::istringstream in{std::string(text)};
  return parse_libsvm(in, min_dimension);
}

LabeledDataset load_libsvm(const std::filesystem::path& path,
                           Index min_dimension) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open dataset '" + path.string() + "'");
  return parse_libsvm(in, min_dimension);
}

void write_libsvm(std::ostream& out, const LabeledDataset& data) {
  std::string line;
  for (Index i = 0; i < data.n(); ++i) {
    line.clear();
    append_shortest(line, data.labels[i]);
    for (SparseRows::InnerIterator it(data.rows, i); it; ++it) {
      line += ' ';
      line += std::to_string(it.col() + 1);
      line += ':';
      append_shortest(line, it.value());
    }
    line += '\n';
    out << line;
  }
}

ScalingMode parse_scaling_mode(std::string_view name) {
  if (name == "none") return ScalingMode::none;
  if (name == "unit_row") return ScalingMode::unit_row;
  if (name == "minmax_column") return ScalingMode::minmax_column;
  throw InvalidConfiguration("unknown scaling mode '" + std::string(name) +
                             "'");
}

LabeledDataset scale_features(const LabeledDataset& data, ScalingMode mode) {
  LabeledDataset out = data;
  switch (mode) {
    case ScalingMode::none:
      break;
    case ScalingMode::unit_row:
      for (Index i = 0; i < out.n(); ++i) {
        const double norm = out.rows.row(i).norm();
        if (norm > 0.0) out.rows.row(i) /= norm;
      }
      break;
    case ScalingMode::minmax_column: {
      const Index n = data.n();
      const Index d = data.d();
      Vector lo = Vector::Constant(d, std::numeric_limits<double>::infinity());
      Vector hi = -lo;
      Eigen::VectorXi stored = Eigen::VectorXi::Zero(d);
      for (Index i = 0; i < n; ++i) {
        for (SparseRows::InnerIterator it(data.rows, i); it; ++it) {
          lo[it.col()] = std::min(lo[it.col()], it.value());
          hi[it.col()] = std::max(hi[it.col()], it.value());
          ++stored[it.col()];
        }
      }
      for (Index j = 0; j < d; ++j) {
        if (stored[j] < n) {  // the column has implicit zeros
          lo[j] = std::min(lo[j], 0.0);
          hi[j] = std::max(hi[j], 0.0);
        }
      }
      auto scaled = [&](Index j, double v) {
        const double range = hi[j] - lo[j];
        return range > 0.0 ? (v - lo[j]) / range : 0.0;
      };
      std::vector<Eigen::Triplet<double>> entries;
      for (Index i = 0; i < n; ++i) {
        Index next_col = 0;
        auto fill_implicit = [&](Index upto) {
          for (; next_col < upto; ++next_col) {
            const double v = scaled(next_col, 0.0);
            if (v != 0.0) entries.emplace_back(i, next_col, v);
          }
        };
        for (SparseRows::InnerIterator it(data.rows, i); it; ++it) {
          fill_implicit(it.col());
          entries.emplace_back(i, it.col(), scaled(it.col(), it.value()));
          next_col = it.col() + 1;
        }
        fill_implicit(d);
      }
      out.rows.setZero();
      out.rows.setFromTriplets(entries.begin(), entries.end());
      out.rows.makeCompressed();
      break;
    }
  }
  return out;
}

LabeledDataset as_classification(const LabeledDataset& data) {
  bool has_zero = false;
  bool has_minus = false;
  for (Index i = 0; i < data.labels.size(); ++i) {
    const double b = data.labels[i];
    if (b == 0.0) {
      has_zero = true;
    } else if (b == -1.0) {
      has_minus = true;
    } else if (b != 1.0) {
      throw InvalidConfiguration("classification labels must be in {-1,+1} "
                                 "or {0,1}");
    }
  }
  if (has_zero && has_minus) {
    throw InvalidConfiguration("labels mix 0 and -1");
  }
  LabeledDataset out = data;
  if (has_zero) {
    out.labels = data.labels.unaryExpr(
        [](double b) { return b == 0.0 ? -1.0 : 1.0; });
  }
  return out;
}

}  // namespace adaagc
