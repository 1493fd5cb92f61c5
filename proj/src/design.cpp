#include "lrc/design.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace lrc {

namespace {

void check_pm_one(const Matrix& m, const char* what) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double v = m(i, j);
      if (v != 1.0 && v != -1.0)
        throw std::invalid_argument(std::string(what) +
                                    ": entries must be exactly -1 or +1");
    }
}

// Rows are exact +-1 values, so a sign-bit string is a faithful key.
std::string row_key(const Matrix& m, Eigen::Index r) {
  std::string key(static_cast<size_t>(m.cols()), '\0');
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    key[static_cast<size_t>(j)] = m(r, j) > 0 ? '+' : '-';
  return key;
}

int matrix_rank(const Matrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& s = svd.singularValues();
  const double tol = std::max(m.rows(), m.cols()) *
                     std::numeric_limits<double>::epsilon() * s(0);
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > tol) ++rank;
  return rank;
}

}  // namespace

BinaryDesign::BinaryDesign(Matrix data) : data_(std::move(data)) {
  if (data_.rows() < 1 || data_.cols() < 1)
    throw std::invalid_argument("BinaryDesign: need T >= 1 and N >= 1");
  check_pm_one(data_, "BinaryDesign");
}

OutputVector::OutputVector(Vector y) : y_(std::move(y)) {
  for (Eigen::Index i = 0; i < y_.size(); ++i)
    if (y_(i) != 1.0 && y_(i) != -1.0)
      throw std::invalid_argument("OutputVector: entries must be -1 or +1");
}

EmpiricalInputDistribution::EmpiricalInputDistribution(Matrix support,
                                                       Vector freqs)
    : support_(std::move(support)), freqs_(std::move(freqs)) {
  if (support_.rows() != freqs_.size())
    throw std::invalid_argument("EmpiricalInputDistribution: size mismatch");
  check_pm_one(support_, "EmpiricalInputDistribution");
  double total = 0.0;
  for (Eigen::Index i = 0; i < freqs_.size(); ++i) {
    if (!(freqs_(i) > 0.0))
      throw std::invalid_argument(
          "EmpiricalInputDistribution: frequencies must be positive");
    total += freqs_(i);
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw std::invalid_argument(
        "EmpiricalInputDistribution: frequencies must sum to 1");
  std::unordered_map<std::string, int> seen;
  for (Eigen::Index i = 0; i < support_.rows(); ++i)
    if (!seen.emplace(row_key(support_, i), 1).second)
      throw std::invalid_argument(
          "EmpiricalInputDistribution: duplicate configuration");
}

BinaryDesign project_design(const BinaryDesign& design,
                            const ModelSpec& spec) {
  const Eigen::Index T = design.rows();
  const Eigen::Index n = static_cast<Eigen::Index>(spec.active.size()) +
                         (spec.has_bias ? 1 : 0);
  if (n == 0)
    throw std::invalid_argument("project_design: empty model has no columns");
  Matrix out(T, n);
  Eigen::Index c = 0;
  for (int idx : spec.active) {
    if (idx < 0 || idx >= design.cols())
      throw std::out_of_range("project_design: active index " +
                              std::to_string(idx) + " out of range [0, " +
                              std::to_string(design.cols()) + ")");
    out.col(c++) = design.data().col(idx);
  }
  if (spec.has_bias) out.col(c) = Vector::Ones(T);
  return BinaryDesign(std::move(out));
}

EmpiricalInputDistribution empirical_distribution(const BinaryDesign& design) {
  const Eigen::Index T = design.rows();
  std::unordered_map<std::string, int> counts;
  std::vector<Eigen::Index> first_row;
  std::vector<std::string> order;
  counts.reserve(static_cast<size_t>(T));
  std::unordered_map<std::string, size_t> index;
  for (Eigen::Index t = 0; t < T; ++t) {
    std::string key = row_key(design.data(), t);
    auto [it, inserted] = index.emplace(std::move(key), first_row.size());
    if (inserted) first_row.push_back(t);
    (void)it;
  }
  std::vector<int> tally(first_row.size(), 0);
  for (Eigen::Index t = 0; t < T; ++t)
    ++tally[index[row_key(design.data(), t)]];
  Matrix support(static_cast<Eigen::Index>(first_row.size()), design.cols());
  Vector freqs(static_cast<Eigen::Index>(first_row.size()));
  for (size_t i = 0; i < first_row.size(); ++i) {
    support.row(static_cast<Eigen::Index>(i)) =
        design.data().row(first_row[i]);
    freqs(static_cast<Eigen::Index>(i)) =
        static_cast<double>(tally[i]) / static_cast<double>(T);
  }
  return EmpiricalInputDistribution(std::move(support), std::move(freqs));
}

double entropy_bits(const EmpiricalInputDistribution& dist) {
  double h = 0.0;
  for (Eigen::Index i = 0; i < dist.size(); ++i) {
    const double nu = dist.freqs()(i);
    h -= nu * std::log2(nu);
  }
  return std::max(h, 0.0);
}

int support_rank(const EmpiricalInputDistribution& dist) {
  return matrix_rank(dist.support());
}

int design_rank(const BinaryDesign& design) {
  return support_rank(empirical_distribution(design));
}

EmpiricalInputDistribution uniform_distribution(int n) {
  if (n < 1) throw std::invalid_argument("uniform_distribution: n >= 1");
  Matrix support = all_configurations(n);
  Vector freqs = Vector::Constant(support.rows(), std::pow(2.0, -n));
  return EmpiricalInputDistribution(std::move(support), std::move(freqs));
}

EmpiricalInputDistribution uniform_on_configs(Matrix support) {
  const Eigen::Index d = support.rows();
  Vector freqs = Vector::Constant(d, 1.0 / static_cast<double>(d));
  return EmpiricalInputDistribution(std::move(support), std::move(freqs));
}

Matrix all_configurations(int n) {
  if (n < 1 || n > 30)
    throw std::invalid_argument("all_configurations: n out of range");
  const Eigen::Index M = Eigen::Index(1) << n;
  Matrix X(M, n);
  for (Eigen::Index m = 0; m < M; ++m)
    for (int i = 0; i < n; ++i)
      X(m, i) = ((m >> i) & 1) ? 1.0 : -1.0;
  return X;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) {
    // trim whitespace and CR
    size_t b = field.find_first_not_of(" \t\r");
    size_t e = field.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string()
                                         : field.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

Dataset load_csv(const std::string& path, const std::string& output_column) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open CSV file: " + path);
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("empty CSV file: " + path);
  const auto header = split_csv_line(line);
  if (header.empty()) throw std::runtime_error("missing CSV header: " + path);
  int y_col = -1;
  std::vector<std::string> input_names;
  for (size_t j = 0; j < header.size(); ++j) {
    if (header[j] == output_column)
      y_col = static_cast<int>(j);
    else
      input_names.push_back(header[j]);
  }
  std::vector<std::vector<double>> rows;
  bool saw_zero = false, saw_minus = false;
  size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r,") == std::string::npos) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size())
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected " + std::to_string(header.size()) +
                               " fields, got " +
                               std::to_string(fields.size()));
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto& f : fields) {
      size_t pos = 0;
      double v = 0;
      try {
        v = std::stod(f, &pos);
      } catch (const std::exception&) {
        throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                 ": not a number: '" + f + "'");
      }
      if (pos != f.size() || (v != 0.0 && v != 1.0 && v != -1.0))
        throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                 ": values must be -1, 0 or 1, got '" + f +
                                 "'");
      if (v == 0.0) saw_zero = true;
      if (v == -1.0) saw_minus = true;
      row.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("CSV has no data rows: " + path);
  if (saw_zero && saw_minus)
    throw std::runtime_error(path + ": mixes 0/1 and -1/+1 encodings");
  const double zero_maps_to = saw_zero ? -1.0 : 0.0;
  const Eigen::Index T = static_cast<Eigen::Index>(rows.size());
  const Eigen::Index N = static_cast<Eigen::Index>(input_names.size());
  if (N == 0) throw std::runtime_error(path + ": no input columns");
  Matrix X(T, N);
  Vector y(T);
  for (Eigen::Index t = 0; t < T; ++t) {
    Eigen::Index c = 0;
    for (size_t j = 0; j < rows[static_cast<size_t>(t)].size(); ++j) {
      double v = rows[static_cast<size_t>(t)][j];
      if (v == 0.0) v = zero_maps_to;
      if (static_cast<int>(j) == y_col)
        y(t) = v;
      else
        X(t, c++) = v;
    }
  }
  Dataset ds{BinaryDesign(std::move(X)),
             y_col >= 0 ? std::optional<OutputVector>(OutputVector(y))
                        : std::nullopt,
             input_names};
  return ds;
}

}  // namespace lrc
