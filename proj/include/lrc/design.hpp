#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

namespace lrc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// T x N matrix of +-1 observations; rows are observations, columns inputs.
/// Immutable after construction.
class BinaryDesign {
 public:
  explicit BinaryDesign(Matrix data);

  Eigen::Index rows() const { return data_.rows(); }
  Eigen::Index cols() const { return data_.cols(); }
  const Matrix& data() const { return data_; }

 private:
  Matrix data_;
};

/// Length-T vector of +-1 outputs paired with a BinaryDesign.
class OutputVector {
 public:
  explicit OutputVector(Vector y);

  Eigen::Index size() const { return y_.size(); }
  const Vector& values() const { return y_; }

 private:
  Vector y_;
};

/// A candidate model: subset of active input columns, optional bias weight
/// (a weight on an implicit constant +1 input), optional parameter box.
struct ModelSpec {
  std::vector<int> active;
  bool has_bias = false;
  std::optional<double> box;  // |theta_k| <= box when set

  int param_count() const {
    return static_cast<int>(active.size()) + (has_bias ? 1 : 0);
  }
};

/// Distinct observed configurations with their empirical frequencies nu.
class EmpiricalInputDistribution {
 public:
  // support: M x n matrix of distinct +-1 configurations, freqs sum to 1
  EmpiricalInputDistribution(Matrix support, Vector freqs);

  Eigen::Index size() const { return support_.rows(); }
  int dim() const { return static_cast<int>(support_.cols()); }
  const Matrix& support() const { return support_; }
  const Vector& freqs() const { return freqs_; }

 private:
  Matrix support_;
  Vector freqs_;
};

BinaryDesign project_design(const BinaryDesign& design, const ModelSpec& spec);

EmpiricalInputDistribution empirical_distribution(const BinaryDesign& design);

/// -sum nu log2 nu, in bits.
double entropy_bits(const EmpiricalInputDistribution& dist);

/// Numerical rank of the matrix of distinct observed configurations
/// (SVD threshold max_dim * eps * sigma_max).
int design_rank(const BinaryDesign& design);
int support_rank(const EmpiricalInputDistribution& dist);

/// nu = 2^-n over all configurations.
EmpiricalInputDistribution uniform_distribution(int n);

/// nu = 1/d over the given configurations (rows must be distinct).
EmpiricalInputDistribution uniform_on_configs(Matrix support);

/// All 2^n configurations as rows, in binary counting order with the
/// lowest-index input toggling fastest and bit 0 -> -1.
Matrix all_configurations(int n);

struct Dataset {
  BinaryDesign design;
  std::optional<OutputVector> output;
  std::vector<std::string> input_names;
};

/// CSV ingestion: one observation per row, header required, entries in
/// {-1,+1} or {0,1} (auto-detected, 0 -> -1). The column whose header equals
/// output_column (default "y") becomes the output; every other column is an
/// input.
Dataset load_csv(const std::string& path,
                 const std::string& output_column = "y");

}  // namespace lrc
