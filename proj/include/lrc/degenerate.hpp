#pragma once

#include <cstdint>
#include <vector>

#include "lrc/complexity.hpp"
#include "lrc/design.hpp"
#include "lrc/likelihood.hpp"

namespace lrc {

/// Tied-weight model: one parameter theta on the categorical sum
/// X_n = sum_{i in subset} x_i, with a fixed threshold b.
struct DegenerateModel {
  std::vector<int> subset;
  double threshold = 0.0;  // b, fixed, not fitted
};

/// Distribution of the categorical sum X_n.
class CategoricalDistribution {
 public:
  CategoricalDistribution(std::vector<double> values, std::vector<double> freqs);

  /// Empirical distribution of row sums over the given columns.
  static CategoricalDistribution from_design(const BinaryDesign& design,
                                             const std::vector<int>& subset);

  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& freqs() const { return freqs_; }
  size_t size() const { return values_.size(); }

 private:
  std::vector<double> values_;
  std::vector<double> freqs_;
};

/// theta mean(y (X_n - b)) - mean(log 2cosh(theta (X_n - b))).
double degenerate_loglik(double theta, double b,
                         const BinaryDesign& subset_design,
                         const OutputVector& y);

/// Scalar Fisher information sum nu (X-b)^2 sech^2(theta (X-b)).
double degenerate_fisher(double theta, double b,
                         const CategoricalDistribution& dist);

/// e^C = integral of sqrt(F(theta)) by 1-D quadrature; exactly pi when a
/// single value X != b is observed, 0 when every observed X equals b.
ComplexityEstimate degenerate_complexity(const CategoricalDistribution& dist,
                                         double b, double rel_tol = 1e-6);

/// Triangular-inequality bound pi sum sqrt(nu(X_n)).
double degenerate_upper_bound(const CategoricalDistribution& dist);

/// Bound for nu uniform over the n+1 sum values: pi sqrt(n+1).
double degenerate_upper_bound_uniform(int n);

/// Bound for uniform configurations (binomial sums):
/// pi 2^(-n/2) sum_k sqrt(C(n, k)).
double degenerate_upper_bound_binomial(int n);

/// Quartic approximation pi (2 pi n + pi/sqrt(2))^(1/4) of the binomial bound.
double degenerate_upper_bound_binomial_fit(int n);

/// nu(X) = 1/(n+1) on {-n, -n+2, ..., n}.
CategoricalDistribution uniform_sum_distribution(int n);

/// nu(X) = C(n, (n+X)/2) 2^-n on {-n, -n+2, ..., n}.
CategoricalDistribution binomial_sum_distribution(int n);

struct DegenerateFit {
  double theta = 0.0;
  double loglik = 0.0;
  bool separated = false;
  bool converged = false;
};

/// 1-D damped Newton for the tied-weight model.
DegenerateFit fit_degenerate(double b, const BinaryDesign& subset_design,
                             const OutputVector& y,
                             const FitConfig& config = {});

struct KeyModelScore {
  std::uint32_t subset_mask = 0;  // bit i set -> key i in the model
  int subset_size = 0;
  double theta = 0.0;
  double loglik = 0.0;         // normalised
  double complexity_log = 0.0;  // C; -inf for flat models
  double score = 0.0;           // T loglik - (1/2) log(T/2pi) - C
  bool exact_fit = false;       // loglik >= -1e-6
};

struct KeysConfig {
  double threshold = 2.0;  // b on the X scale, shared by every subset
  int max_keys = 20;
  int threads = 1;
  FitConfig fit;
};

/// Scores every non-empty key subset (plus the null model, mask 0) as a
/// 1-parameter tied-weight model. Sorted by decreasing score, then mask.
std::vector<KeyModelScore> enumerate_key_models(const BinaryDesign& keys,
                                                const OutputVector& outcome,
                                                const KeysConfig& config = {});

struct DeltaRankResult {
  std::vector<int> per_model;
  double mean = 0.0;
};

/// For a table sorted by non-decreasing likelihood: the smallest window
/// half-width k >= 1 at which the likelihood spread T (l_{i+k} - l_{i-k})
/// reaches the complexity spread within the window (edges clamped). A table
/// with no likelihood and no complexity variation at all yields 0 everywhere.
DeltaRankResult delta_rank(const std::vector<double>& loglik,
                           const std::vector<double>& complexity_log,
                           double T);

}  // namespace lrc
