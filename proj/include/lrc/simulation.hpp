#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lrc/design.hpp"
#include "lrc/selection.hpp"

namespace lrc {

enum class IsingSampler { automatic, gibbs, exact };

/// Ising input ensemble p(x) proportional to
/// exp(-sum_{i<j} beta J x_i x_j - sum_i beta h x_i).
struct IsingInputConfig {
  int inputs = 0;
  double beta = 0.0;
  double coupling = 0.0;  // J for every i != j; 0 -> 1/inputs
  double field = 0.1;     // h
  int burn_in = 1000;     // sweeps
  int thinning = 10;      // sweeps between samples
  std::uint64_t seed = 0;
  IsingSampler sampler = IsingSampler::automatic;  // automatic: exact for n<=10

  double coupling_or_default() const {
    return coupling > 0.0 ? coupling : 1.0 / inputs;
  }
};

/// Gibbs single-site sampling of the Ising ensemble; for inputs <= 10 exact
/// enumeration sampling is used instead (no Markov chain error).
BinaryDesign sample_ising(const IsingInputConfig& config, long T);

/// Exact Ising probabilities over all 2^n configurations (n <= 20).
EmpiricalInputDistribution ising_distribution(int n, double beta,
                                              double coupling = 0.0,
                                              double field = 0.1);

struct GroundTruth {
  std::vector<int> active;
  Vector weights;  // length N, zero outside active
  double sparsity;
};

/// Planted model: a uniformly random subset of round((1-s)N) >= 1 inputs with
/// weights uniform on [-3/2,-1/2] U [1/2,3/2], all divided by sqrt(n).
GroundTruth sample_ground_truth(int N, double sparsity, std::uint64_t seed);

/// y = +1 with probability e^(theta.x) / (2 cosh(theta.x)) per row.
OutputVector generate_output(const BinaryDesign& design, const Vector& weights,
                             std::uint64_t seed);

enum class SearchKind { decimation, forward, exhaustive };

std::string to_string(SearchKind s);
SearchKind search_from_string(const std::string& name);

struct ExperimentConfig {
  int N = 20;
  std::vector<int> k_values{5, 50, 200};  // T = k N
  std::vector<double> beta_values{0.01, 0.75, 1.5};
  std::vector<double> sparsity_values{0.0, 0.2, 0.4, 0.6, 0.8};
  int realizations = 20;
  std::vector<Criterion> criteria{Criterion::aic, Criterion::bic,
                                  Criterion::heuristic, Criterion::l1};
  SearchKind search = SearchKind::decimation;
  int l1_max_k = 50;  // skip the l1 baseline for larger k (cost)
  std::uint64_t seed = 0;
  int threads = 1;
  IsingInputConfig ising;  // beta/inputs/seed filled per cell
};

struct ExperimentRow {
  double beta;
  int k;
  double sparsity;
  std::string criterion;
  int realization;
  double error;
  bool ok;
};

struct ExperimentSummaryRow {
  double beta;
  int k;
  double sparsity;
  std::string criterion;
  int count;
  double mean_error;
  double std_error;  // standard deviation over realizations
};

struct ExperimentResult {
  std::vector<ExperimentRow> rows;
  std::vector<ExperimentSummaryRow> summarize() const;
};

/// Reconstruction-error sweep over (beta, k, sparsity, criterion,
/// realization). Deterministic for a fixed config, whatever the thread count.
ExperimentResult run_experiment(const ExperimentConfig& config);

}  // namespace lrc
