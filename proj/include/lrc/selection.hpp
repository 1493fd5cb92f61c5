#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lrc/complexity.hpp"
#include "lrc/design.hpp"
#include "lrc/likelihood.hpp"

namespace lrc {

enum class Criterion { heuristic, bic, aic, exact_posterior, l1 };

std::string to_string(Criterion c);
Criterion criterion_from_string(const std::string& name);

struct CriterionScore {
  ModelSpec model;
  double loglik_term = 0.0;  // T * loglik(theta*)
  double penalty = 0.0;      // log r
  double total = 0.0;        // loglik_term + penalty
  Criterion criterion = Criterion::bic;
  bool valid = true;         // false when the fit or penalty failed
  std::string note;
};

struct SelectionReport {
  std::vector<CriterionScore> scores;
  std::vector<std::pair<Criterion, ModelSpec>> chosen;
  std::optional<ModelSpec> truth;
  std::map<Criterion, double> error;  // reconstruction error vs truth
  std::vector<std::string> warnings;

  const ModelSpec& chosen_for(Criterion c) const;
};

/// Entropy-aware penalty log r = -n/2 - (n/2) log(T H_n / (n H_N)) + log n.
/// Entropies are in bits; the logarithms here are natural.
double penalty_heuristic(int n, double T, double H_n_bits, double H_N_bits);

/// BIC term of the posterior expansion: -(n/2) log(T / 2 pi).
double penalty_bic(int n, double T);

/// AIC penalty in the same score convention: -n.
double penalty_aic(int n);

struct SearchConfig {
  bool include_bias = false;  // add a bias parameter to every candidate
  FitConfig fit;
  MonteCarloConfig mc;  // used by exact_posterior when no closed form applies
};

/// T ell(theta*) - (n/2) log(T/2pi) - C, with C from the complexity module.
CriterionScore score_exact_posterior(const BinaryDesign& design,
                                     const OutputVector& y,
                                     const ModelSpec& spec,
                                     const SearchConfig& config = {});

/// Backward search: start from the full model, repeatedly drop the active
/// weight of smallest |theta*|. Produces N+1 nested candidates.
SelectionReport search_decimation(const BinaryDesign& design,
                                  const OutputVector& y,
                                  const std::vector<Criterion>& criteria,
                                  const SearchConfig& config = {});

/// Forward search: start from the null model, at each step add the input
/// giving the biggest likelihood jump. Produces N+1 nested candidates.
SelectionReport search_forward(const BinaryDesign& design,
                               const OutputVector& y,
                               const std::vector<Criterion>& criteria,
                               const SearchConfig& config = {});

/// Exact argmax over all 2^N subsets; N is guarded by max_inputs.
SelectionReport search_exhaustive(const BinaryDesign& design,
                                  const OutputVector& y,
                                  const std::vector<Criterion>& criteria,
                                  const SearchConfig& config = {},
                                  int max_inputs = 15);

struct L1Config {
  int folds = 5;
  int grid_size = 30;
  double grid_lo = 1e-4;  // multiples of lambda_max
  double grid_hi = 10.0;
  double support_tol = 1e-6;
  int max_iter = 5000;
  double tol = 1e-8;
};

/// Proximal-gradient l1-regularized fit with K-fold cross-validated lambda.
SelectionReport fit_l1_cv(const BinaryDesign& design, const OutputVector& y,
                          const L1Config& config = {});

/// (false positives + false negatives) / N over the active sets.
double reconstruction_error(const ModelSpec& chosen, const ModelSpec& truth,
                            int N);

}  // namespace lrc
