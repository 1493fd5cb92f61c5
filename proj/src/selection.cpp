#include "lrc/selection.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>

namespace lrc {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct FittedCandidate {
  ModelSpec spec;
  FitResult fit;     // over the projected design (empty for null model)
  double loglik;     // normalised
  bool ok = true;
  std::string note;
};

FittedCandidate fit_candidate(const BinaryDesign& design,
                              const OutputVector& y, ModelSpec spec,
                              const FitConfig& fc) {
  FittedCandidate c;
  c.spec = std::move(spec);
  if (c.spec.param_count() == 0) {
    c.fit.theta = Vector();
    c.fit.converged = true;
    c.loglik = -std::log(2.0);
    c.fit.loglik = c.loglik;
    return c;
  }
  try {
    const BinaryDesign proj = project_design(design, c.spec);
    c.fit = fit_mle(proj, y, fc);
    c.loglik = c.fit.loglik;
  } catch (const std::exception& e) {
    c.ok = false;
    c.note = e.what();
    c.loglik = kNegInf;
  }
  return c;
}

// Entropy of the active columns; bias columns are constant and do not
// change the projected-design entropy, so they are left out.
double projected_entropy_bits(const BinaryDesign& design,
                              const ModelSpec& spec) {
  if (spec.active.empty()) return 0.0;
  ModelSpec weights_only{spec.active, false, std::nullopt};
  return entropy_bits(
      empirical_distribution(project_design(design, weights_only)));
}

std::vector<CriterionScore> score_candidates(
    const BinaryDesign& design,
    const std::vector<FittedCandidate>& candidates,
    const std::vector<Criterion>& criteria, const SearchConfig& config,
    std::vector<std::string>& warnings) {
  const double T = static_cast<double>(design.rows());
  const double H_N = entropy_bits(empirical_distribution(design));
  const bool want_heuristic =
      std::find(criteria.begin(), criteria.end(), Criterion::heuristic) !=
      criteria.end();
  if (want_heuristic && H_N <= 0.0)
    throw std::invalid_argument(
        "penalty_heuristic: H_N = 0 (all observations identical); use the "
        "exhaustive search with another criterion instead");

  std::vector<CriterionScore> scores;
  scores.reserve(candidates.size() * criteria.size());
  for (const auto& cand : candidates) {
    const int n = cand.spec.param_count();
    for (Criterion crit : criteria) {
      CriterionScore s;
      s.model = cand.spec;
      s.criterion = crit;
      s.valid = cand.ok;
      s.note = cand.note;
      s.loglik_term = cand.ok ? T * cand.loglik : kNegInf;
      if (cand.ok) {
        switch (crit) {
          case Criterion::bic:
            s.penalty = penalty_bic(n, design.rows());
            break;
          case Criterion::aic:
            s.penalty = penalty_aic(n);
            break;
          case Criterion::heuristic: {
            if (n == 0) {
              s.penalty = 0.0;  // null model scored by likelihood alone
            } else {
              const double H_n = projected_entropy_bits(design, cand.spec);
              if (H_n <= 0.0) {
                s.valid = false;
                s.note = "H_n = 0: active inputs never vary";
                warnings.push_back("heuristic: candidate with n=" +
                                   std::to_string(n) +
                                   " skipped, projected entropy is zero");
              } else {
                s.penalty = penalty_heuristic(n, design.rows(), H_n, H_N);
              }
            }
            break;
          }
          case Criterion::exact_posterior: {
            if (n == 0) {
              s.penalty = 0.0;
            } else {
              const auto dist = empirical_distribution(
                  project_design(design, cand.spec));
              const auto c = complexity_auto(dist, config.mc);
              if (c.value <= 0.0) {
                s.valid = false;
                s.note = "zero complexity: redundant parametrization";
              } else {
                s.penalty = penalty_bic(n, design.rows()) - c.log_value;
              }
            }
            break;
          }
          case Criterion::l1:
            throw std::invalid_argument(
                "l1 is not a scored criterion; use fit_l1_cv");
        }
      }
      s.total = s.valid ? s.loglik_term + s.penalty : kNegInf;
      scores.push_back(std::move(s));
    }
  }
  return scores;
}

SelectionReport report_from_scores(std::vector<CriterionScore> scores,
                                   const std::vector<Criterion>& criteria,
                                   std::vector<std::string> warnings) {
  SelectionReport rep;
  rep.scores = std::move(scores);
  rep.warnings = std::move(warnings);
  for (Criterion crit : criteria) {
    const CriterionScore* best = nullptr;
    for (const auto& s : rep.scores) {
      if (s.criterion != crit || !s.valid) continue;
      if (!best || s.total > best->total ||
          (s.total == best->total &&
           s.model.param_count() < best->model.param_count()))
        best = &s;
    }
    if (!best)
      throw std::runtime_error("no valid candidate for criterion " +
                               to_string(crit));
    rep.chosen.emplace_back(crit, best->model);
  }
  return rep;
}

}  // namespace

std::string to_string(Criterion c) {
  switch (c) {
    case Criterion::heuristic: return "heuristic";
    case Criterion::bic: return "bic";
    case Criterion::aic: return "aic";
    case Criterion::exact_posterior: return "exact";
    case Criterion::l1: return "l1";
  }
  return "unknown";
}

Criterion criterion_from_string(const std::string& name) {
  if (name == "heuristic") return Criterion::heuristic;
  if (name == "bic") return Criterion::bic;
  if (name == "aic") return Criterion::aic;
  if (name == "exact" || name == "exact_posterior")
    return Criterion::exact_posterior;
  if (name == "l1") return Criterion::l1;
  throw std::invalid_argument("unknown criterion: " + name);
}

const ModelSpec& SelectionReport::chosen_for(Criterion c) const {
  for (const auto& [crit, spec] : chosen)
    if (crit == c) return spec;
  throw std::out_of_range("criterion not present in report");
}

double penalty_heuristic(int n, double T, double H_n_bits, double H_N_bits) {
  if (n == 0) return 0.0;
  if (n < 0 || !(T >= 1.0))
    throw std::invalid_argument("penalty_heuristic: need n >= 0, T >= 1");
  if (!(H_N_bits > 0.0))
    throw std::invalid_argument(
        "penalty_heuristic: H_N = 0 (degenerate all-identical design); fall "
        "back to an exhaustive search");
  if (!(H_n_bits > 0.0))
    throw std::invalid_argument("penalty_heuristic: H_n must be positive");
  const double nn = n;
  return -0.5 * nn - 0.5 * nn * std::log(T * H_n_bits / (nn * H_N_bits)) +
         std::log(nn);
}

double penalty_bic(int n, double T) {
  if (n < 0 || !(T >= 1.0))
    throw std::invalid_argument("penalty_bic: need n >= 0, T >= 1");
  return -0.5 * n * std::log(T / (2.0 * kPi));
}

double penalty_aic(int n) {
  if (n < 0) throw std::invalid_argument("penalty_aic: need n >= 0");
  return -double(n);
}

CriterionScore score_exact_posterior(const BinaryDesign& design,
                                     const OutputVector& y,
                                     const ModelSpec& spec,
                                     const SearchConfig& config) {
  std::vector<std::string> warnings;
  const auto cand = fit_candidate(design, y, spec, config.fit);
  if (!cand.ok) throw std::runtime_error("fit failed: " + cand.note);
  auto scores = score_candidates(design, {cand},
                                 {Criterion::exact_posterior}, config,
                                 warnings);
  return scores.front();
}

SelectionReport search_decimation(const BinaryDesign& design,
                                  const OutputVector& y,
                                  const std::vector<Criterion>& criteria,
                                  const SearchConfig& config) {
  const int N = static_cast<int>(design.cols());
  std::vector<FittedCandidate> candidates;
  candidates.reserve(static_cast<size_t>(N) + 1);
  std::vector<int> active(static_cast<size_t>(N));
  std::iota(active.begin(), active.end(), 0);
  for (;;) {
    ModelSpec spec{active, config.include_bias, std::nullopt};
    candidates.push_back(fit_candidate(design, y, std::move(spec), config.fit));
    if (active.empty()) break;
    const auto& cand = candidates.back();
    size_t drop = 0;
    if (cand.ok) {
      // weights occupy the leading |active| components of theta
      double best = std::numeric_limits<double>::infinity();
      for (size_t i = 0; i < active.size(); ++i) {
        const double a = std::abs(cand.fit.theta(static_cast<Eigen::Index>(i)));
        if (a < best) {  // ties resolved toward the lowest index
          best = a;
          drop = i;
        }
      }
    }
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(drop));
  }
  std::vector<std::string> warnings;
  auto scores =
      score_candidates(design, candidates, criteria, config, warnings);
  return report_from_scores(std::move(scores), criteria, std::move(warnings));
}

SelectionReport search_forward(const BinaryDesign& design,
                               const OutputVector& y,
                               const std::vector<Criterion>& criteria,
                               const SearchConfig& config) {
  const int N = static_cast<int>(design.cols());
  std::vector<FittedCandidate> candidates;
  candidates.reserve(static_cast<size_t>(N) + 1);
  std::vector<int> active;
  std::set<int> remaining;
  for (int i = 0; i < N; ++i) remaining.insert(i);
  candidates.push_back(fit_candidate(
      design, y, ModelSpec{{}, config.include_bias, std::nullopt},
      config.fit));
  while (!remaining.empty()) {
    int best_input = -1;
    double best_ll = kNegInf;
    FittedCandidate best_cand;
    for (int i : remaining) {
      std::vector<int> trial = active;
      trial.push_back(i);
      std::sort(trial.begin(), trial.end());
      auto cand = fit_candidate(
          design, y, ModelSpec{trial, config.include_bias, std::nullopt},
          config.fit);
      const double ll = cand.ok ? cand.loglik : kNegInf;
      if (ll > best_ll) {
        best_ll = ll;
        best_input = i;
        best_cand = std::move(cand);
      }
    }
    if (best_input < 0) {
      // every extension failed; keep a flagged candidate and stop
      std::vector<int> trial = active;
      trial.push_back(*remaining.begin());
      candidates.push_back(fit_candidate(
          design, y, ModelSpec{trial, config.include_bias, std::nullopt},
          config.fit));
      break;
    }
    active.push_back(best_input);
    std::sort(active.begin(), active.end());
    remaining.erase(best_input);
    candidates.push_back(std::move(best_cand));
  }
  std::vector<std::string> warnings;
  auto scores =
      score_candidates(design, candidates, criteria, config, warnings);
  return report_from_scores(std::move(scores), criteria, std::move(warnings));
}

SelectionReport search_exhaustive(const BinaryDesign& design,
                                  const OutputVector& y,
                                  const std::vector<Criterion>& criteria,
                                  const SearchConfig& config, int max_inputs) {
  const int N = static_cast<int>(design.cols());
  if (N > max_inputs)
    throw std::invalid_argument("search_exhaustive: N = " + std::to_string(N) +
                                " exceeds the guard " +
                                std::to_string(max_inputs));
  std::vector<FittedCandidate> candidates;
  candidates.reserve(size_t(1) << N);
  for (std::uint32_t mask = 0; mask < (std::uint32_t(1) << N); ++mask) {
    std::vector<int> active;
    for (int i = 0; i < N; ++i)
      if (mask & (std::uint32_t(1) << i)) active.push_back(i);
    candidates.push_back(fit_candidate(
        design, y, ModelSpec{active, config.include_bias, std::nullopt},
        config.fit));
  }
  std::vector<std::string> warnings;
  auto scores =
      score_candidates(design, candidates, criteria, config, warnings);
  return report_from_scores(std::move(scores), criteria, std::move(warnings));
}

namespace {

// FISTA with fixed step 1/L on f(theta) = -loglik(theta) + lambda |theta|_1.
Vector l1_fit(const Matrix& X, const Vector& y, double lambda,
              const Vector& theta0, int max_iter, double tol) {
  const double T = static_cast<double>(X.rows());
  const Eigen::Index n = X.cols();
  const Vector mean_yx = X.transpose() * y / T;
  // Lipschitz constant of the gradient: largest eigenvalue of X^T X / T
  Eigen::SelfAdjointEigenSolver<Matrix> es(X.transpose() * X / T,
                                           Eigen::EigenvaluesOnly);
  const double L = std::max(es.eigenvalues().maxCoeff(), 1e-12);
  const double step = 1.0 / L;

  auto grad_negll = [&](const Vector& th) {
    const Vector tz = (X * th).array().tanh().matrix();
    return Vector(-mean_yx + X.transpose() * tz / T);
  };
  auto soft = [](double v, double k) {
    if (v > k) return v - k;
    if (v < -k) return v + k;
    return 0.0;
  };

  Vector theta = theta0, momentum = theta0;
  double t_accel = 1.0;
  for (int it = 0; it < max_iter; ++it) {
    const Vector g = grad_negll(momentum);
    Vector next(n);
    for (Eigen::Index i = 0; i < n; ++i)
      next(i) = soft(momentum(i) - step * g(i), step * lambda);
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t_accel * t_accel));
    momentum = next + ((t_accel - 1.0) / t_next) * (next - theta);
    const double change = (next - theta).lpNorm<Eigen::Infinity>();
    theta = std::move(next);
    t_accel = t_next;
    if (change <= tol) break;
  }
  return theta;
}

bool single_class(const Vector& y) {
  return std::abs(y.sum()) == static_cast<double>(y.size());
}

}  // namespace

SelectionReport fit_l1_cv(const BinaryDesign& design, const OutputVector& y,
                          const L1Config& config) {
  const Eigen::Index T = design.rows();
  const int N = static_cast<int>(design.cols());
  if (config.folds < 2 || T < config.folds)
    throw std::invalid_argument("fit_l1_cv: need T >= K >= 2");
  const Matrix& X = design.data();
  const Vector& yv = y.values();

  const double lambda_max =
      (X.transpose() * yv / double(T)).lpNorm<Eigen::Infinity>();
  std::vector<double> grid(static_cast<size_t>(config.grid_size));
  {
    const double llo = std::log(config.grid_lo * lambda_max);
    const double lhi = std::log(config.grid_hi * lambda_max);
    for (int i = 0; i < config.grid_size; ++i)
      grid[static_cast<size_t>(i)] =
          std::exp(lhi + (llo - lhi) * i / (config.grid_size - 1));
  }  // descending: warm starts from heavy shrinkage

  // fold of row t is t mod K: deterministic and balanced
  std::vector<std::vector<Eigen::Index>> fold_rows(
      static_cast<size_t>(config.folds));
  for (Eigen::Index t = 0; t < T; ++t)
    fold_rows[static_cast<size_t>(t % config.folds)].push_back(t);

  std::vector<std::string> warnings;
  std::vector<double> cv_mean(grid.size(), 0.0);
  std::vector<int> cv_count(grid.size(), 0);
  for (int k = 0; k < config.folds; ++k) {
    const auto& held = fold_rows[static_cast<size_t>(k)];
    std::vector<Eigen::Index> train;
    for (int j = 0; j < config.folds; ++j)
      if (j != k)
        train.insert(train.end(), fold_rows[static_cast<size_t>(j)].begin(),
                     fold_rows[static_cast<size_t>(j)].end());
    Matrix Xtr(static_cast<Eigen::Index>(train.size()), N);
    Vector ytr(static_cast<Eigen::Index>(train.size()));
    for (size_t r = 0; r < train.size(); ++r) {
      Xtr.row(static_cast<Eigen::Index>(r)) = X.row(train[r]);
      ytr(static_cast<Eigen::Index>(r)) = yv(train[r]);
    }
    Matrix Xte(static_cast<Eigen::Index>(held.size()), N);
    Vector yte(static_cast<Eigen::Index>(held.size()));
    for (size_t r = 0; r < held.size(); ++r) {
      Xte.row(static_cast<Eigen::Index>(r)) = X.row(held[r]);
      yte(static_cast<Eigen::Index>(r)) = yv(held[r]);
    }
    if (single_class(ytr) || single_class(yte)) {
      warnings.push_back("fold " + std::to_string(k) +
                         " skipped: single-class output");
      continue;
    }
    Vector theta = Vector::Zero(N);
    for (size_t gi = 0; gi < grid.size(); ++gi) {
      theta = l1_fit(Xtr, ytr, grid[gi], theta, config.max_iter, config.tol);
      // held-out normalised log-likelihood
      double ll = 0.0;
      const Vector z = Xte * theta;
      for (Eigen::Index t = 0; t < z.size(); ++t)
        ll += yte(t) * z(t) - log_2cosh(z(t));
      cv_mean[gi] += ll / double(z.size());
      ++cv_count[gi];
    }
  }
  size_t best_gi = 0;
  double best_cv = kNegInf;
  for (size_t gi = 0; gi < grid.size(); ++gi) {
    if (cv_count[gi] == 0) continue;
    const double m = cv_mean[gi] / cv_count[gi];
    if (m > best_cv) {
      best_cv = m;
      best_gi = gi;
    }
  }
  if (best_cv == kNegInf)
    throw std::runtime_error("fit_l1_cv: every fold was degenerate");

  SelectionReport rep;
  rep.warnings = std::move(warnings);
  const double T_d = static_cast<double>(T);
  Vector theta = Vector::Zero(N);
  for (size_t gi = 0; gi < grid.size(); ++gi) {
    theta = l1_fit(X, yv, grid[gi], theta, config.max_iter, config.tol);
    ModelSpec spec;
    for (int i = 0; i < N; ++i)
      if (std::abs(theta(i)) > config.support_tol) spec.active.push_back(i);
    CriterionScore s;
    s.model = spec;
    s.criterion = Criterion::l1;
    // candidates are compared by their cross-validated held-out likelihood
    s.loglik_term = cv_count[gi] > 0
                        ? T_d * (cv_mean[gi] / cv_count[gi])
                        : kNegInf;
    s.penalty = 0.0;
    s.total = s.loglik_term;
    s.valid = cv_count[gi] > 0;
    s.note = "lambda=" + std::to_string(grid[gi]);
    rep.scores.push_back(std::move(s));
    if (gi == best_gi) rep.chosen.emplace_back(Criterion::l1, spec);
  }
  return rep;
}

double reconstruction_error(const ModelSpec& chosen, const ModelSpec& truth,
                            int N) {
  std::set<int> c(chosen.active.begin(), chosen.active.end());
  std::set<int> t(truth.active.begin(), truth.active.end());
  int mismatches = 0;
  for (int i = 0; i < N; ++i) {
    const bool in_c = c.count(i) > 0;
    const bool in_t = t.count(i) > 0;
    if (in_c != in_t) ++mismatches;
  }
  return static_cast<double>(mismatches) / static_cast<double>(N);
}

}  // namespace lrc
