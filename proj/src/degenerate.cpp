#include "lrc/degenerate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "lrc/parallel.hpp"
#include "lrc/quadrature.hpp"

namespace lrc {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::vector<double> row_sums(const BinaryDesign& design,
                             const std::vector<int>& subset) {
  std::vector<double> sums(static_cast<size_t>(design.rows()), 0.0);
  for (int col : subset) {
    if (col < 0 || col >= design.cols())
      throw std::out_of_range("subset index out of range");
    for (Eigen::Index t = 0; t < design.rows(); ++t)
      sums[static_cast<size_t>(t)] += design.data()(t, col);
  }
  return sums;
}

}  // namespace

CategoricalDistribution::CategoricalDistribution(std::vector<double> values,
                                                 std::vector<double> freqs)
    : values_(std::move(values)), freqs_(std::move(freqs)) {
  if (values_.size() != freqs_.size() || values_.empty())
    throw std::invalid_argument("CategoricalDistribution: size mismatch");
  double total = 0.0;
  for (double f : freqs_) {
    if (!(f > 0.0))
      throw std::invalid_argument(
          "CategoricalDistribution: frequencies must be positive");
    total += f;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw std::invalid_argument(
        "CategoricalDistribution: frequencies must sum to 1");
  for (size_t i = 1; i < values_.size(); ++i)
    if (values_[i] <= values_[i - 1])
      throw std::invalid_argument(
          "CategoricalDistribution: values must be strictly increasing");
}

CategoricalDistribution CategoricalDistribution::from_design(
    const BinaryDesign& design, const std::vector<int>& subset) {
  const auto sums = row_sums(design, subset);
  std::map<double, long> counts;
  for (double s : sums) ++counts[s];
  std::vector<double> values, freqs;
  values.reserve(counts.size());
  freqs.reserve(counts.size());
  const double T = static_cast<double>(sums.size());
  for (const auto& [v, c] : counts) {
    values.push_back(v);
    freqs.push_back(static_cast<double>(c) / T);
  }
  return CategoricalDistribution(std::move(values), std::move(freqs));
}

double degenerate_loglik(double theta, double b,
                         const BinaryDesign& subset_design,
                         const OutputVector& y) {
  if (y.size() != subset_design.rows())
    throw std::invalid_argument("degenerate_loglik: length mismatch");
  std::vector<int> all(static_cast<size_t>(subset_design.cols()));
  for (size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
  const auto sums = row_sums(subset_design, all);
  const double T = static_cast<double>(sums.size());
  double ll = 0.0;
  for (size_t t = 0; t < sums.size(); ++t) {
    const double u = sums[t] - b;
    ll += theta * y.values()(static_cast<Eigen::Index>(t)) * u -
          log_2cosh(theta * u);
  }
  return ll / T;
}

double degenerate_fisher(double theta, double b,
                         const CategoricalDistribution& dist) {
  double F = 0.0;
  for (size_t i = 0; i < dist.size(); ++i) {
    const double u = dist.values()[i] - b;
    F += dist.freqs()[i] * u * u * sech2(theta * u);
  }
  return F;
}

ComplexityEstimate degenerate_complexity(const CategoricalDistribution& dist,
                                         double b, double rel_tol) {
  size_t off_threshold = 0;
  for (double v : dist.values())
    if (v != b) ++off_threshold;
  if (off_threshold == 0)
    return ComplexityEstimate::exact(0.0, ComplexityMethod::closed_form);
  if (dist.size() == 1)
    return ComplexityEstimate::exact(kPi, ComplexityMethod::closed_form);
  const double value = integrate_real_line(
      [&](double theta) { return std::sqrt(degenerate_fisher(theta, b, dist)); },
      rel_tol, 64, 16384);
  return ComplexityEstimate::exact(value, ComplexityMethod::quadrature);
}

double degenerate_upper_bound(const CategoricalDistribution& dist) {
  double s = 0.0;
  for (double f : dist.freqs()) s += std::sqrt(f);
  return kPi * s;
}

double degenerate_upper_bound_uniform(int n) {
  if (n < 1) throw std::invalid_argument("n >= 1 required");
  return kPi * std::sqrt(static_cast<double>(n + 1));
}

double degenerate_upper_bound_binomial(int n) {
  if (n < 1) throw std::invalid_argument("n >= 1 required");
  double sum = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double log_choose = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                              std::lgamma(n - k + 1.0);
    sum += std::exp(0.5 * (log_choose - n * std::log(2.0)));
  }
  return kPi * sum;
}

double degenerate_upper_bound_binomial_fit(int n) {
  if (n < 1) throw std::invalid_argument("n >= 1 required");
  return kPi * std::pow(2.0 * kPi * n + kPi / std::sqrt(2.0), 0.25);
}

CategoricalDistribution uniform_sum_distribution(int n) {
  if (n < 1) throw std::invalid_argument("n >= 1 required");
  std::vector<double> values, freqs;
  for (int x = -n; x <= n; x += 2) {
    values.push_back(x);
    freqs.push_back(1.0 / (n + 1));
  }
  // absorb rounding in the last entry so frequencies sum to 1 exactly
  double total = 0.0;
  for (size_t i = 0; i + 1 < freqs.size(); ++i) total += freqs[i];
  freqs.back() = 1.0 - total;
  return CategoricalDistribution(std::move(values), std::move(freqs));
}

CategoricalDistribution binomial_sum_distribution(int n) {
  if (n < 1) throw std::invalid_argument("n >= 1 required");
  std::vector<double> values, freqs;
  for (int k = 0; k <= n; ++k) {
    const double log_choose = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                              std::lgamma(n - k + 1.0);
    values.push_back(2 * k - n);
    freqs.push_back(std::exp(log_choose - n * std::log(2.0)));
  }
  double total = 0.0;
  for (double f : freqs) total += f;
  for (double& f : freqs) f /= total;
  return CategoricalDistribution(std::move(values), std::move(freqs));
}

DegenerateFit fit_degenerate(double b, const BinaryDesign& subset_design,
                             const OutputVector& y, const FitConfig& config) {
  std::vector<int> all(static_cast<size_t>(subset_design.cols()));
  for (size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
  const auto sums = row_sums(subset_design, all);
  const double T = static_cast<double>(sums.size());

  // sufficient statistics: mean of y (X - b) and the distribution of X - b
  double a = 0.0;
  std::map<double, long> counts;
  for (size_t t = 0; t < sums.size(); ++t) {
    const double u = sums[t] - b;
    a += y.values()(static_cast<Eigen::Index>(t)) * u;
    ++counts[u];
  }
  a /= T;
  std::vector<double> us, nus;
  for (const auto& [u, c] : counts) {
    us.push_back(u);
    nus.push_back(static_cast<double>(c) / T);
  }

  auto ll = [&](double th) {
    double v = th * a;
    for (size_t i = 0; i < us.size(); ++i)
      v -= nus[i] * log_2cosh(th * us[i]);
    return v;
  };
  auto grad = [&](double th) {
    double g = a;
    for (size_t i = 0; i < us.size(); ++i)
      g -= nus[i] * us[i] * std::tanh(th * us[i]);
    return g;
  };
  auto fisher = [&](double th) {
    double F = 0.0;
    for (size_t i = 0; i < us.size(); ++i)
      F += nus[i] * us[i] * us[i] * sech2(th * us[i]);
    return F;
  };

  DegenerateFit fit;
  double cur = ll(fit.theta);
  for (int it = 0; it < config.max_iter; ++it) {
    const double g = grad(fit.theta);
    if (std::abs(g) <= config.grad_tol) {
      fit.converged = true;
      break;
    }
    const double F = fisher(fit.theta);
    double step = F > 0.0 ? g / F : (g > 0.0 ? 1.0 : -1.0);
    double lambda = 1.0;
    double cand = fit.theta + step;
    double cand_ll = ll(cand);
    for (int h = 0; h < 60 && !(cand_ll >= cur - 1e-14); ++h) {
      lambda *= 0.5;
      cand = fit.theta + lambda * step;
      cand_ll = ll(cand);
    }
    fit.theta = cand;
    cur = cand_ll;
    if (std::abs(fit.theta) > config.param_cap) {
      fit.theta = std::clamp(fit.theta, -config.param_cap, config.param_cap);
      cur = ll(fit.theta);
      fit.separated = true;
      break;
    }
  }
  fit.loglik = cur;
  return fit;
}

std::vector<KeyModelScore> enumerate_key_models(const BinaryDesign& keys,
                                                const OutputVector& outcome,
                                                const KeysConfig& config) {
  const int K = static_cast<int>(keys.cols());
  if (K > config.max_keys)
    throw std::invalid_argument("enumerate_key_models: " + std::to_string(K) +
                                " keys exceed the guard " +
                                std::to_string(config.max_keys));
  if (outcome.size() != keys.rows())
    throw std::invalid_argument("enumerate_key_models: length mismatch");
  const double T = static_cast<double>(keys.rows());
  const double bic_term = 0.5 * std::log(T / (2.0 * kPi));

  const std::uint32_t total = std::uint32_t(1) << K;
  std::vector<KeyModelScore> table(total);

  parallel_for(total, config.threads, [&](std::int64_t m) {
    const auto mask = static_cast<std::uint32_t>(m);
    KeyModelScore& row = table[static_cast<size_t>(m)];
    row.subset_mask = mask;
    if (mask == 0) {
      row.subset_size = 0;
      row.loglik = -std::log(2.0);
      row.complexity_log = 0.0;  // no parameter, no penalty
      row.score = -T * std::log(2.0);
      row.exact_fit = false;
      return;
    }
    std::vector<int> subset;
    for (int i = 0; i < K; ++i)
      if (mask & (std::uint32_t(1) << i)) subset.push_back(i);
    row.subset_size = static_cast<int>(subset.size());

    ModelSpec spec{subset, false, std::nullopt};
    const BinaryDesign sub = project_design(keys, spec);
    const auto fit = fit_degenerate(config.threshold, sub, outcome, config.fit);
    row.theta = fit.theta;
    row.loglik = fit.loglik;
    row.exact_fit = fit.loglik >= -1e-6;

    const auto dist = CategoricalDistribution::from_design(sub, [&] {
      std::vector<int> all(subset.size());
      for (size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
      return all;
    }());
    const auto c = degenerate_complexity(dist, config.threshold);
    row.complexity_log = c.log_value;
    row.score = c.value > 0.0
                    ? T * fit.loglik - bic_term - c.log_value
                    : kNegInf;  // flat model: expansion breaks down
  });

  std::sort(table.begin(), table.end(),
            [](const KeyModelScore& a, const KeyModelScore& b) {
              if (a.score != b.score) return a.score > b.score;
              return a.subset_mask < b.subset_mask;
            });
  return table;
}

DeltaRankResult delta_rank(const std::vector<double>& loglik,
                           const std::vector<double>& complexity_log,
                           double T) {
  const size_t M = loglik.size();
  if (M < 3 || complexity_log.size() != M)
    throw std::invalid_argument("delta_rank: need >= 3 models");
  for (size_t i = 1; i < M; ++i)
    if (loglik[i] < loglik[i - 1])
      throw std::invalid_argument(
          "delta_rank: table must be sorted by non-decreasing likelihood");

  const auto [lmin, lmax] = std::minmax_element(loglik.begin(), loglik.end());
  const auto [cmin, cmax] =
      std::minmax_element(complexity_log.begin(), complexity_log.end());
  DeltaRankResult res;
  res.per_model.resize(M, 0);
  if (*lmax - *lmin == 0.0 && *cmax - *cmin == 0.0) return res;  // degenerate

  double sum = 0.0;
  for (size_t i = 0; i < M; ++i) {
    int chosen = static_cast<int>(M) - 1;
    for (size_t k = 1; k < M; ++k) {
      const size_t lo = i >= k ? i - k : 0;
      const size_t hi = std::min(i + k, M - 1);
      const double lik_spread = T * (loglik[hi] - loglik[lo]);
      double c_lo = complexity_log[lo], c_hi = c_lo;
      for (size_t j = lo + 1; j <= hi; ++j) {
        c_lo = std::min(c_lo, complexity_log[j]);
        c_hi = std::max(c_hi, complexity_log[j]);
      }
      if (lik_spread >= c_hi - c_lo) {
        chosen = static_cast<int>(k);
        break;
      }
    }
    res.per_model[i] = chosen;
    sum += chosen;
  }
  res.mean = sum / static_cast<double>(M);
  return res;
}

}  // namespace lrc
