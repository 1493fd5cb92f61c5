#include "lrc/likelihood.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <stdexcept>

namespace lrc {

namespace {

void check_dims(const Vector& theta, const BinaryDesign& design,
                const OutputVector& y) {
  if (theta.size() != design.cols())
    throw std::invalid_argument("theta length does not match design columns");
  if (y.size() != design.rows())
    throw std::invalid_argument("output length does not match design rows");
}

// Sufficient statistics: mean(y x) plus the empirical input distribution.
struct Sufficient {
  Vector mean_yx;
  Matrix support;
  Vector nu;
};

Sufficient summarize(const BinaryDesign& design, const OutputVector& y) {
  const double T = static_cast<double>(design.rows());
  Vector mean_yx = design.data().transpose() * y.values() / T;
  auto dist = empirical_distribution(design);
  return {std::move(mean_yx), dist.support(), dist.freqs()};
}

double loglik_stats(const Vector& theta, const Sufficient& s) {
  double ll = theta.dot(s.mean_yx);
  const Vector z = s.support * theta;
  for (Eigen::Index m = 0; m < z.size(); ++m)
    ll -= s.nu(m) * log_2cosh(z(m));
  return ll;
}

Vector gradient_stats(const Vector& theta, const Sufficient& s) {
  Vector g = s.mean_yx;
  const Vector z = s.support * theta;
  for (Eigen::Index m = 0; m < z.size(); ++m)
    g -= s.nu(m) * std::tanh(z(m)) * s.support.row(m).transpose();
  return g;
}

Matrix fisher_stats(const Vector& theta, const Matrix& support,
                    const Vector& nu) {
  const Eigen::Index n = support.cols();
  const Vector z = support * theta;
  Matrix F = Matrix::Zero(n, n);
  for (Eigen::Index m = 0; m < z.size(); ++m)
    F.selfadjointView<Eigen::Lower>().rankUpdate(
        support.row(m).transpose(), nu(m) * sech2(z(m)));
  return F.selfadjointView<Eigen::Lower>();
}

}  // namespace

double loglik(const Vector& theta, const BinaryDesign& design,
              const OutputVector& y) {
  check_dims(theta, design, y);
  const double T = static_cast<double>(design.rows());
  double ll = theta.dot(design.data().transpose() * y.values()) / T;
  for (Eigen::Index t = 0; t < design.rows(); ++t)
    ll -= log_2cosh(design.data().row(t) * theta) / T;
  return ll;
}

Vector loglik_gradient(const Vector& theta, const BinaryDesign& design,
                       const OutputVector& y) {
  check_dims(theta, design, y);
  return gradient_stats(theta, summarize(design, y));
}

Matrix fisher_information(const Vector& theta,
                          const EmpiricalInputDistribution& dist) {
  if (theta.size() != dist.dim())
    throw std::invalid_argument(
        "theta length does not match distribution dimension");
  return fisher_stats(theta, dist.support(), dist.freqs());
}

FitResult fit_mle(const BinaryDesign& design, const OutputVector& y,
                  const FitConfig& config) {
  if (y.size() != design.rows())
    throw std::invalid_argument("output length does not match design rows");
  const Eigen::Index n = design.cols();
  const auto s = summarize(design, y);

  FitResult res;
  res.theta = Vector::Zero(n);
  double cur = loglik_stats(res.theta, s);

  for (res.iterations = 0; res.iterations < config.max_iter;
       ++res.iterations) {
    const Vector g = gradient_stats(res.theta, s);
    res.grad_norm = g.lpNorm<Eigen::Infinity>();
    if (!std::isfinite(res.grad_norm))
      throw std::runtime_error("fit_mle: non-finite gradient");
    if (res.grad_norm <= config.grad_tol) {
      res.converged = true;
      break;
    }
    Matrix F = fisher_stats(res.theta, s.support, s.nu);
    Eigen::LDLT<Matrix> ldlt(F);
    Vector step;
    if (ldlt.info() == Eigen::Success) step = ldlt.solve(g);
    if (ldlt.info() != Eigen::Success || !step.allFinite()) {
      // singular Fisher (rank-deficient design or saturated fit): ridge
      const double ridge = std::max(1e-12, 1e-10 * F.trace());
      F.diagonal().array() += ridge;
      step = Eigen::LDLT<Matrix>(F).solve(g);
      if (!step.allFinite())
        throw std::runtime_error("fit_mle: Newton step is non-finite");
    }
    // step halving: the likelihood must not decrease
    double lambda = 1.0;
    Vector cand = res.theta + step;
    double cand_ll = loglik_stats(cand, s);
    for (int h = 0; h < 60 && !(cand_ll >= cur - 1e-14); ++h) {
      lambda *= 0.5;
      cand = res.theta + lambda * step;
      cand_ll = loglik_stats(cand, s);
    }
    res.theta = cand;
    cur = cand_ll;
    if (res.theta.lpNorm<Eigen::Infinity>() > config.param_cap) {
      res.theta = res.theta.cwiseMax(-config.param_cap)
                      .cwiseMin(config.param_cap);
      cur = loglik_stats(res.theta, s);
      res.separated = true;
      res.grad_norm =
          gradient_stats(res.theta, s).lpNorm<Eigen::Infinity>();
      ++res.iterations;
      break;
    }
  }
  res.loglik = cur;
  if (!std::isfinite(res.loglik))
    throw std::runtime_error("fit_mle: non-finite log-likelihood");
  // a likelihood at its supremum means a deterministic input-output map:
  // the unconstrained MLE diverges even if the cap was never reached
  if (res.loglik >= -1e-6) res.separated = true;
  return res;
}

}  // namespace lrc
