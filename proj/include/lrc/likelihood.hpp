#pragma once

#include "lrc/design.hpp"

namespace lrc {

/// log(2 cosh(z)) without overflow.
inline double log_2cosh(double z) {
  const double az = std::abs(z);
  return az + std::log1p(std::exp(-2.0 * az));
}

/// sech^2(z) without overflow.
inline double sech2(double z) {
  const double e = std::exp(-2.0 * std::abs(z));
  const double d = 1.0 + e;
  return 4.0 * e / (d * d);
}

struct FitConfig {
  double grad_tol = 1e-8;
  int max_iter = 100;
  double param_cap = 30.0;  // |theta_k| beyond this is flagged as separation
};

struct FitResult {
  Vector theta;     // MLE
  double loglik;    // normalised log-likelihood at theta, nats/observation
  int iterations = 0;
  bool converged = false;
  bool separated = false;
  double grad_norm = 0.0;  // final gradient infinity-norm
};

/// Normalised log-likelihood theta . mean(y x) - mean(log 2cosh(theta . x)).
double loglik(const Vector& theta, const BinaryDesign& design,
              const OutputVector& y);

/// Gradient mean(y x_i) - sum_mu nu tanh(theta . x^mu) x^mu_i.
Vector loglik_gradient(const Vector& theta, const BinaryDesign& design,
                       const OutputVector& y);

/// F_ij = sum_mu nu(x^mu) sech^2(theta . x^mu) x^mu_i x^mu_j.
/// Equals the Hessian of -loglik; does not depend on the outputs.
Matrix fisher_information(const Vector& theta,
                          const EmpiricalInputDistribution& dist);

/// Damped Newton on the normalised log-likelihood, using the Fisher matrix
/// as the exact Hessian. Parameters exceeding the cap in infinity-norm are
/// clamped and the fit is flagged as separated.
FitResult fit_mle(const BinaryDesign& design, const OutputVector& y,
                  const FitConfig& config = {});

}  // namespace lrc
