#pragma once

// Test-only reference implementations, kept independent of the library code
// paths they check.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "lrc/design.hpp"
#include "lrc/rng.hpp"

namespace oracle {

// Normalised log-likelihood by direct product of the model probabilities
// p(y|x) = e^(y theta.x) / (2 cosh(theta.x)), one factor per observation.
inline double loglik_bruteforce(const lrc::Vector& theta,
                                const lrc::Matrix& X, const lrc::Vector& y) {
  double total = 0.0;
  for (Eigen::Index t = 0; t < X.rows(); ++t) {
    const double z = X.row(t) * theta;
    const double p = std::exp(y(t) * z) / (2.0 * std::cosh(z));
    total += std::log(p);
  }
  return total / static_cast<double>(X.rows());
}

// Central finite-difference gradient.
inline lrc::Vector fd_gradient(const std::function<double(const lrc::Vector&)>& f,
                               const lrc::Vector& x, double h = 1e-5) {
  lrc::Vector g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    lrc::Vector xp = x, xm = x;
    xp(i) += h;
    xm(i) -= h;
    g(i) = (f(xp) - f(xm)) / (2.0 * h);
  }
  return g;
}

// Central finite-difference Hessian, built by differencing a gradient
// function (the scalar 4-point stencil loses too much to rounding at small
// steps; the gradient is itself checked against fd_gradient separately).
inline lrc::Matrix fd_hessian(
    const std::function<lrc::Vector(const lrc::Vector&)>& grad,
    const lrc::Vector& x, double h = 1e-5) {
  const Eigen::Index n = x.size();
  lrc::Matrix H(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    lrc::Vector xp = x, xm = x;
    xp(j) += h;
    xm(j) -= h;
    H.col(j) = (grad(xp) - grad(xm)) / (2.0 * h);
  }
  return H;
}

// Root of a monotone scalar function by bisection.
inline double bisect(const std::function<double(double)>& f, double lo,
                     double hi, double tol = 1e-12) {
  double flo = f(lo);
  if (flo == 0.0) return lo;
  for (int it = 0; it < 500; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (std::abs(hi - lo) < tol) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Random design with +-1 entries.
inline lrc::Matrix random_pm1(Eigen::Index rows, Eigen::Index cols,
                              lrc::Rng& rng) {
  lrc::Matrix X(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j)
      X(i, j) = rng.fair_coin() ? 1.0 : -1.0;
  return X;
}

// Random distribution over a random subset of configurations (full support
// count d, Dirichlet-ish positive weights).
inline lrc::EmpiricalInputDistribution random_distribution(int n, int d,
                                                           lrc::Rng& rng) {
  const lrc::Matrix all = lrc::all_configurations(n);
  const Eigen::Index M = all.rows();
  if (d > M) throw std::invalid_argument("d too large");
  std::vector<Eigen::Index> order(static_cast<size_t>(M));
  for (Eigen::Index i = 0; i < M; ++i) order[static_cast<size_t>(i)] = i;
  for (int i = 0; i < d; ++i) {
    const auto j = i + static_cast<Eigen::Index>(
                           rng.uniform_index(static_cast<uint64_t>(M - i)));
    std::swap(order[static_cast<size_t>(i)], order[static_cast<size_t>(j)]);
  }
  lrc::Matrix support(d, n);
  lrc::Vector freqs(d);
  double total = 0.0;
  for (int i = 0; i < d; ++i) {
    support.row(i) = all.row(order[static_cast<size_t>(i)]);
    freqs(i) = 0.05 + rng.uniform();
    total += freqs(i);
  }
  freqs /= total;
  // re-normalize exactly
  freqs(d - 1) = 1.0 - (freqs.sum() - freqs(d - 1));
  return lrc::EmpiricalInputDistribution(std::move(support), std::move(freqs));
}

}  // namespace oracle
