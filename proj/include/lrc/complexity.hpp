#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lrc/design.hpp"

namespace lrc {

enum class ComplexityMethod { closed_form, quadrature, monte_carlo, asymptotic };

std::string to_string(ComplexityMethod m);

/// e^C = integral over parameter space of sqrt(det F(theta)).
struct ComplexityEstimate {
  double value = 0.0;      // e^C
  double log_value = 0.0;  // C; -inf when value == 0
  double std_error = 0.0;  // 0 unless Monte Carlo
  ComplexityMethod method = ComplexityMethod::closed_form;
  std::vector<double> batches;  // per-batch estimates when Monte Carlo

  static ComplexityEstimate exact(double value, ComplexityMethod method);
};

/// Closed forms: rank-deficient support -> 0; n = 1 -> pi; support of
/// exactly n independent configurations -> pi^n prod sqrt(nu);
/// n = 2 -> sqrt(nu (1 - nu)) pi^2 with nu the same-sign frequency.
/// Returns nullopt when no closed form applies.
std::optional<ComplexityEstimate> complexity_closed_form(
    const EmpiricalInputDistribution& dist);

struct QuadConfig {
  double rel_tol = 1e-4;
  int initial_nodes = 16;  // per axis
  int max_nodes = 0;       // 0 -> dimension-dependent default
};

/// Deterministic tensor-product quadrature of sqrt(det F) over R^n with the
/// per-coordinate substitution theta = tan(pi u / 2). Oracle regime n <= 4.
ComplexityEstimate complexity_quadrature(const EmpiricalInputDistribution& dist,
                                         const QuadConfig& config = {});

struct MonteCarloConfig {
  long samples = 100000;
  int batches = 20;
  std::uint64_t seed = 0;
  int threads = 1;
};

/// Importance sampling with proposal q(theta) = prod_k sech(theta_k)/pi.
/// value = mean of batch means, std_error = std of batch means / sqrt(batches).
/// Rank-deficient support returns exact 0.
ComplexityEstimate complexity_monte_carlo(const EmpiricalInputDistribution& dist,
                                          const MonteCarloConfig& config);

/// Picks closed form when available, else quadrature for n <= 4, else MC.
ComplexityEstimate complexity_auto(const EmpiricalInputDistribution& dist,
                                   const MonteCarloConfig& mc = {});

/// det F(theta) via the Cauchy-Binet sum over n-subsets of the support.
/// Guarded to at most max_terms subset terms.
double complexity_cauchy_binet(const EmpiricalInputDistribution& dist,
                               const Vector& theta,
                               long max_terms = 100000);

/// pi^n sum over full-rank n-subsets of prod sqrt(nu); equals e^C exactly
/// when the support has exactly n configurations.
double upper_bound_triangular(const EmpiricalInputDistribution& dist,
                              long max_terms = 100000);

struct BoundEnvelope {
  double lower;         // pi^n sqrt((T-n+1)/T^n), exact-support regime
  double upper_local;   // pi^n / n^(n/2), exact-support regime
  double upper_global;  // pi^n / n, empirical uniform-input trend
};

BoundEnvelope bound_envelope(int n, long T);

/// Asymptotic complexity of a box-bounded model with uniform inputs:
/// e^C ~ (2/sqrt(pi n)) (8 pi Theta^2 e^2 / n)^(n/4).
double complexity_regularized_asymptotic(int n, double theta_box);

/// n_c = 8 pi Theta^2 e^2; past it the asymptotic value decays with n.
double critical_dimension(double theta_box);

/// lambda(r) = int dz exp(-z^2/2r^2)/sqrt(2 pi r^2) sech^2(z).
double gaussian_sech2_moment(double r);

/// Complexity of the box-bounded uniform-input model in the central-limit
/// regime: (2 pi^(n/2)/Gamma(n/2)) int_0^(sqrt(n) Theta) r^(n-1) lambda^(n/2) dr.
ComplexityEstimate complexity_regularized_spherical(int n, double theta_box,
                                                    double rel_tol = 1e-6);

struct LocalisationPoint {
  int path;
  int d;  // number of configurations carrying weight
  double value;
  double std_error;
};

/// Random-path localisation sweep: each path starts from a uniformly random
/// full-rank set of n configurations and grows one random unseen
/// configuration at a time up to all 2^n; the distribution is uniform on the
/// selected set. Values for d < n are exactly 0.
std::vector<LocalisationPoint> localisation_sweep(int n, int paths,
                                                  const MonteCarloConfig& mc);

}  // namespace lrc
