#include "lrc/complexity.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "lrc/likelihood.hpp"
#include "lrc/parallel.hpp"
#include "lrc/quadrature.hpp"
#include "lrc/rng.hpp"

namespace lrc {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log sqrt(det F(theta)), -inf when the determinant vanishes. The dominant
// sech^2 scale is factored out so the determinant never underflows.
class FisherDet {
 public:
  explicit FisherDet(const EmpiricalInputDistribution& dist)
      : X_(dist.support()), log_nu_(dist.freqs().array().log()) {}

  int dim() const { return static_cast<int>(X_.cols()); }

  double log_sqrt_det(const Vector& theta) const {
    const Eigen::Index M = X_.rows();
    const Eigen::Index n = X_.cols();
    Vector logd(M);
    for (Eigen::Index m = 0; m < M; ++m) {
      const double z = X_.row(m) * theta;
      logd(m) = log_nu_(m) - 2.0 * (log_2cosh(z) - std::log(2.0));
    }
    // factor out the largest term so the scaled matrix cannot underflow
    const double scale = logd.maxCoeff();
    Matrix F = Matrix::Zero(n, n);
    for (Eigen::Index m = 0; m < M; ++m)
      F.selfadjointView<Eigen::Lower>().rankUpdate(
          X_.row(m).transpose(), std::exp(logd(m) - scale));
    Eigen::SelfAdjointEigenSolver<Matrix> es(
        Matrix(F.selfadjointView<Eigen::Lower>()), Eigen::EigenvaluesOnly);
    // eigenvalues below the numerical-rank threshold count as exact zeros;
    // Cholesky rounding would otherwise fake dets ~ eps that the tan-map
    // jacobian then blows up by theta^(2n)
    const double floor =
        n * std::numeric_limits<double>::epsilon() *
        std::max(es.eigenvalues().maxCoeff(), 0.0);
    double log_det = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double ev = es.eigenvalues()(i);
      if (!(ev > floor)) return kNegInf;
      log_det += std::log(ev);
    }
    return 0.5 * (log_det + n * scale);
  }

  double sqrt_det(const Vector& theta) const {
    const double l = log_sqrt_det(theta);
    return l == kNegInf ? 0.0 : std::exp(l);
  }

 private:
  const Matrix& X_;
  Eigen::ArrayXd log_nu_;
};

void combinations(long M, int n, long max_terms,
                  const std::function<void(const std::vector<int>&)>& visit) {
  if (n > M) return;  // no n-subsets
  double count = 1.0;
  for (int i = 0; i < n; ++i) count *= double(M - i) / double(i + 1);
  if (count > double(max_terms))
    throw std::invalid_argument(
        "combinatorial guard exceeded: C(" + std::to_string(M) + "," +
        std::to_string(n) + ") > " + std::to_string(max_terms));
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  if (n == 0) {
    visit(idx);
    return;
  }
  for (;;) {
    visit(idx);
    int i = n - 1;
    while (i >= 0 && idx[i] == M - n + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < n; ++j) idx[j] = idx[j - 1] + 1;
  }
}

// Determinant of a +-1 matrix is an integer, so rounding is exact.
double signed_config_det(const Matrix& sub) {
  return std::round(Eigen::PartialPivLU<Matrix>(sub).determinant());
}

}  // namespace

std::string to_string(ComplexityMethod m) {
  switch (m) {
    case ComplexityMethod::closed_form: return "closed_form";
    case ComplexityMethod::quadrature: return "quadrature";
    case ComplexityMethod::monte_carlo: return "monte_carlo";
    case ComplexityMethod::asymptotic: return "asymptotic";
  }
  return "unknown";
}

ComplexityEstimate ComplexityEstimate::exact(double value,
                                             ComplexityMethod method) {
  ComplexityEstimate e;
  e.value = value;
  e.log_value = value > 0.0 ? std::log(value) : kNegInf;
  e.std_error = 0.0;
  e.method = method;
  return e;
}

std::optional<ComplexityEstimate> complexity_closed_form(
    const EmpiricalInputDistribution& dist) {
  const int n = dist.dim();
  const Eigen::Index M = dist.size();
  const int rank = support_rank(dist);
  if (rank < n)
    return ComplexityEstimate::exact(0.0, ComplexityMethod::closed_form);
  if (n == 1)
    return ComplexityEstimate::exact(kPi, ComplexityMethod::closed_form);
  if (M == n) {
    // exactly n independent configurations: pi^n prod sqrt(nu)
    double log_value = n * std::log(kPi);
    for (Eigen::Index i = 0; i < M; ++i)
      log_value += 0.5 * std::log(dist.freqs()(i));
    ComplexityEstimate e;
    e.value = std::exp(log_value);
    e.log_value = log_value;
    e.method = ComplexityMethod::closed_form;
    return e;
  }
  if (n == 2) {
    double nu_same = 0.0;
    for (Eigen::Index i = 0; i < M; ++i)
      if (dist.support()(i, 0) == dist.support()(i, 1))
        nu_same += dist.freqs()(i);
    return ComplexityEstimate::exact(
        std::sqrt(nu_same * (1.0 - nu_same)) * kPi * kPi,
        ComplexityMethod::closed_form);
  }
  return std::nullopt;
}

ComplexityEstimate complexity_quadrature(const EmpiricalInputDistribution& dist,
                                         const QuadConfig& config) {
  const int n = dist.dim();
  if (n > 4)
    throw std::invalid_argument(
        "complexity_quadrature: n > 4 is outside the oracle regime");
  if (support_rank(dist) < n)
    return ComplexityEstimate::exact(0.0, ComplexityMethod::quadrature);
  const FisherDet det(dist);

  int max_nodes = config.max_nodes;
  if (max_nodes <= 0) {
    if (n == 1) max_nodes = 2048;
    else if (n == 2) max_nodes = 512;
    else if (n == 3) max_nodes = 128;
    else max_nodes = 64;
  }

  auto tensor_estimate = [&](int order) {
    const auto& [nodes, weights] = gauss_legendre(order);
    std::vector<double> theta_1d(order), jw_1d(order);
    for (int i = 0; i < order; ++i) {
      const double c = std::cos(kPi * nodes[i] / 2);
      theta_1d[i] = std::tan(kPi * nodes[i] / 2);
      jw_1d[i] = weights[i] * (kPi / 2) / (c * c);
    }
    Vector theta(n);
    std::vector<int> idx(n, 0);
    double total = 0.0;
    for (;;) {
      double jw = 1.0;
      for (int k = 0; k < n; ++k) {
        theta(k) = theta_1d[idx[k]];
        jw *= jw_1d[idx[k]];
      }
      const double v = det.sqrt_det(theta);
      if (std::isfinite(v)) total += v * jw;
      int k = 0;
      while (k < n && ++idx[k] == order) idx[k++] = 0;
      if (k == n) break;
    }
    return total;
  };

  double prev = tensor_estimate(config.initial_nodes);
  double second_last = prev;
  for (int order = 2 * config.initial_nodes; order <= max_nodes; order *= 2) {
    const double cur = tensor_estimate(order);
    const double scale = std::max({std::abs(cur), std::abs(prev), 1e-300});
    if (std::abs(cur - prev) <= config.rel_tol * scale)
      return ComplexityEstimate::exact(cur, ComplexityMethod::quadrature);
    second_last = prev;
    prev = cur;
  }
  throw QuadratureError("complexity_quadrature did not converge", second_last,
                        prev);
}

ComplexityEstimate complexity_monte_carlo(const EmpiricalInputDistribution& dist,
                                          const MonteCarloConfig& config) {
  const int n = dist.dim();
  if (config.samples < 1000)
    throw std::invalid_argument("complexity_monte_carlo: samples >= 1000");
  if (config.batches < 1)
    throw std::invalid_argument("complexity_monte_carlo: batches >= 1");
  if (support_rank(dist) < n)
    return ComplexityEstimate::exact(0.0, ComplexityMethod::monte_carlo);
  const FisherDet det(dist);

  std::vector<double> batch_means(static_cast<size_t>(config.batches), 0.0);
  parallel_for(config.batches, config.threads, [&](std::int64_t b) {
    Rng rng(derive_stream(config.seed,
                          {0x6d63u, static_cast<std::uint64_t>(b)}));
    Vector theta(n);
    double sum = 0.0;
    for (long s = 0; s < config.samples; ++s) {
      double log_q = -n * std::log(kPi);
      for (int k = 0; k < n; ++k) {
        const double u = rng.uniform();
        theta(k) = std::log(std::tan(kPi * u / 2));
        log_q -= log_2cosh(theta(k)) - std::log(2.0);  // log sech
      }
      const double l = det.log_sqrt_det(theta);
      if (l != kNegInf) sum += std::exp(l - log_q);
    }
    batch_means[static_cast<size_t>(b)] = sum / double(config.samples);
  });

  ComplexityEstimate e;
  e.method = ComplexityMethod::monte_carlo;
  e.batches = batch_means;
  const double mean =
      std::accumulate(batch_means.begin(), batch_means.end(), 0.0) /
      double(config.batches);
  e.value = mean;
  e.log_value = mean > 0.0 ? std::log(mean) : kNegInf;
  if (config.batches > 1) {
    double ss = 0.0;
    for (double m : batch_means) ss += (m - mean) * (m - mean);
    e.std_error = std::sqrt(ss / double(config.batches - 1)) /
                  std::sqrt(double(config.batches));
  }
  return e;
}

ComplexityEstimate complexity_auto(const EmpiricalInputDistribution& dist,
                                   const MonteCarloConfig& mc) {
  if (auto cf = complexity_closed_form(dist)) return *cf;
  if (dist.dim() <= 4) return complexity_quadrature(dist);
  return complexity_monte_carlo(dist, mc);
}

double complexity_cauchy_binet(const EmpiricalInputDistribution& dist,
                               const Vector& theta, long max_terms) {
  const int n = dist.dim();
  if (theta.size() != n)
    throw std::invalid_argument("complexity_cauchy_binet: theta size");
  const Eigen::Index M = dist.size();
  const Vector z = dist.support() * theta;
  double total = 0.0;
  Matrix sub(n, n);
  combinations(M, n, max_terms, [&](const std::vector<int>& alpha) {
    double prod = 1.0;
    for (int i = 0; i < n; ++i) {
      sub.row(i) = dist.support().row(alpha[static_cast<size_t>(i)]);
      prod *= dist.freqs()(alpha[static_cast<size_t>(i)]) *
              sech2(z(alpha[static_cast<size_t>(i)]));
    }
    const double d = signed_config_det(sub);
    total += d * d * prod;
  });
  return total;
}

double upper_bound_triangular(const EmpiricalInputDistribution& dist,
                              long max_terms) {
  const int n = dist.dim();
  const Eigen::Index M = dist.size();
  double sum = 0.0;
  Matrix sub(n, n);
  combinations(M, n, max_terms, [&](const std::vector<int>& alpha) {
    for (int i = 0; i < n; ++i)
      sub.row(i) = dist.support().row(alpha[static_cast<size_t>(i)]);
    if (std::abs(signed_config_det(sub)) < 0.5) return;  // rank deficient
    double prod = 1.0;
    for (int i = 0; i < n; ++i)
      prod *= std::sqrt(dist.freqs()(alpha[static_cast<size_t>(i)]));
    sum += prod;
  });
  if (!(sum > 0.0)) return 0.0;
  return std::exp(n * std::log(kPi) + std::log(sum));
}

BoundEnvelope bound_envelope(int n, long T) {
  if (n < 1) throw std::invalid_argument("bound_envelope: n >= 1");
  if (T < n) throw std::invalid_argument("bound_envelope: T >= n required");
  const double logpi_n = n * std::log(kPi);
  BoundEnvelope b;
  b.lower = std::exp(logpi_n + 0.5 * (std::log(double(T - n + 1)) -
                                      n * std::log(double(T))));
  b.upper_local = std::exp(logpi_n - 0.5 * n * std::log(double(n)));
  b.upper_global = std::exp(logpi_n - std::log(double(n)));
  return b;
}

double critical_dimension(double theta_box) {
  if (!(theta_box > 0.0))
    throw std::invalid_argument("critical_dimension: Theta > 0");
  return 8.0 * kPi * theta_box * theta_box * std::exp(2.0);
}

double complexity_regularized_asymptotic(int n, double theta_box) {
  if (n < 1) throw std::invalid_argument("n >= 1 required");
  const double nc = critical_dimension(theta_box);
  const double log_value = std::log(2.0) - 0.5 * std::log(kPi * n) +
                           0.25 * n * std::log(nc / n);
  return std::exp(log_value);
}

double gaussian_sech2_moment(double r) {
  if (r < 1e-8) return 1.0;
  // whichever factor is narrower confines the integrand: the Gaussian to
  // |z| <= 10 r (tail ~ 1e-22), sech^2 to |z| <= 40 (tail ~ 1e-34)
  const double cutoff = std::min(10.0 * r, 40.0);
  const double norm = 1.0 / std::sqrt(2.0 * kPi * r * r);
  auto f = [&](double z) {
    return norm * std::exp(-0.5 * z * z / (r * r)) * sech2(z);
  };
  return integrate_interval(f, -cutoff, cutoff, 1e-10, 64, 4096);
}

ComplexityEstimate complexity_regularized_spherical(int n, double theta_box,
                                                    double rel_tol) {
  if (n < 2)
    throw std::invalid_argument("complexity_regularized_spherical: n >= 2");
  if (!(theta_box > 0.0))
    throw std::invalid_argument("complexity_regularized_spherical: Theta > 0");
  const double R = std::sqrt(double(n)) * theta_box;

  // radial integral in the log domain: exp((n-1) log r + (n/2) log lambda)
  auto log_integral = [&](int order) {
    const auto& [nodes, weights] = gauss_legendre(order);
    std::vector<double> logs(static_cast<size_t>(order));
    for (int i = 0; i < order; ++i) {
      const double r = 0.5 * (nodes[i] + 1.0) * R;
      const double lam = gaussian_sech2_moment(r);
      logs[static_cast<size_t>(i)] =
          r > 0.0 ? (n - 1) * std::log(r) + 0.5 * n * std::log(lam) : kNegInf;
    }
    const double m = *std::max_element(logs.begin(), logs.end());
    double sum = 0.0;
    for (int i = 0; i < order; ++i)
      sum += weights[i] * std::exp(logs[static_cast<size_t>(i)] - m);
    return m + std::log(sum * 0.5 * R);
  };

  double prev = log_integral(64);
  double second_last = prev;
  bool done = false;
  double cur = prev;
  for (int order = 128; order <= 2048; order *= 2) {
    cur = log_integral(order);
    if (std::abs(cur - prev) <= rel_tol) {  // tolerance on C itself
      done = true;
      break;
    }
    second_last = prev;
    prev = cur;
  }
  if (!done)
    throw QuadratureError("spherical radial quadrature did not converge",
                          second_last, cur);

  const double log_value = std::log(2.0) + 0.5 * n * std::log(kPi) -
                           std::lgamma(0.5 * n) + cur;
  ComplexityEstimate e;
  e.value = std::exp(log_value);
  e.log_value = log_value;
  e.method = ComplexityMethod::quadrature;
  return e;
}

std::vector<LocalisationPoint> localisation_sweep(int n, int paths,
                                                  const MonteCarloConfig& mc) {
  if (n < 1 || n > 12)
    throw std::invalid_argument("localisation_sweep: n in [1, 12]");
  const Matrix all = all_configurations(n);
  const Eigen::Index M = all.rows();
  std::vector<LocalisationPoint> out;

  for (int p = 0; p < paths; ++p) {
    Rng rng(derive_stream(mc.seed, {0x706174u, static_cast<std::uint64_t>(p)}));
    // rejection-sample a full-rank starting set of n configurations
    std::vector<Eigen::Index> order(static_cast<size_t>(M));
    for (;;) {
      std::iota(order.begin(), order.end(), 0);
      for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::Index j =
            i + static_cast<Eigen::Index>(rng.uniform_index(
                    static_cast<std::uint64_t>(M - i)));
        std::swap(order[static_cast<size_t>(i)], order[static_cast<size_t>(j)]);
      }
      Matrix head(n, n);
      for (int i = 0; i < n; ++i)
        head.row(i) = all.row(order[static_cast<size_t>(i)]);
      if (std::abs(signed_config_det(head)) > 0.5) break;
    }
    // grow by uniformly random unseen configurations
    for (Eigen::Index i = n; i < M; ++i) {
      const Eigen::Index j =
          i + static_cast<Eigen::Index>(
                  rng.uniform_index(static_cast<std::uint64_t>(M - i)));
      std::swap(order[static_cast<size_t>(i)], order[static_cast<size_t>(j)]);
    }

    for (Eigen::Index d = 1; d <= M; ++d) {
      LocalisationPoint pt{p, static_cast<int>(d), 0.0, 0.0};
      if (d >= n) {
        Matrix support(d, n);
        for (Eigen::Index i = 0; i < d; ++i)
          support.row(i) = all.row(order[static_cast<size_t>(i)]);
        MonteCarloConfig cfg = mc;
        cfg.seed = derive_stream(mc.seed, {0x6c6f63u,
                                           static_cast<std::uint64_t>(p),
                                           static_cast<std::uint64_t>(d)});
        const auto est =
            complexity_monte_carlo(uniform_on_configs(std::move(support)), cfg);
        pt.value = est.value;
        pt.std_error = est.std_error;
      }
      out.push_back(pt);
    }
  }
  return out;
}

}  // namespace lrc
