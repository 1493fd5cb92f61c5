#include <doctest.h>

#include <cmath>

#include "lrc/complexity.hpp"
#include "lrc/likelihood.hpp"
#include "lrc/rng.hpp"
#include "oracles.hpp"

using namespace lrc;

namespace {
constexpr double kPi = 3.14159265358979323846;

EmpiricalInputDistribution two_input_dist(double nu_same) {
  Matrix support(4, 2);
  support << 1, 1, -1, -1, 1, -1, -1, 1;
  Vector freqs(4);
  freqs << nu_same / 2, nu_same / 2, (1 - nu_same) / 2, (1 - nu_same) / 2;
  return EmpiricalInputDistribution(std::move(support), std::move(freqs));
}
}  // namespace

TEST_SUITE("complexity") {

TEST_CASE("closed form: one parameter is pi for any input distribution") {
  Matrix support(2, 1);
  support << 1, -1;
  Vector freqs(2);
  freqs << 0.9, 0.1;
  const auto e = complexity_closed_form(
      EmpiricalInputDistribution(support, freqs));
  REQUIRE(e.has_value());
  CHECK(e->value == doctest::Approx(kPi).epsilon(1e-15));
  CHECK(e->method == ComplexityMethod::closed_form);
  CHECK(e->std_error == 0.0);
}

TEST_CASE("closed form: two parameters") {
  const auto max = complexity_closed_form(two_input_dist(0.5));
  REQUIRE(max.has_value());
  CHECK(max->value == doctest::Approx(kPi * kPi / 2).epsilon(1e-14));

  // single observed configuration: redundant model
  Matrix support(1, 2);
  support << 1, 1;
  const auto zero = complexity_closed_form(
      EmpiricalInputDistribution(support, Vector::Ones(1)));
  REQUIRE(zero.has_value());
  CHECK(zero->value == 0.0);
  CHECK(std::isinf(zero->log_value));
  CHECK(zero->log_value < 0);
}

TEST_CASE("closed form: exact support of n independent configurations") {
  Matrix support(3, 3);
  support << 1, 1, 1, 1, -1, 1, 1, 1, -1;
  Vector freqs(3);
  freqs << 0.5, 0.25, 0.25;
  const auto e = complexity_closed_form(
      EmpiricalInputDistribution(support, freqs));
  REQUIRE(e.has_value());
  CHECK(e->value ==
        doctest::Approx(std::pow(kPi, 3) * std::sqrt(1.0 / 32.0))
            .epsilon(1e-13));
}

TEST_CASE("closed form declines the general case") {
  CHECK_FALSE(complexity_closed_form(uniform_distribution(3)).has_value());
}

TEST_CASE("quadrature: n = 1 gives pi") {
  const auto e = complexity_quadrature(uniform_distribution(1));
  CHECK(e.value == doctest::Approx(kPi).epsilon(1e-4));
  CHECK(e.method == ComplexityMethod::quadrature);
}

TEST_CASE("quadrature: n = 2 localized case") {
  const auto e = complexity_quadrature(two_input_dist(0.9));
  CHECK(e.value == doctest::Approx(0.3 * kPi * kPi).epsilon(1e-3));
}

TEST_CASE("quadrature agrees with Monte Carlo for n = 3 uniform") {
  const auto dist = uniform_distribution(3);
  const auto q = complexity_quadrature(dist);
  MonteCarloConfig mc;
  mc.samples = 100000;
  mc.batches = 20;
  mc.seed = 31;
  const auto m = complexity_monte_carlo(dist, mc);
  CHECK(std::abs(q.value - m.value) <= 3.0 * m.std_error);
}

TEST_CASE("monte carlo: n = 1 proposal is exact, zero variance") {
  MonteCarloConfig mc;
  mc.samples = 2000;
  mc.batches = 8;
  mc.seed = 5;
  const auto e = complexity_monte_carlo(uniform_distribution(1), mc);
  CHECK(e.value == doctest::Approx(kPi).epsilon(1e-12));
  CHECK(e.std_error <= 1e-12);
  for (double b : e.batches) CHECK(b == doctest::Approx(kPi).epsilon(1e-12));
}

TEST_CASE("monte carlo: n = 2 uniform within three sigma of pi^2/2") {
  MonteCarloConfig mc;
  mc.samples = 50000;
  mc.batches = 20;
  mc.seed = 17;
  const auto e = complexity_monte_carlo(uniform_distribution(2), mc);
  CHECK(std::abs(e.value - kPi * kPi / 2) <= 3.0 * e.std_error);
  CHECK(e.batches.size() == 20);
}

TEST_CASE("monte carlo: rank-deficient support returns exact zero") {
  Matrix support(2, 3);
  support << 1, 1, 1, -1, -1, -1;
  MonteCarloConfig mc;
  mc.samples = 1000;
  mc.batches = 2;
  mc.seed = 3;
  const auto e =
      complexity_monte_carlo(uniform_on_configs(support), mc);
  CHECK(e.value == 0.0);
}

TEST_CASE("monte carlo rejects invalid counts") {
  MonteCarloConfig mc;
  mc.samples = 10;
  CHECK_THROWS_AS(complexity_monte_carlo(uniform_distribution(2), mc),
                  std::invalid_argument);
}

TEST_CASE("cauchy-binet: exact support single term") {
  Matrix support(2, 2);
  support << 1, 1, 1, -1;
  Vector freqs(2);
  freqs << 0.75, 0.25;
  const EmpiricalInputDistribution dist(support, freqs);
  Vector theta(2);
  theta << 0.4, -0.2;
  const double via_cb = complexity_cauchy_binet(dist, theta);
  const double z1 = support.row(0) * theta;
  const double z2 = support.row(1) * theta;
  const double expected = 4.0 * 0.75 * 0.25 * sech2(z1) * sech2(z2);
  CHECK(via_cb == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("cauchy-binet: identity at theta = 0 for n = 2 uniform") {
  CHECK(complexity_cauchy_binet(uniform_distribution(2), Vector::Zero(2)) ==
        doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("cauchy-binet equals the direct determinant") {
  Rng rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const auto dist = oracle::random_distribution(3, 5, rng);
    Vector theta(3);
    for (int i = 0; i < 3; ++i) theta(i) = rng.uniform(-2, 2);
    const double cb = complexity_cauchy_binet(dist, theta);
    const double direct = fisher_information(theta, dist).determinant();
    CHECK(cb == doctest::Approx(direct).epsilon(1e-10));
  }
}

TEST_CASE("cauchy-binet guard") {
  CHECK_THROWS_AS(
      complexity_cauchy_binet(uniform_distribution(4), Vector::Zero(4), 10),
      std::invalid_argument);
}

TEST_CASE("triangular bound") {
  // support of exactly n configurations: bound equals the closed form
  Matrix support(2, 2);
  support << 1, 1, 1, -1;
  Vector freqs(2);
  freqs << 0.6, 0.4;
  const EmpiricalInputDistribution exact_dist(support, freqs);
  CHECK(upper_bound_triangular(exact_dist) ==
        doctest::Approx(complexity_closed_form(exact_dist)->value)
            .epsilon(1e-13));

  // n = 2 uniform: 4 of the 6 pairs are full rank, each contributing 1/4
  CHECK(upper_bound_triangular(uniform_distribution(2)) ==
        doctest::Approx(kPi * kPi).epsilon(1e-13));
  CHECK(upper_bound_triangular(uniform_distribution(2)) >= kPi * kPi / 2);

  // single configuration, n = 2: no full-rank pair at all
  Matrix one(1, 2);
  one << 1, -1;
  CHECK(upper_bound_triangular(
            EmpiricalInputDistribution(one, Vector::Ones(1))) == 0.0);
}

TEST_CASE("bound sandwich for quadrature values") {
  Rng rng(29);
  for (int trial = 0; trial < 6; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform_index(2));  // 2 or 3
    // d > n: at exact support the bound is an equality and the quadrature
    // error itself would decide the comparison
    const int d = n + 1 + static_cast<int>(rng.uniform_index(2));
    const auto dist = oracle::random_distribution(n, d, rng);
    if (support_rank(dist) < n) continue;
    const auto q = complexity_quadrature(dist);
    CHECK(q.value <= upper_bound_triangular(dist) + 1e-6);
    CHECK(q.value <= std::pow(kPi, n));
  }
}

TEST_CASE("bound envelope") {
  const auto b = bound_envelope(2, 100);
  CHECK(b.lower == doctest::Approx(kPi * kPi * std::sqrt(99.0 / 1e4))
                       .epsilon(1e-13));
  CHECK(b.upper_local == doctest::Approx(kPi * kPi / 2).epsilon(1e-13));
  CHECK(b.upper_global == doctest::Approx(kPi * kPi / 2).epsilon(1e-13));

  const auto tight = bound_envelope(5, 5);  // T = n: bounds coincide
  CHECK(tight.lower == doctest::Approx(tight.upper_local).epsilon(1e-12));

  CHECK_THROWS_AS(bound_envelope(10, 5), std::invalid_argument);
}

TEST_CASE("zero-rank law across methods") {
  Matrix support(2, 3);  // rank 2 < n = 3
  support << 1, 1, -1, -1, 1, -1;
  const auto dist = uniform_on_configs(support);
  CHECK(complexity_closed_form(dist)->value == 0.0);
  CHECK(complexity_quadrature(dist).value == 0.0);
  MonteCarloConfig mc;
  mc.samples = 1000;
  mc.batches = 2;
  CHECK(complexity_monte_carlo(dist, mc).value == 0.0);
  CHECK(support_rank(dist) == 2);
}

TEST_CASE("exact-support equality: MC within 3 sigma of pi^n prod sqrt(nu)") {
  Rng rng(37);
  Matrix support(3, 3);
  do {
    support = oracle::random_pm1(3, 3, rng);
  } while (support_rank(uniform_on_configs(support)) < 3);
  Vector freqs(3);
  freqs << 0.5, 0.3, 0.2;
  const EmpiricalInputDistribution dist(support, freqs);
  const double expected = std::pow(kPi, 3) * std::sqrt(0.5 * 0.3 * 0.2);
  MonteCarloConfig mc;
  mc.samples = 50000;
  mc.batches = 20;
  mc.seed = 41;
  const auto e = complexity_monte_carlo(dist, mc);
  CHECK(std::abs(e.value - expected) <= 3.0 * e.std_error);
}

TEST_CASE("appendix parity: bias column equals an extra uniform input") {
  // n uniform inputs, no bias  vs  n-1 uniform inputs + constant column
  const int n = 3;
  const auto full = uniform_distribution(n);
  Matrix support(1 << (n - 1), n);
  support.leftCols(n - 1) = all_configurations(n - 1);
  support.col(n - 1).setOnes();
  const auto biased = uniform_on_configs(support);
  MonteCarloConfig mc;
  mc.samples = 50000;
  mc.batches = 20;
  mc.seed = 43;
  const auto a = complexity_monte_carlo(full, mc);
  mc.seed = 44;
  const auto b = complexity_monte_carlo(biased, mc);
  const double sigma = std::hypot(a.std_error, b.std_error);
  CHECK(std::abs(a.value - b.value) <= 3.0 * sigma);
}

TEST_CASE("localisation path: endpoint above the exact-support start") {
  MonteCarloConfig mc;
  mc.samples = 20000;
  mc.batches = 10;
  mc.seed = 47;
  const auto points = localisation_sweep(3, 2, mc);
  for (int path = 0; path < 2; ++path) {
    double start = -1, start_se = 0, end = -1;
    for (const auto& p : points) {
      if (p.path != path) continue;
      if (p.d < 3) CHECK(p.value == 0.0);
      if (p.d == 3) {
        start = p.value;
        start_se = p.std_error;
      }
      if (p.d == 8) end = p.value;
    }
    REQUIRE(start >= 0);
    REQUIRE(end >= 0);
    CHECK(end > start);
    // the d = n start is exactly pi^n / n^(n/2) in expectation
    CHECK(std::abs(start - std::pow(kPi, 3) / std::pow(3.0, 1.5)) <=
          4.0 * start_se);
  }
}

TEST_CASE("regularized asymptotics") {
  CHECK(critical_dimension(0.25) == doctest::Approx(11.6073).epsilon(1e-4));

  // direct evaluation at n = 4, Theta = 1
  const double expected =
      2.0 / std::sqrt(4.0 * kPi) * (8.0 * kPi * std::exp(2.0) / 4.0);
  CHECK(complexity_regularized_asymptotic(4, 1.0) ==
        doctest::Approx(expected).epsilon(1e-12));

  // monotone decay past the critical dimension
  const double nc = critical_dimension(0.25);
  for (int n = static_cast<int>(nc) + 1; n < 40; ++n)
    CHECK(complexity_regularized_asymptotic(n + 1, 0.25) <
          complexity_regularized_asymptotic(n, 0.25));
}

TEST_CASE("gaussian-smoothed sech^2 limits") {
  CHECK(gaussian_sech2_moment(1e-9) == doctest::Approx(1.0));
  CHECK(gaussian_sech2_moment(1e-3) == doctest::Approx(1.0).epsilon(1e-5));
  // large-r tail ~ sqrt(2/(pi r^2))
  for (double r : {30.0, 60.0}) {
    const double tail = std::sqrt(2.0 / (kPi * r * r));
    CHECK(gaussian_sech2_moment(r) == doctest::Approx(tail).epsilon(2e-3));
  }
}

TEST_CASE("spherical complexity approaches the asymptotic form at large n") {
  // the agreement is on the C scale and tightens as n grows
  const double ratio50 = complexity_regularized_spherical(50, 0.25).log_value /
                         std::log(complexity_regularized_asymptotic(50, 0.25));
  const double ratio100 =
      complexity_regularized_spherical(100, 0.25).log_value /
      std::log(complexity_regularized_asymptotic(100, 0.25));
  CHECK(ratio50 == doctest::Approx(1.0).epsilon(0.2));
  CHECK(ratio100 == doctest::Approx(1.0).epsilon(0.2));
  CHECK(std::abs(ratio100 - 1.0) < std::abs(ratio50 - 1.0));
}

}  // TEST_SUITE
