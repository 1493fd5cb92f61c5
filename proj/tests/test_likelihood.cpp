#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "lrc/likelihood.hpp"
#include "lrc/rng.hpp"
#include "oracles.hpp"

using namespace lrc;

namespace {

OutputVector random_outputs(Eigen::Index T, Rng& rng) {
  Vector y(T);
  for (Eigen::Index t = 0; t < T; ++t) y(t) = rng.fair_coin() ? 1.0 : -1.0;
  return OutputVector(std::move(y));
}

}  // namespace

TEST_SUITE("likelihood") {

TEST_CASE("loglik at zero is -log 2") {
  Rng rng(1);
  const BinaryDesign d(oracle::random_pm1(17, 3, rng));
  const auto y = random_outputs(17, rng);
  CHECK(loglik(Vector::Zero(3), d, y) ==
        doctest::Approx(-std::log(2.0)).epsilon(1e-15));
}

TEST_CASE("single-cell data gives w - log 2cosh w") {
  const BinaryDesign d(Matrix::Ones(5, 1));
  const OutputVector y(Vector::Ones(5));
  for (double w : {0.3, 1.0, 2.5}) {
    Vector theta(1);
    theta << w;
    CHECK(loglik(theta, d, y) ==
          doctest::Approx(w - log_2cosh(w)).epsilon(1e-14));
  }
}

TEST_CASE("loglik equals the brute-force product of model probabilities") {
  Rng rng(21);
  const Matrix X = oracle::random_pm1(40, 2, rng);
  const BinaryDesign d(X);
  const auto y = random_outputs(40, rng);
  const auto fit = fit_mle(d, y);
  CHECK(loglik(fit.theta, d, y) ==
        doctest::Approx(oracle::loglik_bruteforce(fit.theta, X, y.values()))
            .epsilon(1e-12));
}

TEST_CASE("fisher information closed cases") {
  Vector theta0 = Vector::Zero(1);
  const Matrix F1 = fisher_information(theta0, uniform_distribution(1));
  CHECK(F1(0, 0) == doctest::Approx(1.0).epsilon(1e-15));

  const Matrix F2 = fisher_information(Vector::Zero(2),
                                       uniform_distribution(2));
  CHECK(F2.isApprox(Matrix::Identity(2, 2), 1e-14));
}

TEST_CASE("fisher equals the finite-difference Hessian of -loglik") {
  Rng rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    // random data; the realized empirical distribution defines nu
    const BinaryDesign d(oracle::random_pm1(48, 3, rng));
    const auto realized = empirical_distribution(d);
    const auto y = random_outputs(d.rows(), rng);
    Vector theta(3);
    theta << rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1);
    const Matrix F = fisher_information(theta, realized);
    const Matrix H = oracle::fd_hessian(
        [&](const Vector& th) { return Vector(-loglik_gradient(th, d, y)); },
        theta, 1e-5);
    CHECK((F - H).lpNorm<Eigen::Infinity>() < 1e-6);
  }
}

TEST_CASE("analytic gradient matches finite differences") {
  Rng rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    const BinaryDesign d(oracle::random_pm1(25, 3, rng));
    const auto y = random_outputs(25, rng);
    Vector theta(3);
    theta << rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2);
    const Vector g = loglik_gradient(theta, d, y);
    const Vector fd = oracle::fd_gradient(
        [&](const Vector& th) { return loglik(th, d, y); }, theta);
    CHECK((g - fd).lpNorm<Eigen::Infinity>() < 1e-6);
  }
}

TEST_CASE("loglik is concave along random chords") {
  Rng rng(8);
  const BinaryDesign d(oracle::random_pm1(30, 3, rng));
  const auto y = random_outputs(30, rng);
  for (int trial = 0; trial < 30; ++trial) {
    Vector a(3), b(3);
    for (int i = 0; i < 3; ++i) {
      a(i) = rng.uniform(-3, 3);
      b(i) = rng.uniform(-3, 3);
    }
    const double lambda = rng.uniform();
    const double lhs = loglik(lambda * a + (1 - lambda) * b, d, y);
    const double rhs = lambda * loglik(a, d, y) +
                       (1 - lambda) * loglik(b, d, y);
    CHECK(lhs >= rhs - 1e-12);
  }
}

TEST_CASE("fisher is positive semidefinite for random inputs") {
  Rng rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    const auto dist = oracle::random_distribution(4, 7, rng);
    Vector theta(4);
    for (int i = 0; i < 4; ++i) theta(i) = rng.uniform(-2, 2);
    Eigen::SelfAdjointEigenSolver<Matrix> es(
        fisher_information(theta, dist), Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues().minCoeff() >= -1e-10);
  }
}

TEST_CASE("fit_mle on independent outputs stays near zero") {
  Rng rng(11);
  const long T = 10000;
  const BinaryDesign d(oracle::random_pm1(T, 3, rng));
  const auto y = random_outputs(T, rng);
  const auto fit = fit_mle(d, y);
  CHECK(fit.converged);
  CHECK(fit.theta.lpNorm<Eigen::Infinity>() <= 3.0 / std::sqrt(double(T)));
}

TEST_CASE("fit_mle matches the 1-D bisection oracle") {
  // x = +1: 30 of 40 outputs +1; x = -1: 10 of 40 outputs +1
  Matrix X(80, 1);
  Vector y(80);
  Eigen::Index t = 0;
  for (int i = 0; i < 40; ++i, ++t) {
    X(t, 0) = 1.0;
    y(t) = i < 30 ? 1.0 : -1.0;
  }
  for (int i = 0; i < 40; ++i, ++t) {
    X(t, 0) = -1.0;
    y(t) = i < 10 ? 1.0 : -1.0;
  }
  const BinaryDesign d(X);
  const OutputVector out(y);
  const double mean_yx = (X.col(0).array() * y.array()).mean();
  const double w_star = oracle::bisect(
      [&](double w) { return mean_yx - std::tanh(w); }, -10.0, 10.0, 1e-14);
  const auto fit = fit_mle(d, out);
  CHECK(fit.converged);
  CHECK(fit.theta(0) == doctest::Approx(w_star).epsilon(1e-8));
}

TEST_CASE("perfect separation is detected and capped") {
  Rng rng(13);
  const Matrix X = oracle::random_pm1(60, 2, rng);
  Vector y(60);
  for (Eigen::Index t = 0; t < 60; ++t) y(t) = X(t, 0);
  const auto fit = fit_mle(BinaryDesign(X), OutputVector(y));
  CHECK(fit.separated);
  CHECK(fit.theta.lpNorm<Eigen::Infinity>() <= 30.0 + 1e-12);
  CHECK(fit.loglik >= -1e-6);
  CHECK(fit.loglik <= 0.0);
}

TEST_CASE("dimension mismatches are rejected") {
  Rng rng(14);
  const BinaryDesign d(oracle::random_pm1(10, 2, rng));
  const auto y = random_outputs(10, rng);
  CHECK_THROWS_AS(loglik(Vector::Zero(3), d, y), std::invalid_argument);
  CHECK_THROWS_AS(fisher_information(Vector::Zero(3),
                                     uniform_distribution(2)),
                  std::invalid_argument);
}

}  // TEST_SUITE
