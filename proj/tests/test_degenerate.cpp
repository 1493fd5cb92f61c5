#include <doctest.h>

#include <cmath>

#include "lrc/degenerate.hpp"
#include "lrc/quadrature.hpp"
#include "lrc/rng.hpp"
#include "oracles.hpp"

using namespace lrc;

namespace {
constexpr double kPi = 3.14159265358979323846;

// augmented design [X, +1] and tied parameter vector theta (1,...,1,-b)
Vector tied_theta(double theta, int n, double b) {
  Vector v = Vector::Constant(n + 1, theta);
  v(n) = -theta * b;
  return v;
}

Matrix augment(const Matrix& X) {
  Matrix A(X.rows(), X.cols() + 1);
  A.leftCols(X.cols()) = X;
  A.col(X.cols()).setOnes();
  return A;
}

CategoricalDistribution random_categorical(int n, Rng& rng) {
  std::vector<double> values, freqs;
  double total = 0.0;
  for (int x = -n; x <= n; x += 2) {
    if (rng.uniform() < 0.4) continue;
    values.push_back(x);
    freqs.push_back(0.05 + rng.uniform());
    total += freqs.back();
  }
  if (values.empty()) {
    values.push_back(n);
    freqs.push_back(1.0);
    total = 1.0;
  }
  for (auto& f : freqs) f /= total;
  double acc = 0.0;
  for (size_t i = 0; i + 1 < freqs.size(); ++i) acc += freqs[i];
  freqs.back() = 1.0 - acc;
  return CategoricalDistribution(std::move(values), std::move(freqs));
}

}  // namespace

TEST_SUITE("degenerate") {

TEST_CASE("degenerate loglik basics") {
  Rng rng(1);
  const BinaryDesign d(oracle::random_pm1(20, 3, rng));
  Vector yv(20);
  for (Eigen::Index t = 0; t < 20; ++t) yv(t) = rng.fair_coin() ? 1.0 : -1.0;
  const OutputVector y(yv);
  CHECK(degenerate_loglik(0.0, 0.5, d, y) ==
        doctest::Approx(-std::log(2.0)).epsilon(1e-15));
}

TEST_CASE("flat likelihood when every sum hits the threshold") {
  Matrix X(4, 2);
  X << 1, 1, 1, 1, 1, 1, 1, 1;  // X_n = 2 for every row
  Vector yv(4);
  yv << 1, -1, 1, -1;
  const BinaryDesign d(X);
  const OutputVector y(yv);
  for (double theta : {-2.0, 0.0, 1.0, 5.0})
    CHECK(degenerate_loglik(theta, 2.0, d, y) ==
          doctest::Approx(-std::log(2.0)).epsilon(1e-15));
}

TEST_CASE("degenerate loglik equals the tied-weight full model") {
  Rng rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform_index(3));
    const Matrix X = oracle::random_pm1(30, n, rng);
    Vector yv(30);
    for (Eigen::Index t = 0; t < 30; ++t)
      yv(t) = rng.fair_coin() ? 1.0 : -1.0;
    const double b = static_cast<double>(rng.uniform_index(3));
    const double theta = rng.uniform(-2, 2);
    const double lhs = degenerate_loglik(theta, b, BinaryDesign(X),
                                         OutputVector(yv));
    const double rhs = loglik(tied_theta(theta, n, b),
                              BinaryDesign(augment(X)), OutputVector(yv));
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-14));
  }
}

TEST_CASE("scalar fisher equals the directional full-model fisher") {
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform_index(3));
    const Matrix X = oracle::random_pm1(40, n, rng);
    const double b = rng.fair_coin() ? 0.0 : 1.0;
    const double theta = rng.uniform(-2, 2);
    const BinaryDesign sub(X);
    const auto cat = CategoricalDistribution::from_design(sub, [&] {
      std::vector<int> all(static_cast<size_t>(n));
      for (int i = 0; i < n; ++i) all[static_cast<size_t>(i)] = i;
      return all;
    }());
    const double scalar = degenerate_fisher(theta, b, cat);

    const auto dist = empirical_distribution(BinaryDesign(augment(X)));
    const Vector v = tied_theta(1.0, n, b);
    const Matrix F = fisher_information(tied_theta(theta, n, b), dist);
    CHECK(scalar == doctest::Approx(v.transpose() * F * v).epsilon(1e-12));
  }
}

TEST_CASE("degenerate complexity closed cases") {
  // single observed value away from the threshold: exactly pi
  const CategoricalDistribution single({3.0}, {1.0});
  const auto e = degenerate_complexity(single, 0.0);
  CHECK(e.value == kPi);
  CHECK(e.method == ComplexityMethod::closed_form);

  // every observation at the threshold: flat model, zero volume
  const CategoricalDistribution flat({2.0}, {1.0});
  CHECK(degenerate_complexity(flat, 2.0).value == 0.0);

  // n = 1, b = 0 reduces to the plain one-parameter model
  const CategoricalDistribution pm({-1.0, 1.0}, {0.35, 0.65});
  CHECK(degenerate_complexity(pm, 0.0).value ==
        doctest::Approx(kPi).epsilon(1e-6));
}

TEST_CASE("uniform sums at n = 4 stay below the caps") {
  const auto dist = uniform_sum_distribution(4);
  const auto e = degenerate_complexity(dist, 0.0);
  CHECK(e.value <= kPi * std::sqrt(5.0));
  CHECK(e.value < kPi * kPi / 2.0);
}

TEST_CASE("upper bounds") {
  const CategoricalDistribution single({1.0}, {1.0});
  CHECK(degenerate_upper_bound(single) == doctest::Approx(kPi));

  CHECK(degenerate_upper_bound(uniform_sum_distribution(4)) ==
        doctest::Approx(kPi * std::sqrt(5.0)).epsilon(1e-13));
  CHECK(degenerate_upper_bound_uniform(4) ==
        doctest::Approx(kPi * std::sqrt(5.0)).epsilon(1e-15));

  CHECK(degenerate_upper_bound(binomial_sum_distribution(10)) ==
        doctest::Approx(degenerate_upper_bound_binomial(10)).epsilon(1e-12));
  const double exact = degenerate_upper_bound_binomial(10);
  const double fit = degenerate_upper_bound_binomial_fit(10);
  CHECK(std::abs(exact - fit) / exact < 0.03);
}

TEST_CASE("complexity never exceeds the triangular bound") {
  Rng rng(7);
  for (int trial = 0; trial < 12; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform_index(6));
    const auto dist = random_categorical(n, rng);
    const double b = rng.fair_coin() ? 0.0 : 1.0;
    const auto e = degenerate_complexity(dist, b);
    CHECK(e.value <= degenerate_upper_bound(dist) + 1e-9);
  }
}

TEST_CASE("even n dips below the odd-neighbour interpolation at b = 0") {
  auto value = [](int n) {
    return degenerate_complexity(binomial_sum_distribution(n), 0.0).value;
  };
  for (int n : {4, 10}) {
    const double even = value(n);
    const double interp = 0.5 * (value(n - 1) + value(n + 1));
    CHECK(even < interp);
  }
}

TEST_CASE("degenerate complexity equals the tied-weight integrand route") {
  Rng rng(11);
  const int n = 3;
  const Matrix X = oracle::random_pm1(25, n, rng);
  const double b = 1.0;
  const BinaryDesign sub(X);
  const auto cat = CategoricalDistribution::from_design(sub, {0, 1, 2});
  const auto via_cat = degenerate_complexity(cat, b);

  const auto dist = empirical_distribution(BinaryDesign(augment(X)));
  const Vector v = tied_theta(1.0, n, b);
  const double via_full = integrate_real_line(
      [&](double theta) {
        const Matrix F = fisher_information(tied_theta(theta, n, b), dist);
        return std::sqrt(std::max(0.0, double(v.transpose() * F * v)));
      },
      1e-6, 64, 16384);
  CHECK(via_cat.value == doctest::Approx(via_full).epsilon(1e-9));
}

TEST_CASE("planted threshold rule is fit exactly") {
  Rng rng(13);
  const int K = 5;
  const Matrix X = oracle::random_pm1(40, K, rng);
  const double b = 1.0;
  Vector yv(40);
  std::vector<int> subset{0, 2, 3};
  for (Eigen::Index t = 0; t < 40; ++t) {
    double sum = 0.0;
    for (int i : subset) sum += X(t, i);
    yv(t) = sum - b > 0 ? 1.0 : -1.0;
  }
  const BinaryDesign keys(X);
  const OutputVector outcome(yv);

  KeysConfig cfg;
  cfg.threshold = b;
  const auto table = enumerate_key_models(keys, outcome, cfg);
  CHECK(table.size() == 32);

  std::uint32_t planted_mask = 0;
  for (int i : subset) planted_mask |= 1u << i;
  bool found_exact = false;
  for (const auto& row : table)
    if (row.subset_mask == planted_mask) found_exact = row.exact_fit;
  CHECK(found_exact);

  // the null model scores -T log 2
  for (const auto& row : table)
    if (row.subset_mask == 0)
      CHECK(row.score == doctest::Approx(-40.0 * std::log(2.0)));

  // among exact-fit models the posterior ranks by complexity alone
  // (the BIC term is shared and T loglik varies by less than 4e-5)
  const KeyModelScore* prev = nullptr;
  for (const auto& row : table) {
    if (!row.exact_fit) continue;
    if (prev) CHECK(prev->complexity_log <= row.complexity_log + 1e-3);
    prev = &row;
  }
}

TEST_CASE("delta rank") {
  // all models identical: zero by convention
  const std::vector<double> flat_l(5, -0.4), flat_c(5, 1.0);
  const auto r0 = delta_rank(flat_l, flat_c, 100.0);
  for (int v : r0.per_model) CHECK(v == 0);
  CHECK(r0.mean == 0.0);

  // strictly increasing likelihood, constant complexity: first window wins
  std::vector<double> inc_l;
  for (int i = 0; i < 6; ++i) inc_l.push_back(-1.0 + 0.1 * i);
  const std::vector<double> const_c(6, 2.0);
  const auto r1 = delta_rank(inc_l, const_c, 50.0);
  for (int v : r1.per_model) CHECK(v == 1);
  CHECK(r1.mean == 1.0);

  CHECK_THROWS_AS(delta_rank({0.0, 0.1}, {1.0, 1.0}, 10.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(delta_rank({0.0, -0.1, 0.2}, {1.0, 1.0, 1.0}, 10.0),
                  std::invalid_argument);
}

}  // TEST_SUITE
