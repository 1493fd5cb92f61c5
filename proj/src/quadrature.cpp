#include "lrc/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace lrc {

namespace {

std::pair<std::vector<double>, std::vector<double>> compute_gauss_legendre(
    int order) {
  std::vector<double> nodes(order), weights(order);
  const double pi = 3.14159265358979323846;
  // Newton iteration on Legendre polynomials, symmetric pairs
  for (int i = 0; i < (order + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[order - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    weights[i] = w;
    weights[order - 1 - i] = w;
  }
  return {nodes, weights};
}

}  // namespace

const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(
    int order) {
  static std::mutex mutex;
  static std::map<int, std::pair<std::vector<double>, std::vector<double>>>
      cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(order);
  if (it == cache.end())
    it = cache.emplace(order, compute_gauss_legendre(order)).first;
  return it->second;
}

double integrate_interval(const std::function<double(double)>& f, double a,
                          double b, double rel_tol, int initial_nodes,
                          int max_nodes) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  auto estimate = [&](int order) {
    const auto& [nodes, weights] = gauss_legendre(order);
    double sum = 0.0;
    for (int i = 0; i < order; ++i)
      sum += weights[i] * f(mid + half * nodes[i]);
    return sum * half;
  };
  double prev = estimate(initial_nodes);
  double second_last = prev;
  for (int order = 2 * initial_nodes; order <= max_nodes; order *= 2) {
    const double cur = estimate(order);
    const double scale = std::max({std::abs(cur), std::abs(prev), 1e-300});
    if (std::abs(cur - prev) <= rel_tol * scale) return cur;
    second_last = prev;
    prev = cur;
  }
  throw QuadratureError("quadrature did not converge", second_last, prev);
}

double integrate_real_line(const std::function<double(double)>& f,
                           double rel_tol, int initial_nodes, int max_nodes) {
  const double pi = 3.14159265358979323846;
  auto g = [&](double u) {
    const double c = std::cos(pi * u / 2);
    const double theta = std::tan(pi * u / 2);
    const double jac = (pi / 2) / (c * c);
    if (!std::isfinite(theta) || !std::isfinite(jac)) return 0.0;
    const double v = f(theta) * jac;
    return std::isfinite(v) ? v : 0.0;
  };
  return integrate_interval(g, -1.0, 1.0, rel_tol, initial_nodes, max_nodes);
}

}  // namespace lrc
