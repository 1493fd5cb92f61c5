#pragma once

#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace lrc {

// Gauss-Legendre nodes and weights on (-1, 1). Cached per order.
const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(
    int order);

struct QuadratureError : std::runtime_error {
  QuadratureError(const std::string& msg, double previous, double last)
      : std::runtime_error(msg), previous_estimate(previous),
        last_estimate(last) {}
  double previous_estimate;
  double last_estimate;
};

// Integral of f over [a, b]. Refines by doubling the node count until the
// relative change between successive estimates drops below rel_tol.
double integrate_interval(const std::function<double(double)>& f, double a,
                          double b, double rel_tol, int initial_nodes = 32,
                          int max_nodes = 8192);

// Integral of f over the whole real line via theta = tan(pi u / 2).
// Intended for integrands with exponential tail decay.
double integrate_real_line(const std::function<double(double)>& f,
                           double rel_tol, int initial_nodes = 32,
                           int max_nodes = 8192);

}  // namespace lrc
