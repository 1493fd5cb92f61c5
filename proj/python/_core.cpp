#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lrc/complexity.hpp"
#include "lrc/degenerate.hpp"
#include "lrc/design.hpp"
#include "lrc/likelihood.hpp"
#include "lrc/selection.hpp"
#include "lrc/simulation.hpp"

namespace py = pybind11;
using namespace lrc;

namespace {

EmpiricalInputDistribution dist_from_arrays(const Matrix& support,
                                            const Vector& freqs) {
  return EmpiricalInputDistribution(support, freqs);
}

MonteCarloConfig mc_config(long samples, int batches, std::uint64_t seed,
                           int threads) {
  MonteCarloConfig mc;
  mc.samples = samples;
  mc.batches = batches;
  mc.seed = seed;
  mc.threads = threads;
  return mc;
}

py::dict estimate_dict(const ComplexityEstimate& e) {
  py::dict d;
  d["value"] = e.value;
  d["log_value"] = e.log_value;
  d["std_error"] = e.std_error;
  d["method"] = to_string(e.method);
  d["batches"] = e.batches;
  return d;
}

py::dict fit_dict(const FitResult& f) {
  py::dict d;
  d["theta"] = f.theta;
  d["loglik"] = f.loglik;
  d["iterations"] = f.iterations;
  d["converged"] = f.converged;
  d["separated"] = f.separated;
  d["grad_norm"] = f.grad_norm;
  return d;
}

py::dict report_dict(const SelectionReport& rep) {
  py::dict d;
  py::list scores;
  for (const auto& s : rep.scores) {
    py::dict row;
    row["active"] = s.model.active;
    row["has_bias"] = s.model.has_bias;
    row["n"] = s.model.param_count();
    row["loglik_term"] = s.loglik_term;
    row["penalty"] = s.penalty;
    row["total"] = s.total;
    row["criterion"] = to_string(s.criterion);
    row["valid"] = s.valid;
    scores.append(row);
  }
  d["scores"] = scores;
  py::dict chosen;
  for (const auto& [crit, spec] : rep.chosen)
    chosen[py::str(to_string(crit))] = spec.active;
  d["chosen"] = chosen;
  d["warnings"] = rep.warnings;
  return d;
}

std::vector<Criterion> parse_criteria(const std::vector<std::string>& names) {
  std::vector<Criterion> out;
  out.reserve(names.size());
  for (const auto& n : names) out.push_back(criterion_from_string(n));
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "geometric complexity of binary-input logistic regression models";

  // --- model core -----------------------------------------------------
  m.def(
      "empirical_distribution",
      [](const Matrix& design) {
        const auto d = empirical_distribution(BinaryDesign(design));
        return py::make_tuple(d.support(), d.freqs());
      },
      py::arg("design"),
      "Distinct rows of a +-1 design with their frequencies.");
  m.def(
      "entropy_bits",
      [](const Matrix& support, const Vector& freqs) {
        return entropy_bits(dist_from_arrays(support, freqs));
      },
      py::arg("support"), py::arg("freqs"));
  m.def(
      "design_rank",
      [](const Matrix& design) { return design_rank(BinaryDesign(design)); },
      py::arg("design"));
  m.def("all_configurations", &all_configurations, py::arg("n"));

  // --- likelihood -----------------------------------------------------
  m.def(
      "loglik",
      [](const Vector& theta, const Matrix& X, const Vector& y) {
        return loglik(theta, BinaryDesign(X), OutputVector(y));
      },
      py::arg("theta"), py::arg("design"), py::arg("y"),
      "Normalised log-likelihood (nats per observation).");
  m.def(
      "fisher_information",
      [](const Vector& theta, const Matrix& support, const Vector& freqs) {
        return fisher_information(theta, dist_from_arrays(support, freqs));
      },
      py::arg("theta"), py::arg("support"), py::arg("freqs"));
  m.def(
      "fit_mle",
      [](const Matrix& X, const Vector& y) {
        return fit_dict(fit_mle(BinaryDesign(X), OutputVector(y)));
      },
      py::arg("design"), py::arg("y"));

  // --- complexity -----------------------------------------------------
  m.def(
      "complexity_closed_form",
      [](const Matrix& support, const Vector& freqs) -> py::object {
        const auto e =
            complexity_closed_form(dist_from_arrays(support, freqs));
        if (!e) return py::none();
        return estimate_dict(*e);
      },
      py::arg("support"), py::arg("freqs"));
  m.def(
      "complexity_quadrature",
      [](const Matrix& support, const Vector& freqs, double rel_tol) {
        QuadConfig cfg;
        cfg.rel_tol = rel_tol;
        return estimate_dict(
            complexity_quadrature(dist_from_arrays(support, freqs), cfg));
      },
      py::arg("support"), py::arg("freqs"), py::arg("rel_tol") = 1e-4);
  m.def(
      "complexity_monte_carlo",
      [](const Matrix& support, const Vector& freqs, long samples,
         int batches, std::uint64_t seed, int threads) {
        return estimate_dict(complexity_monte_carlo(
            dist_from_arrays(support, freqs),
            mc_config(samples, batches, seed, threads)));
      },
      py::arg("support"), py::arg("freqs"), py::arg("samples") = 100000,
      py::arg("batches") = 20, py::arg("seed") = 0, py::arg("threads") = 1);
  m.def(
      "upper_bound_triangular",
      [](const Matrix& support, const Vector& freqs) {
        return upper_bound_triangular(dist_from_arrays(support, freqs));
      },
      py::arg("support"), py::arg("freqs"));
  m.def(
      "bound_envelope",
      [](int n, long T) {
        const auto b = bound_envelope(n, T);
        return py::make_tuple(b.lower, b.upper_local, b.upper_global);
      },
      py::arg("n"), py::arg("T"));
  m.def("complexity_regularized_asymptotic",
        &complexity_regularized_asymptotic, py::arg("n"),
        py::arg("theta_box"));
  m.def("critical_dimension", &critical_dimension, py::arg("theta_box"));
  m.def(
      "complexity_regularized_spherical",
      [](int n, double theta_box) {
        return estimate_dict(complexity_regularized_spherical(n, theta_box));
      },
      py::arg("n"), py::arg("theta_box"));

  // --- selection --------------------------------------------------------
  m.def("penalty_heuristic", &penalty_heuristic, py::arg("n"), py::arg("T"),
        py::arg("H_n_bits"), py::arg("H_N_bits"));
  m.def("penalty_bic", &penalty_bic, py::arg("n"), py::arg("T"));
  m.def("penalty_aic", &penalty_aic, py::arg("n"));
  m.def(
      "search_decimation",
      [](const Matrix& X, const Vector& y,
         const std::vector<std::string>& criteria) {
        return report_dict(search_decimation(BinaryDesign(X), OutputVector(y),
                                             parse_criteria(criteria)));
      },
      py::arg("design"), py::arg("y"),
      py::arg("criteria") = std::vector<std::string>{"heuristic", "bic",
                                                     "aic"});
  m.def(
      "search_forward",
      [](const Matrix& X, const Vector& y,
         const std::vector<std::string>& criteria) {
        return report_dict(search_forward(BinaryDesign(X), OutputVector(y),
                                          parse_criteria(criteria)));
      },
      py::arg("design"), py::arg("y"),
      py::arg("criteria") = std::vector<std::string>{"heuristic", "bic",
                                                     "aic"});
  m.def(
      "search_exhaustive",
      [](const Matrix& X, const Vector& y,
         const std::vector<std::string>& criteria, int max_inputs) {
        return report_dict(search_exhaustive(BinaryDesign(X), OutputVector(y),
                                             parse_criteria(criteria), {},
                                             max_inputs));
      },
      py::arg("design"), py::arg("y"),
      py::arg("criteria") = std::vector<std::string>{"heuristic", "bic",
                                                     "aic"},
      py::arg("max_inputs") = 15);
  m.def(
      "fit_l1_cv",
      [](const Matrix& X, const Vector& y) {
        return report_dict(fit_l1_cv(BinaryDesign(X), OutputVector(y)));
      },
      py::arg("design"), py::arg("y"));
  m.def(
      "reconstruction_error",
      [](const std::vector<int>& chosen, const std::vector<int>& truth,
         int N) {
        return reconstruction_error(ModelSpec{chosen, false, {}},
                                    ModelSpec{truth, false, {}}, N);
      },
      py::arg("chosen"), py::arg("truth"), py::arg("N"));

  // --- simulation -------------------------------------------------------
  m.def(
      "sample_ising",
      [](int inputs, double beta, long T, std::uint64_t seed) {
        IsingInputConfig cfg;
        cfg.inputs = inputs;
        cfg.beta = beta;
        cfg.seed = seed;
        return sample_ising(cfg, T).data();
      },
      py::arg("inputs"), py::arg("beta"), py::arg("T"), py::arg("seed"));
  m.def(
      "ising_distribution",
      [](int n, double beta) {
        const auto d = ising_distribution(n, beta);
        return py::make_tuple(d.support(), d.freqs());
      },
      py::arg("n"), py::arg("beta"));
  m.def(
      "sample_ground_truth",
      [](int N, double sparsity, std::uint64_t seed) {
        const auto gt = sample_ground_truth(N, sparsity, seed);
        return py::make_tuple(gt.active, gt.weights);
      },
      py::arg("N"), py::arg("sparsity"), py::arg("seed"));
  m.def(
      "generate_output",
      [](const Matrix& X, const Vector& weights, std::uint64_t seed) {
        return generate_output(BinaryDesign(X), weights, seed).values();
      },
      py::arg("design"), py::arg("weights"), py::arg("seed"));

  // --- degenerate models --------------------------------------------------
  m.def(
      "degenerate_complexity",
      [](const std::vector<double>& values, const std::vector<double>& freqs,
         double b) {
        return estimate_dict(
            degenerate_complexity(CategoricalDistribution(values, freqs), b));
      },
      py::arg("values"), py::arg("freqs"), py::arg("b") = 0.0);
  m.def(
      "degenerate_upper_bound",
      [](const std::vector<double>& values, const std::vector<double>& freqs) {
        return degenerate_upper_bound(CategoricalDistribution(values, freqs));
      },
      py::arg("values"), py::arg("freqs"));
  m.def(
      "enumerate_key_models",
      [](const Matrix& keys, const Vector& outcome, double b, int threads) {
        KeysConfig cfg;
        cfg.threshold = b;
        cfg.threads = threads;
        const auto table =
            enumerate_key_models(BinaryDesign(keys), OutputVector(outcome),
                                 cfg);
        py::list rows;
        for (const auto& r : table) {
          py::dict d;
          d["mask"] = r.subset_mask;
          d["size"] = r.subset_size;
          d["theta"] = r.theta;
          d["loglik"] = r.loglik;
          d["complexity_log"] = r.complexity_log;
          d["score"] = r.score;
          d["exact_fit"] = r.exact_fit;
          rows.append(d);
        }
        return rows;
      },
      py::arg("keys"), py::arg("outcome"), py::arg("b") = 2.0,
      py::arg("threads") = 1);
  m.def(
      "delta_rank",
      [](const std::vector<double>& loglik,
         const std::vector<double>& complexity_log, double T) {
        const auto r = delta_rank(loglik, complexity_log, T);
        return py::make_tuple(r.per_model, r.mean);
      },
      py::arg("loglik"), py::arg("complexity_log"), py::arg("T"));

#ifdef VERSION_INFO
  m.attr("__version__") = VERSION_INFO;
#else
  m.attr("__version__") = "dev";
#endif
}
