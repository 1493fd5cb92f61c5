#include "lrc/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include "lrc/likelihood.hpp"
#include "lrc/parallel.hpp"
#include "lrc/rng.hpp"

namespace lrc {

namespace {

BinaryDesign sample_ising_gibbs(const IsingInputConfig& config, long T) {
  const int N = config.inputs;
  const double J = config.coupling_or_default();
  const double beta = config.beta;
  const double h = config.field;
  Rng rng(config.seed);

  std::vector<double> x(static_cast<size_t>(N));
  for (auto& s : x) s = rng.fair_coin() ? 1.0 : -1.0;
  double total = std::accumulate(x.begin(), x.end(), 0.0);

  auto sweep = [&] {
    for (int i = 0; i < N; ++i) {
      // local field on x_i in the energy sum_{i<j} J x_i x_j + sum h x_i
      const double a = J * (total - x[static_cast<size_t>(i)]) + h;
      const double p_plus = 1.0 / (1.0 + std::exp(2.0 * beta * a));
      const double s = rng.uniform() < p_plus ? 1.0 : -1.0;
      total += s - x[static_cast<size_t>(i)];
      x[static_cast<size_t>(i)] = s;
    }
  };

  for (int b = 0; b < config.burn_in; ++b) sweep();
  Matrix out(T, N);
  for (long t = 0; t < T; ++t) {
    for (int s = 0; s < config.thinning; ++s) sweep();
    for (int i = 0; i < N; ++i) out(t, i) = x[static_cast<size_t>(i)];
  }
  return BinaryDesign(std::move(out));
}

BinaryDesign sample_ising_exact(const IsingInputConfig& config, long T) {
  const int N = config.inputs;
  const auto dist = ising_distribution(N, config.beta, config.coupling,
                                       config.field);
  // cumulative table
  std::vector<double> cum(static_cast<size_t>(dist.size()));
  double acc = 0.0;
  for (Eigen::Index m = 0; m < dist.size(); ++m) {
    acc += dist.freqs()(m);
    cum[static_cast<size_t>(m)] = acc;
  }
  cum.back() = 1.0;
  Rng rng(config.seed);
  Matrix out(T, N);
  for (long t = 0; t < T; ++t) {
    const double u = rng.uniform();
    const auto it = std::lower_bound(cum.begin(), cum.end(), u);
    const Eigen::Index m =
        static_cast<Eigen::Index>(std::distance(cum.begin(), it));
    out.row(t) = dist.support().row(std::min(m, dist.size() - 1));
  }
  return BinaryDesign(std::move(out));
}

}  // namespace

BinaryDesign sample_ising(const IsingInputConfig& config, long T) {
  if (config.inputs < 1)
    throw std::invalid_argument("sample_ising: inputs >= 1");
  if (T < 1) throw std::invalid_argument("sample_ising: T >= 1");
  if (config.beta < 0.0)
    throw std::invalid_argument("sample_ising: beta >= 0");
  if (config.burn_in < 1 || config.thinning < 1)
    throw std::invalid_argument("sample_ising: burn_in, thinning >= 1");
  switch (config.sampler) {
    case IsingSampler::exact: return sample_ising_exact(config, T);
    case IsingSampler::gibbs: return sample_ising_gibbs(config, T);
    case IsingSampler::automatic: break;
  }
  if (config.inputs <= 10) return sample_ising_exact(config, T);
  return sample_ising_gibbs(config, T);
}

EmpiricalInputDistribution ising_distribution(int n, double beta,
                                              double coupling, double field) {
  if (n < 1 || n > 20)
    throw std::invalid_argument("ising_distribution: n in [1, 20]");
  const double J = coupling > 0.0 ? coupling : 1.0 / n;
  Matrix support = all_configurations(n);
  Vector log_p(support.rows());
  for (Eigen::Index m = 0; m < support.rows(); ++m) {
    double pair_sum = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        pair_sum += support(m, i) * support(m, j);
    const double field_sum = support.row(m).sum();
    log_p(m) = -beta * (J * pair_sum + field * field_sum);
  }
  const double mx = log_p.maxCoeff();
  Vector p = (log_p.array() - mx).exp();
  p /= p.sum();
  return EmpiricalInputDistribution(std::move(support), std::move(p));
}

GroundTruth sample_ground_truth(int N, double sparsity, std::uint64_t seed) {
  if (N < 1) throw std::invalid_argument("sample_ground_truth: N >= 1");
  if (sparsity < 0.0 || sparsity >= 1.0)
    throw std::invalid_argument("sample_ground_truth: sparsity in [0, 1)");
  const int n = static_cast<int>(std::lround((1.0 - sparsity) * N));
  if (n < 1)
    throw std::invalid_argument(
        "sample_ground_truth: sparsity leaves no active weight");
  Rng rng(seed);
  std::vector<int> order(static_cast<size_t>(N));
  std::iota(order.begin(), order.end(), 0);
  for (int i = 0; i < n; ++i) {
    const int j = i + static_cast<int>(
                          rng.uniform_index(static_cast<std::uint64_t>(N - i)));
    std::swap(order[static_cast<size_t>(i)], order[static_cast<size_t>(j)]);
  }
  GroundTruth gt;
  gt.active.assign(order.begin(), order.begin() + n);
  std::sort(gt.active.begin(), gt.active.end());
  gt.sparsity = sparsity;
  gt.weights = Vector::Zero(N);
  const double norm = std::sqrt(static_cast<double>(n));
  for (int idx : gt.active) {
    const double magnitude = rng.uniform(0.5, 1.5);
    const double sign = rng.fair_coin() ? 1.0 : -1.0;
    gt.weights(idx) = sign * magnitude / norm;
  }
  return gt;
}

OutputVector generate_output(const BinaryDesign& design, const Vector& weights,
                             std::uint64_t seed) {
  if (weights.size() != design.cols())
    throw std::invalid_argument("generate_output: weight length mismatch");
  Rng rng(seed);
  Vector y(design.rows());
  for (Eigen::Index t = 0; t < design.rows(); ++t) {
    const double z = design.data().row(t) * weights;
    // p(y = +1) = e^z / (2 cosh z) = 1 / (1 + e^(-2z))
    const double p_plus = 1.0 / (1.0 + std::exp(-2.0 * z));
    y(t) = rng.uniform() < p_plus ? 1.0 : -1.0;
  }
  return OutputVector(std::move(y));
}

std::string to_string(SearchKind s) {
  switch (s) {
    case SearchKind::decimation: return "decimation";
    case SearchKind::forward: return "forward";
    case SearchKind::exhaustive: return "exhaustive";
  }
  return "unknown";
}

SearchKind search_from_string(const std::string& name) {
  if (name == "decimation") return SearchKind::decimation;
  if (name == "forward") return SearchKind::forward;
  if (name == "exhaustive") return SearchKind::exhaustive;
  throw std::invalid_argument("unknown search: " + name);
}

std::vector<ExperimentSummaryRow> ExperimentResult::summarize() const {
  std::map<std::tuple<double, int, double, std::string>,
           std::vector<double>>
      cells;
  for (const auto& r : rows)
    if (r.ok)
      cells[{r.beta, r.k, r.sparsity, r.criterion}].push_back(r.error);
  std::vector<ExperimentSummaryRow> out;
  out.reserve(cells.size());
  for (const auto& [key, errs] : cells) {
    ExperimentSummaryRow s;
    std::tie(s.beta, s.k, s.sparsity, s.criterion) = key;
    s.count = static_cast<int>(errs.size());
    const double mean =
        std::accumulate(errs.begin(), errs.end(), 0.0) / errs.size();
    double ss = 0.0;
    for (double e : errs) ss += (e - mean) * (e - mean);
    s.mean_error = mean;
    s.std_error = errs.size() > 1
                      ? std::sqrt(ss / static_cast<double>(errs.size() - 1))
                      : 0.0;
    out.push_back(std::move(s));
  }
  return out;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  if (config.N < 1 || config.realizations < 1)
    throw std::invalid_argument("run_experiment: bad config");
  for (double s : config.sparsity_values)
    if (s < 0.0 || s >= 1.0)
      throw std::invalid_argument("run_experiment: sparsity in [0, 1)");

  struct Task {
    size_t bi, ki, si;
    int realization;
  };
  std::vector<Task> tasks;
  for (size_t bi = 0; bi < config.beta_values.size(); ++bi)
    for (size_t ki = 0; ki < config.k_values.size(); ++ki)
      for (size_t si = 0; si < config.sparsity_values.size(); ++si)
        for (int r = 0; r < config.realizations; ++r)
          tasks.push_back({bi, ki, si, r});

  const size_t per_task = config.criteria.size();
  std::vector<ExperimentRow> rows(tasks.size() * per_task);

  parallel_for(
      static_cast<std::int64_t>(tasks.size()), config.threads,
      [&](std::int64_t ti) {
        const Task& task = tasks[static_cast<size_t>(ti)];
        const double beta = config.beta_values[task.bi];
        const int k = config.k_values[task.ki];
        const double sparsity = config.sparsity_values[task.si];
        const long T = static_cast<long>(k) * config.N;

        auto* slot = &rows[static_cast<size_t>(ti) * per_task];
        for (size_t ci = 0; ci < per_task; ++ci) {
          slot[ci].beta = beta;
          slot[ci].k = k;
          slot[ci].sparsity = sparsity;
          slot[ci].criterion = to_string(config.criteria[ci]);
          slot[ci].realization = task.realization;
          slot[ci].ok = false;
          slot[ci].error = 0.0;
        }

        try {
          IsingInputConfig ic = config.ising;
          ic.inputs = config.N;
          ic.beta = beta;
          ic.seed = derive_stream(
              config.seed, {1, task.bi, task.ki, task.si,
                            static_cast<std::uint64_t>(task.realization)});
          const BinaryDesign X = sample_ising(ic, T);
          const GroundTruth gt = sample_ground_truth(
              config.N, sparsity,
              derive_stream(config.seed,
                            {2, task.bi, task.ki, task.si,
                             static_cast<std::uint64_t>(task.realization)}));
          const OutputVector y = generate_output(
              X, gt.weights,
              derive_stream(config.seed,
                            {3, task.bi, task.ki, task.si,
                             static_cast<std::uint64_t>(task.realization)}));
          const ModelSpec truth{gt.active, false, std::nullopt};

          std::vector<Criterion> ranked;
          bool want_l1 = false;
          for (Criterion c : config.criteria) {
            if (c == Criterion::l1)
              want_l1 = true;
            else
              ranked.push_back(c);
          }

          SelectionReport rep;
          if (!ranked.empty()) {
            SearchConfig sc;
            sc.mc.seed = derive_stream(
                config.seed, {4, task.bi, task.ki, task.si,
                              static_cast<std::uint64_t>(task.realization)});
            switch (config.search) {
              case SearchKind::decimation:
                rep = search_decimation(X, y, ranked, sc);
                break;
              case SearchKind::forward:
                rep = search_forward(X, y, ranked, sc);
                break;
              case SearchKind::exhaustive:
                rep = search_exhaustive(X, y, ranked, sc);
                break;
            }
          }
          for (size_t ci = 0; ci < per_task; ++ci) {
            const Criterion c = config.criteria[ci];
            if (c == Criterion::l1) continue;
            slot[ci].error =
                reconstruction_error(rep.chosen_for(c), truth, config.N);
            slot[ci].ok = true;
          }
          if (want_l1 && k <= config.l1_max_k) {
            const SelectionReport l1 = fit_l1_cv(X, y);
            for (size_t ci = 0; ci < per_task; ++ci)
              if (config.criteria[ci] == Criterion::l1) {
                slot[ci].error = reconstruction_error(
                    l1.chosen_for(Criterion::l1), truth, config.N);
                slot[ci].ok = true;
              }
          }
        } catch (const std::exception&) {
          // realization recorded as missing; the sweep continues
        }
      });

  ExperimentResult res;
  res.rows = std::move(rows);
  return res;
}

}  // namespace lrc
