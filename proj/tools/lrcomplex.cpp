// lrcomplex: geometric complexity of binary-input logistic models, input
// subset selection, and the simulation/keys analyses built on them.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "lrc/complexity.hpp"
#include "lrc/degenerate.hpp"
#include "lrc/design.hpp"
#include "lrc/io.hpp"
#include "lrc/rng.hpp"
#include "lrc/selection.hpp"
#include "lrc/simulation.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr double kPi = 3.14159265358979323846;

int dispatch(std::vector<std::string> args);

int env_default_threads() {
  if (const char* v = std::getenv("LRCOMPLEX_THREADS")) {
    try {
      return std::max(1, std::stoi(v));
    } catch (const std::exception&) {
    }
  }
  return 1;
}

void require_readable(const std::string& path, const std::string& flag) {
  std::ifstream f(path);
  if (!f)
    throw CLI::ValidationError(flag, "cannot open file: " + path);
}

struct ManifestWriter {
  lrc::RunManifest manifest;
  std::string path;

  ManifestWriter(std::string command, std::string manifest_path)
      : path(std::move(manifest_path)) {
    manifest.command = std::move(command);
    manifest.version = kVersion;
    manifest.started_utc = lrc::utc_timestamp_now();
  }
  void set(const std::string& key, const std::string& value) {
    manifest.config.emplace_back(key, value);
  }
  void set_full(const std::string& key, double value) {
    set(key, lrc::format_full(value));
  }
  void set(const std::string& key, long value) {
    set(key, std::to_string(value));
  }
  void set(const std::string& key, int value) {
    set(key, std::to_string(value));
  }
  void seed(std::uint64_t s) {
    manifest.seed = s;
    manifest.has_seed = true;
  }
  void output(const std::string& file) { manifest.outputs.push_back(file); }
  void finish() {
    manifest.finished_utc = lrc::utc_timestamp_now();
    lrc::write_manifest(manifest, path);
  }
};

nlohmann::ordered_json estimate_json(const lrc::ComplexityEstimate& e) {
  nlohmann::ordered_json j;
  j["value"] = e.value;
  if (std::isfinite(e.log_value))
    j["log_value"] = e.log_value;
  else
    j["log_value"] = nullptr;  // value = 0
  j["std_error"] = e.std_error;
  j["method"] = lrc::to_string(e.method);
  return j;
}

std::string join(const std::vector<std::string>& parts, char sep = ',') {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::string join_doubles(const std::vector<double>& values) {
  std::vector<std::string> parts;
  parts.reserve(values.size());
  for (double v : values) parts.push_back(lrc::format_full(v));
  return join(parts);
}

std::string join_ints(const std::vector<int>& values) {
  std::vector<std::string> parts;
  parts.reserve(values.size());
  for (int v : values) parts.push_back(std::to_string(v));
  return join(parts);
}

// ---------------------------------------------------------------------------
// complexity

struct ComplexityArgs {
  std::string input;
  int n = 0;
  bool uniform = false;
  bool ising = false;
  double beta = 0.5;
  std::vector<double> nu;
  std::string method = "auto";
  bool closed_form_flag = false;
  long samples = 100000;
  int batches = 20;
  std::uint64_t seed = 0;
  bool has_seed = false;
  int threads = 1;
  int paths = 10;
  double beta_min = 0.01, beta_max = 2.0;
  int beta_steps = 9;
  bool figure1 = false, figure2a = false, figure2b = false;
  std::string output;
  std::string manifest;
};

lrc::EmpiricalInputDistribution complexity_input(const ComplexityArgs& a) {
  if (!a.input.empty()) {
    require_readable(a.input, "--input");
    return lrc::empirical_distribution(lrc::load_csv(a.input).design);
  }
  if (a.n < 1)
    throw CLI::ValidationError("--n", "a synthetic distribution needs n >= 1");
  if (a.ising) return lrc::ising_distribution(a.n, a.beta);
  if (!a.nu.empty()) {
    const lrc::Matrix all = lrc::all_configurations(a.n);
    if (static_cast<Eigen::Index>(a.nu.size()) != all.rows())
      throw CLI::ValidationError(
          "--nu", "expected " + std::to_string(all.rows()) +
                      " frequencies for n = " + std::to_string(a.n));
    std::vector<Eigen::Index> keep;
    double total = 0.0;
    for (size_t i = 0; i < a.nu.size(); ++i) {
      if (a.nu[i] < 0.0)
        throw CLI::ValidationError("--nu", "frequencies must be >= 0");
      if (a.nu[i] > 0.0) keep.push_back(static_cast<Eigen::Index>(i));
      total += a.nu[i];
    }
    if (std::abs(total - 1.0) > 1e-9)
      throw CLI::ValidationError("--nu", "frequencies must sum to 1");
    lrc::Matrix support(static_cast<Eigen::Index>(keep.size()), a.n);
    lrc::Vector freqs(static_cast<Eigen::Index>(keep.size()));
    for (size_t i = 0; i < keep.size(); ++i) {
      support.row(static_cast<Eigen::Index>(i)) = all.row(keep[i]);
      freqs(static_cast<Eigen::Index>(i)) =
          a.nu[static_cast<size_t>(keep[i])] / total;
    }
    return {std::move(support), std::move(freqs)};
  }
  return lrc::uniform_distribution(a.n);  // --uniform or plain --n
}

int run_complexity(const ComplexityArgs& a) {
  const bool stochastic =
      a.figure1 || a.figure2a || a.figure2b || a.method == "mc";
  if (stochastic && !a.has_seed)
    throw CLI::RequiredError("--seed (stochastic run, no wall-clock default)");

  lrc::MonteCarloConfig mc;
  mc.samples = a.samples;
  mc.batches = a.batches;
  mc.seed = a.seed;
  mc.threads = a.threads;

  const std::string manifest_path =
      !a.manifest.empty()
          ? a.manifest
          : (a.output.empty() ? "lrcomplex_complexity_manifest.json"
                              : a.output + ".manifest.json");
  ManifestWriter mw("complexity", manifest_path);
  if (!a.input.empty()) mw.set("input", a.input);
  if (a.n > 0) mw.set("n", a.n);
  mw.set("method", a.method);
  if (a.uniform) mw.set("uniform", "true");
  if (a.ising) {
    mw.set("ising", "true");
    mw.set_full("beta", a.beta);
  }
  if (!a.nu.empty()) mw.set("nu", join_doubles(a.nu));
  mw.set("samples", a.samples);
  mw.set("batches", a.batches);
  mw.set("threads", a.threads);
  if (a.has_seed) mw.seed(a.seed);

  if (!a.output.empty()) mw.set("output", a.output);
  if (a.figure1) {
    mw.set("figure1", "true");
    mw.set("paths", a.paths);
    if (a.n < 1) throw CLI::ValidationError("--n", "figure1 needs n >= 1");
    const auto points = lrc::localisation_sweep(a.n, a.paths, mc);
    std::vector<std::vector<std::string>> rows;
    for (const auto& p : points)
      rows.push_back({std::to_string(p.path), std::to_string(p.d),
                      lrc::format_full(p.value),
                      lrc::format_full(p.std_error)});
    const std::string out = a.output.empty() ? "figure1.csv" : a.output;
    lrc::write_csv(out, {"path", "d", "value", "std_error"}, rows);
    mw.output(out);
    mw.finish();
    return 0;
  }
  if (a.figure2a) {
    mw.set("figure2a", "true");
    std::vector<std::vector<std::string>> rows;
    for (int n = 2; n <= std::max(2, a.n); ++n) {
      lrc::MonteCarloConfig cfg = mc;
      cfg.seed = lrc::derive_stream(
          mc.seed, {0x326100u, static_cast<std::uint64_t>(n)});
      const auto e =
          lrc::complexity_monte_carlo(lrc::uniform_distribution(n), cfg);
      const double pin = std::pow(kPi, n);
      rows.push_back({std::to_string(n), lrc::format_full(e.value),
                      lrc::format_full(e.std_error),
                      lrc::format_full(e.value / pin),
                      lrc::format_full(e.std_error / pin)});
    }
    const std::string out = a.output.empty() ? "figure2a.csv" : a.output;
    lrc::write_csv(out,
                   {"n", "value", "std_error", "value_over_pi_n",
                    "std_error_over_pi_n"},
                   rows);
    mw.output(out);
    mw.finish();
    return 0;
  }
  if (a.figure2b) {
    mw.set("figure2b", "true");
    mw.set_full("beta-min", a.beta_min);
    mw.set_full("beta-max", a.beta_max);
    mw.set("beta-steps", a.beta_steps);
    std::vector<std::vector<std::string>> rows;
    const std::vector<int> dims =
        a.n > 0 ? std::vector<int>{a.n} : std::vector<int>{4, 5, 6, 8};
    for (int n : dims) {
      for (int s = 0; s < a.beta_steps; ++s) {
        const double t =
            a.beta_steps == 1 ? 0.0 : double(s) / double(a.beta_steps - 1);
        const double beta =
            std::exp(std::log(a.beta_min) +
                     t * (std::log(a.beta_max) - std::log(a.beta_min)));
        lrc::MonteCarloConfig cfg = mc;
        cfg.seed = lrc::derive_stream(mc.seed,
                                      {0x326200u, static_cast<std::uint64_t>(n),
                                       static_cast<std::uint64_t>(s)});
        const auto e = lrc::complexity_monte_carlo(
            lrc::ising_distribution(n, beta), cfg);
        const double pin = std::pow(kPi, n);
        rows.push_back({std::to_string(n), lrc::format_full(beta),
                        lrc::format_full(e.value),
                        lrc::format_full(e.std_error),
                        lrc::format_full(e.value / pin)});
      }
    }
    const std::string out = a.output.empty() ? "figure2b.csv" : a.output;
    lrc::write_csv(out, {"n", "beta", "value", "std_error", "value_over_pi_n"},
                   rows);
    mw.output(out);
    mw.finish();
    return 0;
  }

  const auto dist = complexity_input(a);
  lrc::ComplexityEstimate est;
  const std::string method = a.closed_form_flag ? "closed_form" : a.method;
  if (method == "closed_form") {
    const auto cf = lrc::complexity_closed_form(dist);
    if (!cf) {
      std::cerr << "error: no closed form applies to this distribution\n";
      return 1;
    }
    est = *cf;
  } else if (method == "quadrature") {
    est = lrc::complexity_quadrature(dist);
  } else if (method == "mc") {
    est = lrc::complexity_monte_carlo(dist, mc);
  } else if (method == "auto") {
    est = lrc::complexity_auto(dist, mc);
  } else {
    throw CLI::ValidationError("--method",
                               "expected closed_form|quadrature|mc|auto");
  }
  const auto j = estimate_json(est);
  std::cout << j.dump(2) << "\n";
  if (!a.output.empty()) {
    std::ofstream f(a.output, std::ios::binary);
    f << j.dump(2) << "\n";
    mw.output(a.output);
  }
  mw.finish();
  return 0;
}

// ---------------------------------------------------------------------------
// select

struct SelectArgs {
  std::string input;
  std::string criterion = "all";
  std::string search = "decimation";
  std::uint64_t seed = 0;
  bool has_seed = false;
  int threads = 1;
  std::string output;
  std::string manifest;
};

nlohmann::ordered_json score_json(const lrc::CriterionScore& s) {
  nlohmann::ordered_json j;
  j["active"] = s.model.active;
  j["has_bias"] = s.model.has_bias;
  j["n"] = s.model.param_count();
  j["loglik_term"] = s.loglik_term;
  j["penalty"] = s.penalty;
  j["total"] = s.total;
  j["valid"] = s.valid;
  if (!s.note.empty()) j["note"] = s.note;
  return j;
}

int run_select(const SelectArgs& a) {
  require_readable(a.input, "input");
  const auto ds = lrc::load_csv(a.input);
  if (!ds.output)
    throw CLI::ValidationError("input", "CSV needs an output column 'y'");

  std::vector<lrc::Criterion> ranked;
  bool want_l1 = false;
  const std::vector<std::string> names =
      a.criterion == "all"
          ? std::vector<std::string>{"heuristic", "bic", "aic", "exact", "l1"}
          : std::vector<std::string>{a.criterion};
  for (const auto& name : names) {
    const auto c = lrc::criterion_from_string(name);
    if (c == lrc::Criterion::l1)
      want_l1 = true;
    else
      ranked.push_back(c);
  }
  const bool mc_needed =
      std::find(ranked.begin(), ranked.end(),
                lrc::Criterion::exact_posterior) != ranked.end() &&
      ds.design.cols() > 4;
  if (mc_needed && !a.has_seed)
    throw CLI::RequiredError("--seed (exact criterion falls back to MC)");

  const std::string manifest_path =
      !a.manifest.empty()
          ? a.manifest
          : (a.output.empty() ? "lrcomplex_select_manifest.json"
                              : a.output + ".manifest.json");
  ManifestWriter mw("select", manifest_path);
  mw.set("input", a.input);
  mw.set("criterion", a.criterion);
  mw.set("search", a.search);
  mw.set("threads", a.threads);
  if (!a.output.empty()) mw.set("output", a.output);
  if (a.has_seed) mw.seed(a.seed);

  lrc::SearchConfig sc;
  sc.mc.seed = a.seed;
  sc.mc.threads = a.threads;

  nlohmann::ordered_json out;
  out["input"] = a.input;
  out["T"] = ds.design.rows();
  out["N"] = ds.design.cols();
  out["search"] = a.search;
  nlohmann::ordered_json blocks = nlohmann::ordered_json::object();

  if (!ranked.empty()) {
    lrc::SelectionReport rep;
    switch (lrc::search_from_string(a.search)) {
      case lrc::SearchKind::decimation:
        rep = lrc::search_decimation(ds.design, *ds.output, ranked, sc);
        break;
      case lrc::SearchKind::forward:
        rep = lrc::search_forward(ds.design, *ds.output, ranked, sc);
        break;
      case lrc::SearchKind::exhaustive:
        rep = lrc::search_exhaustive(ds.design, *ds.output, ranked, sc);
        break;
    }
    for (lrc::Criterion c : ranked) {
      nlohmann::ordered_json block;
      block["chosen"] = rep.chosen_for(c).active;
      nlohmann::ordered_json scores = nlohmann::ordered_json::array();
      for (const auto& s : rep.scores)
        if (s.criterion == c) scores.push_back(score_json(s));
      block["scores"] = scores;
      blocks[lrc::to_string(c)] = block;
    }
    if (!rep.warnings.empty()) out["warnings"] = rep.warnings;
  }
  if (want_l1) {
    const auto rep = lrc::fit_l1_cv(ds.design, *ds.output);
    nlohmann::ordered_json block;
    block["chosen"] = rep.chosen_for(lrc::Criterion::l1).active;
    nlohmann::ordered_json scores = nlohmann::ordered_json::array();
    for (const auto& s : rep.scores) scores.push_back(score_json(s));
    block["scores"] = scores;
    blocks["l1"] = block;
  }
  out["criteria"] = blocks;

  std::cout << out.dump(2) << "\n";
  if (!a.output.empty()) {
    std::ofstream f(a.output, std::ios::binary);
    f << out.dump(2) << "\n";
    mw.output(a.output);
  }
  mw.finish();
  return 0;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateArgs {
  int N = 20;
  std::vector<int> k_values{5, 50, 200};
  std::vector<double> beta_values{0.01, 0.75, 1.5};
  std::vector<double> sparsity_values{0.0, 0.2, 0.4, 0.6, 0.8};
  int realizations = 20;
  std::vector<std::string> criteria{"aic", "bic", "heuristic", "l1"};
  std::string search = "decimation";
  std::uint64_t seed = 0;
  bool has_seed = false;
  int threads = 1;
  int l1_max_k = 50;
  bool figure3 = false;
  std::string out_dir = ".";
  std::string manifest;
};

int run_simulate(const SimulateArgs& a) {
  if (!a.has_seed)
    throw CLI::RequiredError("--seed (no wall-clock default)");
  lrc::ExperimentConfig cfg;
  cfg.N = a.N;
  cfg.k_values = a.k_values;
  cfg.beta_values = a.beta_values;
  cfg.sparsity_values = a.sparsity_values;
  cfg.realizations = a.realizations;
  cfg.criteria.clear();
  for (const auto& name : a.criteria)
    cfg.criteria.push_back(lrc::criterion_from_string(name));
  cfg.search = lrc::search_from_string(a.search);
  cfg.seed = a.seed;
  cfg.threads = a.threads;
  cfg.l1_max_k = a.l1_max_k;
  // --figure3 is the paper-shaped sweep at desk scale: exactly the defaults

  const std::string results_path = a.out_dir + "/results.csv";
  const std::string summary_path = a.out_dir + "/summary.csv";
  ManifestWriter mw("simulate", !a.manifest.empty()
                                    ? a.manifest
                                    : a.out_dir + "/simulate_manifest.json");
  mw.set("N", a.N);
  mw.set("k", join_ints(a.k_values));
  mw.set("beta", join_doubles(a.beta_values));
  mw.set("sparsity", join_doubles(a.sparsity_values));
  mw.set("realizations", a.realizations);
  mw.set("criteria", join(a.criteria));
  mw.set("search", a.search);
  mw.set("l1-max-k", a.l1_max_k);
  mw.set("threads", a.threads);
  mw.set("out-dir", a.out_dir);
  mw.seed(a.seed);

  const auto result = lrc::run_experiment(cfg);

  std::vector<std::vector<std::string>> rows;
  for (const auto& r : result.rows) {
    if (!r.ok && r.criterion == "l1") continue;  // l1 skipped at large k
    rows.push_back({lrc::format_full(r.beta), std::to_string(r.k),
                    lrc::format_full(r.sparsity), r.criterion,
                    std::to_string(r.realization),
                    r.ok ? lrc::format_full(r.error) : std::string("")});
  }
  lrc::write_csv(
      results_path,
      {"beta", "k", "sparsity", "criterion", "realization", "error"}, rows);
  mw.output(results_path);

  std::vector<std::vector<std::string>> srows;
  for (const auto& s : result.summarize())
    srows.push_back({lrc::format_full(s.beta), std::to_string(s.k),
                     lrc::format_full(s.sparsity), s.criterion,
                     std::to_string(s.count), lrc::format_full(s.mean_error),
                     lrc::format_full(s.std_error)});
  lrc::write_csv(summary_path,
                 {"beta", "k", "sparsity", "criterion", "count", "mean_error",
                  "std_error"},
                 srows);
  mw.output(summary_path);
  mw.finish();
  return 0;
}

// ---------------------------------------------------------------------------
// degenerate

struct DegenerateArgs {
  int n_max = 100;
  double b = 0.0;
  std::string output = "figure4.csv";
  std::string manifest;
};

int run_degenerate(const DegenerateArgs& a) {
  ManifestWriter mw("degenerate", !a.manifest.empty()
                                      ? a.manifest
                                      : a.output + ".manifest.json");
  mw.set("n-max", a.n_max);
  mw.set_full("b", a.b);
  mw.set("output", a.output);
  std::vector<std::vector<std::string>> rows;
  for (int n = 1; n <= a.n_max; ++n) {
    const auto uni =
        lrc::degenerate_complexity(lrc::uniform_sum_distribution(n), a.b);
    const auto bin =
        lrc::degenerate_complexity(lrc::binomial_sum_distribution(n), a.b);
    rows.push_back(
        {std::to_string(n), lrc::format_full(uni.value),
         lrc::format_full(lrc::degenerate_upper_bound_uniform(n)),
         lrc::format_full(bin.value),
         lrc::format_full(lrc::degenerate_upper_bound_binomial(n)),
         lrc::format_full(lrc::degenerate_upper_bound_binomial_fit(n))});
  }
  lrc::write_csv(a.output,
                 {"n", "uniform_sum_value", "uniform_sum_bound",
                  "binomial_value", "binomial_bound", "binomial_bound_fit"},
                 rows);
  mw.output(a.output);
  mw.finish();
  return 0;
}

// ---------------------------------------------------------------------------
// keys

struct KeysArgs {
  std::string input;
  double b = 2.0;
  int top = 0;  // 0: every model
  int threads = 1;
  std::string output = "keys_posterior.csv";
  std::string histogram = "keys_delta_rank.csv";
  std::string manifest;
};

int run_keys(const KeysArgs& a) {
  require_readable(a.input, "input");
  const auto ds = lrc::load_csv(a.input, "outcome");
  if (!ds.output)
    throw CLI::ValidationError("input", "keys CSV needs an 'outcome' column");
  ManifestWriter mw("keys", !a.manifest.empty() ? a.manifest
                                                : a.output + ".manifest.json");
  mw.set("input", a.input);
  mw.set_full("b", a.b);
  mw.set("top", a.top);
  mw.set("threads", a.threads);
  mw.set("output", a.output);
  mw.set("histogram", a.histogram);

  lrc::KeysConfig cfg;
  cfg.threshold = a.b;
  cfg.threads = a.threads;
  const auto table = lrc::enumerate_key_models(ds.design, *ds.output, cfg);

  const size_t limit =
      a.top > 0 ? std::min(table.size(), static_cast<size_t>(a.top))
                : table.size();
  std::vector<std::vector<std::string>> rows;
  for (size_t i = 0; i < limit; ++i) {
    const auto& r = table[i];
    std::string keys_bits(static_cast<size_t>(ds.design.cols()), '0');
    for (int k = 0; k < ds.design.cols(); ++k)
      if (r.subset_mask & (1u << k)) keys_bits[static_cast<size_t>(k)] = '1';
    rows.push_back({std::to_string(i + 1), keys_bits,
                    std::to_string(r.subset_size), lrc::format_full(r.theta),
                    lrc::format_full(r.loglik),
                    lrc::format_full(r.complexity_log),
                    lrc::format_full(r.score), r.exact_fit ? "1" : "0"});
  }
  lrc::write_csv(a.output,
                 {"rank", "keys", "size", "theta", "loglik", "complexity_log",
                  "score", "exact_fit"},
                 rows);
  mw.output(a.output);

  // delta rank over the likelihood-sorted table (finite complexities only)
  std::vector<std::pair<double, double>> lik_sorted;
  for (const auto& r : table)
    if (std::isfinite(r.complexity_log))
      lik_sorted.emplace_back(r.loglik, r.complexity_log);
  std::sort(lik_sorted.begin(), lik_sorted.end());
  std::vector<double> ls, cs;
  for (const auto& [l, c] : lik_sorted) {
    ls.push_back(l);
    cs.push_back(c);
  }
  const auto dr =
      lrc::delta_rank(ls, cs, static_cast<double>(ds.design.rows()));
  std::map<int, long> hist;
  for (int v : dr.per_model) ++hist[v];
  std::vector<std::vector<std::string>> hrows;
  for (const auto& [v, c] : hist)
    hrows.push_back({std::to_string(v), std::to_string(c)});
  lrc::write_csv(a.histogram, {"delta_rank", "count"}, hrows);
  mw.output(a.histogram);
  mw.finish();

  std::cout << "models: " << table.size() << ", written: " << limit
            << ", mean delta rank: " << dr.mean << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// replay

int run_replay(const std::string& manifest_path) {
  require_readable(manifest_path, "manifest");
  const auto m = lrc::read_manifest(manifest_path);
  const bool positional_input = m.command == "select" || m.command == "keys";
  std::vector<std::string> args{m.command};
  for (const auto& [k, v] : m.config) {
    if (k == "input" && positional_input)
      args.push_back(v);
    else if (v == "true")
      args.push_back("--" + k);
    else
      args.push_back("--" + k + "=" + v);
  }
  if (m.has_seed) args.push_back("--seed=" + std::to_string(m.seed));
  return dispatch(std::move(args));
}

// ---------------------------------------------------------------------------

int dispatch(std::vector<std::string> args) {
  CLI::App app{
      "geometric complexity toolkit for binary-input logistic models"};
  app.require_subcommand(1);
  const int default_threads = env_default_threads();

  ComplexityArgs ca;
  ca.threads = default_threads;
  auto* complexity = app.add_subcommand(
      "complexity", "evaluate e^C for an input distribution");
  complexity->add_option("--input", ca.input, "CSV of input observations");
  complexity->add_option("--n", ca.n, "number of inputs (synthetic modes)");
  complexity->add_flag("--uniform", ca.uniform, "uniform nu = 2^-n");
  complexity->add_flag("--ising", ca.ising, "exact Ising distribution");
  complexity->add_option("--beta", ca.beta, "Ising inverse temperature");
  complexity
      ->add_option("--nu", ca.nu,
                   "explicit frequency list over all 2^n configurations")
      ->delimiter(',');
  complexity->add_option("--method", ca.method,
                         "closed_form|quadrature|mc|auto");
  complexity->add_flag("--closed-form", ca.closed_form_flag,
                       "alias for --method closed_form");
  complexity->add_option("--samples", ca.samples, "MC samples per batch");
  complexity->add_option("--batches", ca.batches, "MC batches");
  auto* cseed = complexity->add_option("--seed", ca.seed,
                                       "RNG seed (required for MC)");
  complexity->add_option("--threads", ca.threads, "worker threads");
  complexity->add_option("--paths", ca.paths, "random paths for --figure1");
  complexity->add_flag("--figure1", ca.figure1,
                       "localisation sweep CSV (random growth paths)");
  complexity->add_flag("--figure2a", ca.figure2a,
                       "uniform-input sweep CSV over n = 2..--n");
  complexity->add_flag("--figure2b", ca.figure2b,
                       "Ising localisation sweep CSV");
  complexity->add_option("--beta-min", ca.beta_min, "figure2b grid start");
  complexity->add_option("--beta-max", ca.beta_max, "figure2b grid end");
  complexity->add_option("--beta-steps", ca.beta_steps, "figure2b grid size");
  complexity->add_option("--output", ca.output, "output file");
  complexity->add_option("--manifest", ca.manifest, "manifest path");

  SelectArgs sa;
  sa.threads = default_threads;
  auto* select = app.add_subcommand("select", "input-subset model selection");
  select->add_option("input", sa.input, "design/output CSV")->required();
  select->add_option("--criterion", sa.criterion,
                     "heuristic|bic|aic|exact|l1|all");
  select->add_option("--search", sa.search, "decimation|forward|exhaustive");
  auto* sseed = select->add_option("--seed", sa.seed, "RNG seed");
  select->add_option("--threads", sa.threads, "worker threads");
  select->add_option("--output", sa.output, "write the JSON report here too");
  select->add_option("--manifest", sa.manifest, "manifest path");

  SimulateArgs ma;
  ma.threads = default_threads;
  auto* simulate =
      app.add_subcommand("simulate", "reconstruction-error sweeps");
  simulate->add_option("--N", ma.N, "number of candidate inputs");
  simulate->add_option("--k", ma.k_values, "sample-size factors (T = k N)")
      ->delimiter(',');
  simulate->add_option("--beta", ma.beta_values, "Ising localisation levels")
      ->delimiter(',');
  simulate->add_option("--sparsity", ma.sparsity_values, "sparsity levels")
      ->delimiter(',');
  simulate->add_option("--realizations", ma.realizations,
                       "independent realizations per cell");
  simulate->add_option("--criteria", ma.criteria, "criteria to compare")
      ->delimiter(',');
  simulate->add_option("--search", ma.search, "decimation|forward|exhaustive");
  auto* mseed = simulate->add_option("--seed", ma.seed, "RNG seed (required)");
  simulate->add_option("--threads", ma.threads, "worker threads");
  simulate->add_option("--l1-max-k", ma.l1_max_k,
                       "largest k that still runs the l1 baseline");
  simulate->add_flag("--figure3", ma.figure3,
                     "paper-shaped sweep at desk scale (the defaults)");
  simulate->add_option("--out-dir", ma.out_dir, "output directory");
  simulate->add_option("--manifest", ma.manifest, "manifest path");
  simulate->set_config("--config", "", "key=value configuration file");

  DegenerateArgs da;
  auto* degenerate = app.add_subcommand(
      "degenerate", "tied-weight complexity curves versus n");
  degenerate->add_option("--n-max", da.n_max, "largest degeneracy");
  degenerate->add_option("--b", da.b, "threshold");
  degenerate->add_option("--output", da.output, "output CSV");
  degenerate->add_option("--manifest", da.manifest, "manifest path");

  KeysArgs ka;
  ka.threads = default_threads;
  auto* keys = app.add_subcommand(
      "keys", "exhaustive tied-weight comparison over key subsets");
  keys->add_option("input", ka.input, "keys CSV (key_1..key_K, outcome)")
      ->required();
  keys->add_option("--b", ka.b, "shared threshold on the sum scale");
  keys->add_option("--top", ka.top, "rows of the posterior table to write");
  keys->add_option("--threads", ka.threads, "worker threads");
  keys->add_option("--output", ka.output, "posterior table CSV");
  keys->add_option("--histogram", ka.histogram, "delta-rank histogram CSV");
  keys->add_option("--manifest", ka.manifest, "manifest path");

  std::string replay_path;
  auto* replay = app.add_subcommand("replay", "re-run a recorded manifest");
  replay->add_option("manifest", replay_path, "manifest JSON")->required();

  std::reverse(args.begin(), args.end());  // CLI11 vector parse order
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    ca.has_seed = cseed->count() > 0;
    sa.has_seed = sseed->count() > 0;
    ma.has_seed = mseed->count() > 0;
    if (complexity->parsed()) return run_complexity(ca);
    if (select->parsed()) return run_select(sa);
    if (simulate->parsed()) return run_simulate(ma);
    if (degenerate->parsed()) return run_degenerate(da);
    if (keys->parsed()) return run_keys(ka);
    if (replay->parsed()) return run_replay(replay_path);
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  return dispatch(std::vector<std::string>(argv + 1, argv + argc));
}
