#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "behent/behent.hpp"

namespace {

using namespace behent;

struct WeightingCli {
  double alpha = 1.0;
  std::optional<double> beta;
  std::optional<int> m;

  void attach(CLI::App* cmd) {
    cmd->add_option("--alpha", alpha, "Weighting shape parameter")->capture_default_str();
    CLI::Option* beta_opt = cmd->add_option("--beta", beta, "Weighting scale parameter (default 1)");
    CLI::Option* m_opt =
        cmd->add_option("--m", m, "Condition beta as (log M)^(1-alpha); overrides --beta");
    beta_opt->excludes(m_opt);
    m_opt->excludes(beta_opt);
  }

  WeightingParams resolve() const {
    if (m) return conditioned_params(alpha, *m);
    WeightingParams p;
    p.alpha = alpha;
    p.beta = beta.value_or(1.0);
    p.validate();
    return p;
  }
};

NeighborBackend backend_from(const std::string& name) {
  return name == "brute" ? NeighborBackend::BruteForce : NeighborBackend::SpatialTree;
}

FileFormat in_format(const std::string& choice, const std::string& path) {
  if (choice == "csv") return FileFormat::Csv;
  if (choice == "ndjson") return FileFormat::Ndjson;
  return format_from_path(path);
}

std::vector<double> broadcast(std::vector<double> v, int dim, double fill, const std::string& what) {
  if (v.empty()) return std::vector<double>(static_cast<std::size_t>(dim), fill);
  if (static_cast<int>(v.size()) == 1) return std::vector<double>(static_cast<std::size_t>(dim), v[0]);
  if (static_cast<int>(v.size()) != dim)
    throw_validation("cli", what + " needs 1 or dim values");
  return v;
}

struct DistCli {
  std::string dist = "uniform";
  int dim = 1;
  std::vector<double> lo, hi, mean;
  double sigma = 1.0;
  std::string components; // w:mean:sigma,w:mean:sigma for mixtures

  void attach(CLI::App* cmd) {
    cmd->add_option("--dist", dist, "Distribution family")
        ->check(CLI::IsMember({"uniform", "gaussian", "mixture", "truncated-gaussian"}))
        ->capture_default_str();
    cmd->add_option("--dim", dim, "State dimension")->capture_default_str();
    cmd->add_option("--lo", lo, "Box lower bounds (scalar broadcasts; default 0)")->delimiter(',');
    cmd->add_option("--hi", hi, "Box upper bounds (scalar broadcasts; default 1)")->delimiter(',');
    cmd->add_option("--mean", mean, "Gaussian mean (scalar broadcasts; default 0)")->delimiter(',');
    cmd->add_option("--sigma", sigma, "Gaussian scale")->capture_default_str();
    cmd->add_option("--components", components,
                    "Mixture components as weight:mean:sigma[,weight:mean:sigma...] (mean broadcasts)");
  }

  DistributionSpec resolve(std::uint64_t seed) const {
    if (dist == "uniform")
      return DistributionSpec::uniform_box(broadcast(lo, dim, 0.0, "--lo"), broadcast(hi, dim, 1.0, "--hi"), seed);
    if (dist == "gaussian")
      return DistributionSpec::gaussian(broadcast(mean, dim, 0.0, "--mean"), sigma, seed);
    if (dist == "truncated-gaussian")
      return DistributionSpec::truncated_gaussian(broadcast(lo, dim, 0.0, "--lo"), broadcast(hi, dim, 1.0, "--hi"),
                                                  broadcast(mean, dim, 0.0, "--mean"), sigma, seed);
    // mixture
    if (components.empty())
      throw_validation("cli", "mixture requires --components weight:mean:sigma[,...]");
    std::vector<MixtureComponent> comps;
    std::size_t start = 0;
    while (start <= components.size()) {
      const std::size_t end = std::min(components.find(',', start), components.size());
      const std::string part = components.substr(start, end - start);
      const std::size_t c1 = part.find(':');
      const std::size_t c2 = part.find(':', c1 == std::string::npos ? c1 : c1 + 1);
      if (c1 == std::string::npos || c2 == std::string::npos)
        throw_validation("cli", "bad mixture component '" + part + "'; expected weight:mean:sigma");
      MixtureComponent comp;
      try {
        comp.weight = std::stod(part.substr(0, c1));
        comp.mean.assign(static_cast<std::size_t>(dim), std::stod(part.substr(c1 + 1, c2 - c1 - 1)));
        comp.sigma = std::stod(part.substr(c2 + 1));
      } catch (const std::exception&) {
        throw_validation("cli", "bad mixture component '" + part + "'; expected weight:mean:sigma");
      }
      comps.push_back(std::move(comp));
      start = end + 1;
      if (end == components.size()) break;
    }
    return DistributionSpec::gaussian_mixture(dim, std::move(comps), seed);
  }
};

EstimatorSpec make_estimator(const std::string& name, double q, const WeightingCli& weighting) {
  if (name == "shannon") return EstimatorSpec::shannon();
  if (name == "renyi") return EstimatorSpec::renyi(q);
  if (name == "be") return EstimatorSpec::be_corrected(weighting.resolve());
  return EstimatorSpec::be_naive(weighting.resolve());
}

void print_estimate(const EntropyEstimate& e) {
  std::string line = "estimator=" + e.spec.name();
  if (e.spec.kind == EstimatorKind::RenyiPlugin) line += " q=" + format_double(e.spec.q);
  if (e.spec.kind == EstimatorKind::BENaive || e.spec.kind == EstimatorKind::BECorrected) {
    line += " alpha=" + format_double(e.spec.weighting.params().alpha);
    line += " beta=" + format_double(e.spec.weighting.params().beta);
  }
  line += " value=" + format_double(e.value);
  line += " k=" + std::to_string(e.k) + " n=" + std::to_string(e.n) + " d=" + std::to_string(e.d);
  std::cout << line << "\n";
}

int run_app(int argc, char** argv) {
  CLI::App app{"Entropy estimation, reward relabeling, and coverage for continuous trajectory data"};
  app.require_subcommand(1);

  // ---- estimate ----
  CLI::App* est = app.add_subcommand("estimate", "Estimate differential entropy of a dataset");
  std::string est_input, est_format = "auto", est_backend = "tree", est_output, est_density_out;
  std::vector<std::string> est_names{"shannon"};
  int est_k = 12, est_threads = 1;
  double est_q = 2.0;
  WeightingCli est_weighting;
  est->add_option("--input", est_input, "Dataset path")->required();
  est->add_option("--format", est_format, "Input format")
      ->check(CLI::IsMember({"auto", "csv", "ndjson"}))
      ->capture_default_str();
  est->add_option("--estimator", est_names, "Estimators to run (repeat or comma-separate)")
      ->delimiter(',')
      ->check(CLI::IsMember({"shannon", "renyi", "be", "be-naive"}))
      ->capture_default_str();
  est->add_option("--q", est_q, "Renyi order")->capture_default_str();
  est_weighting.attach(est);
  est->add_option("--k", est_k, "Neighbor depth")->capture_default_str();
  est->add_option("--backend", est_backend, "Neighbor search backend")
      ->check(CLI::IsMember({"tree", "brute"}))
      ->capture_default_str();
  est->add_option("--threads", est_threads, "Worker thread count")->capture_default_str();
  est->add_option("--output", est_output, "Write estimates as CSV");
  est->add_option("--dump-density", est_density_out, "Write per-row density estimates as CSV");

  // ---- reward ----
  CLI::App* rew = app.add_subcommand("reward", "Relabel a dataset with intrinsic rewards");
  std::string rew_input, rew_format = "auto", rew_output, rew_out_format = "auto", rew_objective = "be",
              rew_backend = "tree";
  int rew_k = 12, rew_threads = 1;
  double rew_c = 1.0;
  bool rew_avg = true;
  WeightingCli rew_weighting;
  rew->add_option("--input", rew_input, "Dataset path")->required();
  rew->add_option("--format", rew_format, "Input format")
      ->check(CLI::IsMember({"auto", "csv", "ndjson"}))
      ->capture_default_str();
  rew->add_option("--output", rew_output, "Relabeled output path")->required();
  rew->add_option("--out-format", rew_out_format, "Output format")
      ->check(CLI::IsMember({"auto", "csv", "ndjson"}))
      ->capture_default_str();
  rew->add_option("--objective", rew_objective, "Reward objective")
      ->check(CLI::IsMember({"be", "shannon", "renyi"}))
      ->capture_default_str();
  rew_weighting.attach(rew);
  rew->add_option("--c", rew_c, "Log stabilizer (>= 1)")->capture_default_str();
  rew->add_option("--k", rew_k, "Neighbor depth")->capture_default_str();
  rew->add_flag("--avg-top-k,!--no-avg-top-k", rew_avg, "Average the k nearest distances instead of taking the k-th")
      ->capture_default_str();
  rew->add_option("--backend", rew_backend, "Neighbor search backend")
      ->check(CLI::IsMember({"tree", "brute"}))
      ->capture_default_str();
  rew->add_option("--threads", rew_threads, "Worker thread count")->capture_default_str();

  // ---- coverage ----
  CLI::App* cov = app.add_subcommand("coverage", "Minimal-enclosing-ball coverage curve of a trajectory dataset");
  std::string cov_input, cov_format = "auto", cov_output;
  std::int64_t cov_inc = 50000, cov_per_inc = 10000;
  std::uint64_t cov_seed = 0;
  std::optional<double> cov_base;
  bool cov_steps_from_index = false;
  cov->add_option("--input", cov_input, "Dataset path")->required();
  cov->add_option("--format", cov_format, "Input format")
      ->check(CLI::IsMember({"auto", "csv", "ndjson"}))
      ->capture_default_str();
  cov->add_option("--output", cov_output, "Coverage curve CSV path")->required();
  cov->add_option("--inc", cov_inc, "Increment size in steps")->capture_default_str();
  cov->add_option("--per-inc", cov_per_inc, "Rows sampled per increment")->capture_default_str();
  cov->add_option("--seed", cov_seed, "Subsampling seed")->capture_default_str();
  cov->add_option("--normalize-base", cov_base, "Radius to normalize by (default: run maximum)");
  cov->add_flag("--steps-from-index", cov_steps_from_index, "Use 1-based row order as the step index");

  // ---- sample ----
  CLI::App* smp = app.add_subcommand("sample", "Draw a synthetic dataset");
  DistCli smp_dist;
  std::string smp_output, smp_out_format = "auto";
  std::int64_t smp_n = 0;
  std::uint64_t smp_seed = 0;
  smp_dist.attach(smp);
  smp->add_option("--n", smp_n, "Number of rows")->required();
  smp->add_option("--seed", smp_seed, "Sampling seed")->capture_default_str();
  smp->add_option("--output", smp_output, "Dataset output path")->required();
  smp->add_option("--out-format", smp_out_format, "Output format")
      ->check(CLI::IsMember({"auto", "csv", "ndjson"}))
      ->capture_default_str();

  // ---- study ----
  CLI::App* stu = app.add_subcommand("study", "Convergence study of an estimator against a closed-form value");
  DistCli stu_dist;
  WeightingCli stu_weighting;
  std::string stu_estimator = "shannon", stu_backend = "tree", stu_output;
  std::vector<double> stu_grid;
  int stu_reps = 10, stu_threads = 1;
  double stu_q = 2.0, stu_exponent = 0.5;
  std::uint64_t stu_seed = 0;
  stu_dist.attach(stu);
  stu->add_option("--estimator", stu_estimator, "Estimator to study")
      ->check(CLI::IsMember({"shannon", "renyi", "be", "be-naive"}))
      ->capture_default_str();
  stu->add_option("--q", stu_q, "Renyi order")->capture_default_str();
  stu_weighting.attach(stu);
  stu->add_option("--n-grid", stu_grid, "Sample sizes, strictly increasing")->delimiter(',')->required();
  stu->add_option("--reps", stu_reps, "Repetitions per cell (>= 5)")->capture_default_str();
  stu->add_option("--seed", stu_seed, "Study seed")->capture_default_str();
  stu->add_option("--k-exponent", stu_exponent, "k = ceil(n^exponent)")->capture_default_str();
  stu->add_option("--backend", stu_backend, "Neighbor search backend")
      ->check(CLI::IsMember({"tree", "brute"}))
      ->capture_default_str();
  stu->add_option("--threads", stu_threads, "Worker thread count")->capture_default_str();
  stu->add_option("--output", stu_output, "Study report CSV path")->required();

  // ---- curve ----
  CLI::App* cur = app.add_subcommand("curve", "Tabulate the reward as a function of neighbor distance");
  std::string cur_output;
  int cur_m = 512;
  double cur_c = 1.0, cur_r_max = 5.0;
  int cur_r_steps = 501;
  std::vector<double> cur_alphas{0.2, 0.5, 0.7, 0.9, 1.5, 2.0, 3.0, 5.0};
  std::vector<double> cur_r_grid;
  cur->add_option("--m", cur_m, "Conditioning constant for beta")->capture_default_str();
  cur->add_option("--alphas", cur_alphas, "Weighting shapes to tabulate")->delimiter(',')->capture_default_str();
  cur->add_option("--c", cur_c, "Log stabilizer (>= 1)")->capture_default_str();
  cur->add_option("--r-max", cur_r_max, "Grid upper end (with --r-steps)")->capture_default_str();
  cur->add_option("--r-steps", cur_r_steps, "Grid point count from 0 to --r-max")->capture_default_str();
  cur->add_option("--r-grid", cur_r_grid, "Explicit distance grid (overrides --r-max/--r-steps)")->delimiter(',');
  cur->add_option("--output", cur_output, "Curve CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (est->parsed()) {
    const Dataset data = load_dataset(est_input, in_format(est_format, est_input));
    EstimateOptions opts;
    opts.backend = backend_from(est_backend);
    opts.threads = est_threads;
    const NeighborIndex index = NeighborIndex::build(data, opts.backend);
    const DensityEstimate density = knn_log_density(data, index, est_k, opts.threads);
    std::vector<EntropyEstimate> results;
    for (const std::string& name : est_names)
      results.push_back(entropy_from_log_density(density, make_estimator(name, est_q, est_weighting)));
    for (const EntropyEstimate& e : results) print_estimate(e);
    if (!est_output.empty()) write_estimates_csv(est_output, results);
    if (!est_density_out.empty()) write_density_csv(est_density_out, density);
    return 0;
  }

  if (rew->parsed()) {
    if (rew_objective == "renyi")
      throw_validation("cli", "renyi reward objective is not supported; choose be or shannon");
    const Dataset data = load_dataset(rew_input, in_format(rew_format, rew_input));
    RewardConfig cfg;
    cfg.weighting = rew_weighting.resolve();
    cfg.k = rew_k;
    cfg.c = rew_c;
    cfg.objective = rew_objective == "shannon" ? RewardObjective::ShannonBaseline : RewardObjective::Behavioral;
    cfg.average_top_k = rew_avg;
    const std::vector<TransitionRecord> records = relabel(data, cfg, backend_from(rew_backend), rew_threads);
    write_transitions(rew_output, records, in_format(rew_out_format, rew_output));
    std::cout << "relabeled " << records.size() << " rows -> " << rew_output << "\n";
    return 0;
  }

  if (cov->parsed()) {
    const Dataset data = load_dataset(cov_input, in_format(cov_format, cov_input));
    CoverageOptions opts;
    opts.increment = cov_inc;
    opts.samples_per_increment = cov_per_inc;
    opts.seed = cov_seed;
    opts.normalize_base = cov_base;
    opts.steps_from_index = cov_steps_from_index;
    const CoverageCurve curve = coverage_curve(data, opts);
    write_coverage_csv(cov_output, curve);
    std::cout << "coverage checkpoints=" << curve.checkpoints.size()
              << " max_radius=" << format_double(curve.normalize_base) << " -> " << cov_output << "\n";
    return 0;
  }

  if (smp->parsed()) {
    const DistributionSpec spec = smp_dist.resolve(smp_seed);
    const Dataset data = sample(spec, smp_n);
    write_dataset(smp_output, data, in_format(smp_out_format, smp_output));
    std::cout << "sampled n=" << data.n << " d=" << data.d << " dist=" << spec.name() << " -> " << smp_output
              << "\n";
    return 0;
  }

  if (stu->parsed()) {
    const DistributionSpec family = stu_dist.resolve(0);
    const EstimatorSpec estimator = make_estimator(stu_estimator, stu_q, stu_weighting);
    std::vector<std::int64_t> grid;
    for (double g : stu_grid) grid.push_back(static_cast<std::int64_t>(g));
    KSchedule sched;
    sched.exponent = stu_exponent;
    EstimateOptions opts;
    opts.backend = backend_from(stu_backend);
    opts.threads = stu_threads;
    const StudyReport report = convergence_study(family, estimator, grid, sched, stu_reps, stu_seed, opts);
    write_study_csv(stu_output, report);
    for (const StudyCell& cell : report.cells) {
      std::cout << "n=" << cell.n << " k=" << cell.k << " mean=" << format_double(cell.mean)
                << " mae=" << format_double(cell.mae) << " variance=" << format_double(cell.variance) << "\n";
    }
    std::cout << "oracle=" << format_double(report.oracle)
              << " variance_slope=" << format_double(report.variance_slope) << " -> " << stu_output << "\n";
    return 0;
  }

  if (cur->parsed()) {
    std::vector<double> grid = cur_r_grid;
    if (grid.empty()) {
      if (cur_r_steps < 2) throw_validation("cli", "--r-steps must be at least 2");
      grid.reserve(static_cast<std::size_t>(cur_r_steps));
      for (int i = 0; i < cur_r_steps; ++i)
        grid.push_back(cur_r_max * static_cast<double>(i) / (cur_r_steps - 1));
    }
    std::vector<RewardConfig> configs;
    for (double alpha : cur_alphas) {
      RewardConfig cfg;
      cfg.weighting = conditioned_params(alpha, cur_m);
      cfg.c = cur_c;
      cfg.objective = RewardObjective::Behavioral;
      configs.push_back(cfg);
    }
    RewardConfig baseline;
    baseline.c = cur_c;
    baseline.objective = RewardObjective::ShannonBaseline;
    configs.push_back(baseline);
    write_curve_csv(cur_output, reward_curve(configs, grid));
    std::cout << "curve alphas=" << cur_alphas.size() << " grid=" << grid.size() << " -> " << cur_output << "\n";
    return 0;
  }

  return 0;
}

} // namespace

int main(int argc, char** argv) {
  try {
    return run_app(argc, argv);
  } catch (const behent::Error& e) {
    std::cerr << "error [" << behent::category_name(e.category()) << "] " << e.what() << "\n";
    switch (e.category()) {
      case behent::ErrorCategory::Validation: return 2;
      case behent::ErrorCategory::Numeric: return 3;
      case behent::ErrorCategory::Io: return 4;
    }
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
