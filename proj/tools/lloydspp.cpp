// Command-line surface: every experiment emits plot-ready CSV plus a JSON
// manifest echoing the exact configuration that produced it.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lloydspp/breakpoints.hpp"
#include "lloydspp/csvio.hpp"
#include "lloydspp/datagen.hpp"
#include "lloydspp/lloyds.hpp"
#include "lloydspp/parallel.hpp"
#include "lloydspp/tuner.hpp"
#include "lloydspp/version.hpp"

using namespace lloydspp;
using nlohmann::json;

namespace {

struct DistFlags {
  std::string dist = "gaussian-grid";
  std::string dataset_path;
  int k = 4;
  int N = 120;
};

struct CommonFlags {
  std::uint64_t seed = 0;
  int threads = 0;
  std::string out;
};

void add_dist_flags(CLI::App* cmd, DistFlags& flags) {
  cmd->add_option("--dist", flags.dist, "instance distribution")
      ->check(CLI::IsMember({"gaussian-grid", "label-subset"}));
  cmd->add_option("--dataset", flags.dataset_path,
                  "labeled CSV for --dist label-subset");
  cmd->add_option("--k", flags.k, "cluster count");
  cmd->add_option("--N", flags.N, "points per label");
}

DistributionConfig make_distribution(const DistFlags& flags) {
  DistributionConfig config;
  config.k = flags.k;
  config.N = flags.N;
  if (flags.dist == "gaussian-grid") {
    config.kind = DistributionKind::kGaussianGrid;
  } else {
    config.kind = DistributionKind::kLabelSubset;
    if (flags.dataset_path.empty())
      throw std::invalid_argument("--dist label-subset requires --dataset");
    config.dataset = std::make_shared<LabeledDataset>(
        load_labeled_csv(flags.dataset_path));
  }
  return config;
}

std::pair<double, double> parse_range(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw std::invalid_argument("--alpha-range must look like LO:HI");
  const double lo = std::stod(text.substr(0, colon));
  const double hi = std::stod(text.substr(colon + 1));
  if (!(lo >= 0.0) || !(hi > lo))
    throw std::invalid_argument("--alpha-range must satisfy 0 <= LO < HI");
  return {lo, hi};
}

CenterRule parse_rule(const std::string& rule) {
  return rule == "mean" ? CenterRule::kEuclideanMean : CenterRule::kMedoid;
}

double parse_beta(const std::string& text) {
  if (text == "inf") return kInf;
  return std::stod(text);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  return out;
}

void write_manifest(const std::string& out_path, const std::string& command,
                    const json& config, std::uint64_t seed,
                    const std::vector<std::string>& outputs, double seconds,
                    const json& extra = json::object()) {
  json manifest;
  manifest["command"] = command;
  manifest["config"] = config;
  manifest["seed"] = seed;
  manifest["version"] = kVersion;
  manifest["wall_clock_seconds"] = seconds;
  manifest["outputs"] = outputs;
  for (const auto& [key, value] : extra.items()) manifest[key] = value;
  std::ofstream out = open_out(out_path + ".manifest.json");
  out << manifest.dump(2) << "\n";
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ =
      std::chrono::steady_clock::now();
};

int run_gen(const DistFlags& dist_flags, const CommonFlags& common, int index) {
  Stopwatch watch;
  const DistributionConfig dist = make_distribution(dist_flags);
  const ClusteringInstance instance = make_instance(dist, common.seed, index);
  save_instance(common.out, instance, common.seed, index);
  const json config = {{"dist", dist_flags.dist}, {"k", dist_flags.k},
                       {"N", dist_flags.N},       {"index", index},
                       {"dataset", dist_flags.dataset_path}};
  write_manifest(common.out, "gen", config, common.seed,
                 {common.out, common.out + ".json"}, watch.seconds());
  std::cout << "wrote " << common.out << " (n=" << instance.n()
            << ", k=" << instance.k() << ")\n";
  return 0;
}

int run_cluster(const std::string& instance_path, double alpha,
                const std::string& beta_text, const std::string& rule, int T,
                const CommonFlags& common, int index) {
  Stopwatch watch;
  const ClusteringInstance instance = load_instance(instance_path);
  const double beta = parse_beta(beta_text);
  const LloydsConfig config{beta, T, parse_rule(rule), false};
  const SeedVector Z = draw_seed_vector(common.seed, index, instance.k());
  const std::vector<int> seeds = seed(instance, Z, alpha);
  const LloydsResult run =
      lloyds_iterate(instance, centers_from_indices(instance, seeds), config);
  const double hamming = hamming_distance(instance, run.clustering);
  const double objective = lp_cost(instance, run.clustering, beta);

  std::ofstream out = open_out(common.out);
  out << "point_index,cluster\n";
  for (int i = 0; i < instance.n(); ++i)
    out << i << "," << run.clustering.assignment[i] << "\n";
  out.close();

  const json config_json = {{"instance", instance_path}, {"alpha", alpha},
                            {"beta", beta_text},         {"center_rule", rule},
                            {"T", T},                    {"index", index}};
  write_manifest(common.out, "cluster", config_json, common.seed, {common.out},
                 watch.seconds(),
                 {{"hamming_cost", hamming},
                  {"lp_cost", objective},
                  {"iterations", run.iterations},
                  {"converged", run.converged}});
  std::cout << "hamming_cost=" << format_double(hamming)
            << " lp_cost=" << format_double(objective) << "\n";
  return 0;
}

int run_sweep(const DistFlags& dist_flags, const CommonFlags& common, int m,
              const std::string& range_text, int alpha_points,
              std::vector<double> beta_grid, const std::string& rule, int T) {
  Stopwatch watch;
  const DistributionConfig dist = make_distribution(dist_flags);
  const auto [lo, hi] = parse_range(range_text);
  TunerConfig config;
  config.m = m;
  config.alpha_range = {lo, hi};
  config.T = T;
  config.center_rule = parse_rule(rule);
  config.seed = common.seed;
  config.threads = common.threads;
  const std::vector<double> alphas = linspace(lo, hi, alpha_points);
  if (beta_grid.empty()) beta_grid = linspace(1.0, 10.0, 25);

  const Sample sample = draw_sample(dist, m, common.seed);
  const CostSurface surface = sweep_surface(sample, alphas, beta_grid, config);

  std::ofstream out = open_out(common.out);
  out << "alpha,beta,mean_cost,stderr\n";
  for (std::size_t a = 0; a < surface.alphas.size(); ++a)
    for (std::size_t b = 0; b < surface.betas.size(); ++b)
      out << format_double(surface.alphas[a]) << ","
          << format_double(surface.betas[b]) << ","
          << format_double(surface.mean(a, b)) << ","
          << format_double(surface.stderr_(a, b)) << "\n";
  out.close();

  const auto [ba, bb] = surface.argmin();
  const json config_json = {{"dist", dist_flags.dist},
                            {"dataset", dist_flags.dataset_path},
                            {"k", dist_flags.k},
                            {"N", dist_flags.N},
                            {"m", m},
                            {"alpha_range", range_text},
                            {"alpha_points", alpha_points},
                            {"beta_grid", beta_grid},
                            {"center_rule", rule},
                            {"T", T},
                            {"threads", common.threads}};
  write_manifest(common.out, "sweep", config_json, common.seed, {common.out},
                 watch.seconds(),
                 {{"argmin",
                   {{"alpha", surface.alphas[ba]},
                    {"beta", surface.betas[bb]},
                    {"mean_cost", surface.mean(ba, bb)}}}});
  std::cout << "argmin alpha=" << format_double(surface.alphas[ba])
            << " beta=" << format_double(surface.betas[bb])
            << " mean_cost=" << format_double(surface.mean(ba, bb)) << "\n";
  return 0;
}

int run_tune_alpha(const DistFlags& dist_flags, const CommonFlags& common,
                   int m, const std::string& range_text,
                   const std::string& beta_text, double eps,
                   const std::string& rule, int T) {
  Stopwatch watch;
  if (m < 2) throw std::invalid_argument("tune-alpha requires --m >= 2");
  const DistributionConfig dist = make_distribution(dist_flags);
  const auto [lo, hi] = parse_range(range_text);
  const double beta = parse_beta(beta_text);
  TunerConfig config;
  config.m = m;
  config.alpha_range = {lo, hi};
  config.eps = eps;
  config.T = T;
  config.center_rule = parse_rule(rule);
  config.seed = common.seed;
  config.threads = common.threads;

  const Sample full = draw_sample(dist, m, common.seed);
  Sample train, test;
  for (int j = 0; j < full.size(); ++j) {
    Sample& side = j < m / 2 ? train : test;
    side.instances.push_back(full.instances[j]);
    side.seeds.push_back(full.seeds[j]);
  }

  const TuneResult tuned =
      tune_alpha(train, beta, config.alpha_range, eps, config);
  // Test-half costs at the same candidates, from cached step functions.
  std::vector<CostStepFunction> test_steps(test.size());
  parallel_for(
      test.size(),
      [&](std::int64_t j) {
        test_steps[j] = cost_step_function(test.instances[j], test.seeds[j],
                                           beta, config.alpha_range, config);
      },
      config.threads);
  std::vector<double> candidates(tuned.table.size());
  for (std::size_t q = 0; q < tuned.table.size(); ++q)
    candidates[q] = tuned.table[q].alpha;
  const std::vector<double> test_costs =
      mean_step_cost(test_steps, candidates, config.threads);

  std::ofstream out = open_out(common.out);
  out << "alpha_candidate,train_cost,test_cost\n";
  for (std::size_t q = 0; q < tuned.table.size(); ++q)
    out << format_double(tuned.table[q].alpha) << ","
        << format_double(tuned.table[q].cost) << ","
        << format_double(test_costs[q]) << "\n";
  out.close();

  double test_at_hat = 0.0;
  for (std::size_t q = 0; q < candidates.size(); ++q)
    if (candidates[q] == tuned.alpha_hat) test_at_hat = test_costs[q];

  const json config_json = {{"dist", dist_flags.dist},
                            {"dataset", dist_flags.dataset_path},
                            {"k", dist_flags.k},
                            {"N", dist_flags.N},
                            {"m", m},
                            {"alpha_range", range_text},
                            {"beta", beta_text},
                            {"eps", eps},
                            {"center_rule", rule},
                            {"T", T},
                            {"threads", common.threads}};
  write_manifest(common.out, "tune-alpha", config_json, common.seed,
                 {common.out}, watch.seconds(),
                 {{"chosen_alpha", tuned.alpha_hat},
                  {"train_cost", tuned.cost},
                  {"test_cost", test_at_hat},
                  {"candidates", tuned.evaluations},
                  {"breakpoints", tuned.breakpoints.size()}});
  std::cout << "chosen_alpha=" << format_double(tuned.alpha_hat)
            << " train_cost=" << format_double(tuned.cost)
            << " test_cost=" << format_double(test_at_hat) << "\n";
  return 0;
}

int run_count_intervals(const DistFlags& dist_flags, const CommonFlags& common,
                        int m, const std::string& range_text, double eps,
                        std::vector<int> n_grid) {
  Stopwatch watch;
  const DistributionConfig base = make_distribution(dist_flags);
  const auto [lo, hi] = parse_range(range_text);
  if (n_grid.empty())
    for (int n = 50; n <= 1000; n += 50) n_grid.push_back(n);

  const InstanceSampler sampler = [&](int n, int sample) {
    DistributionConfig dist = base;
    dist.N = std::max(1, n / dist.k);
    return std::pair(make_instance(dist, common.seed, sample),
                     draw_seed_vector(common.seed, sample, dist.k));
  };
  const auto rows =
      count_intervals_vs_n(sampler, n_grid, m, {lo, hi}, eps, common.threads);

  std::ofstream out = open_out(common.out);
  out << "n,mean_intervals,stderr\n";
  for (const auto& row : rows)
    out << row.n << "," << format_double(row.mean_intervals) << ","
        << format_double(row.stderr_) << "\n";
  out.close();

  const json config_json = {{"dist", dist_flags.dist},
                            {"dataset", dist_flags.dataset_path},
                            {"k", dist_flags.k},
                            {"m", m},
                            {"alpha_range", range_text},
                            {"eps", eps},
                            {"n_grid", n_grid},
                            {"threads", common.threads}};
  write_manifest(common.out, "count-intervals", config_json, common.seed,
                 {common.out}, watch.seconds());
  std::cout << "wrote " << common.out << " (" << rows.size() << " rows)\n";
  return 0;
}

int run_histogram(const DistFlags& dist_flags, const CommonFlags& common, int m,
                  const std::string& range_text, double eps, int bins) {
  Stopwatch watch;
  const DistributionConfig dist = make_distribution(dist_flags);
  const auto [lo, hi] = parse_range(range_text);
  const AlphaInterval range{lo, hi};

  std::vector<BreakpointSet> sets(m);
  parallel_for(
      m,
      [&](std::int64_t i) {
        const auto instance = make_instance(dist, common.seed, (int)i);
        const auto Z = draw_seed_vector(common.seed, (int)i, dist.k);
        sets[i] = enumerate_execution_tree(instance, Z, range, eps,
                                           d_alpha_family(), (int)i)
                      .breakpoints;
      },
      common.threads);
  BreakpointSet merged;
  merged.precision = eps;
  for (const auto& set : sets)
    merged.points.insert(merged.points.end(), set.points.begin(),
                         set.points.end());
  merged = deduplicate(std::move(merged));
  const auto histogram = breakpoint_histogram(merged, bins, range);

  std::ofstream out = open_out(common.out);
  out << "bin_lo,bin_hi,count\n";
  for (const auto& bin : histogram)
    out << format_double(bin.lo) << "," << format_double(bin.hi) << ","
        << bin.count << "\n";
  out.close();

  const json config_json = {{"dist", dist_flags.dist},
                            {"dataset", dist_flags.dataset_path},
                            {"k", dist_flags.k},
                            {"N", dist_flags.N},
                            {"m", m},
                            {"alpha_range", range_text},
                            {"eps", eps},
                            {"bins", bins},
                            {"threads", common.threads}};
  write_manifest(common.out, "histogram", config_json, common.seed,
                 {common.out}, watch.seconds(),
                 {{"total_breakpoints", merged.size()}});
  std::cout << "wrote " << common.out << " (" << merged.size()
            << " breakpoints)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"(alpha,beta)-Lloyds++ clustering and parameter tuning"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  DistFlags dist_flags;
  CommonFlags common;
  int m = 100;
  int index = 0;
  int T = 3;
  int alpha_points = 50;
  int bins = 40;
  double alpha = 2.0;
  double eps = 1e-7;
  std::string beta_text = "2";
  std::string rule = "medoid";
  std::string tune_rule = "mean";
  std::string range_text = "0:20";
  std::string instance_path;
  std::vector<double> beta_grid;
  std::vector<int> n_grid;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--seed", common.seed, "64-bit RNG seed");
    cmd->add_option("--threads", common.threads, "worker cap (0 = hardware)");
    cmd->add_option("--out", common.out, "output path")->required();
  };

  CLI::App* gen = app.add_subcommand("gen", "generate one instance file");
  add_dist_flags(gen, dist_flags);
  add_common(gen);
  gen->add_option("--index", index, "sample index within the stream");

  CLI::App* cluster = app.add_subcommand("cluster", "cluster one instance file");
  cluster->add_option("instance", instance_path, "instance CSV (with sidecar)")
      ->required();
  cluster->add_option("--alpha", alpha, "seeding exponent");
  cluster->add_option("--beta", beta_text, "Lloyd's objective exponent or inf");
  cluster->add_option("--center-rule", rule, "medoid | mean")
      ->check(CLI::IsMember({"medoid", "mean"}));
  cluster->add_option("--T", T, "Lloyd's iteration cap");
  cluster->add_option("--index", index, "Z stream index");
  add_common(cluster);

  CLI::App* sweep = app.add_subcommand("sweep", "(alpha, beta) cost surface");
  add_dist_flags(sweep, dist_flags);
  add_common(sweep);
  sweep->add_option("--m", m, "sample size");
  sweep->add_option("--alpha-range", range_text, "LO:HI");
  sweep->add_option("--alpha-points", alpha_points, "alpha grid size");
  sweep->add_option("--beta-grid", beta_grid,
                    "explicit beta values (default: 25 in [1,10])");
  sweep->add_option("--center-rule", rule, "medoid | mean")
      ->check(CLI::IsMember({"medoid", "mean"}));
  sweep->add_option("--T", T, "Lloyd's iteration cap");

  CLI::App* tune =
      app.add_subcommand("tune-alpha", "breakpoint-exact alpha tuning");
  add_dist_flags(tune, dist_flags);
  add_common(tune);
  tune->add_option("--m", m, "sample size (split into train/test halves)");
  tune->add_option("--alpha-range", range_text, "LO:HI");
  tune->add_option("--beta", beta_text, "fixed beta (or inf)");
  tune->add_option("--eps", eps, "breakpoint precision");
  tune->add_option("--center-rule", tune_rule, "medoid | mean")
      ->check(CLI::IsMember({"medoid", "mean"}));
  tune->add_option("--T", T, "Lloyd's iteration cap");

  CLI::App* count =
      app.add_subcommand("count-intervals", "interval counts vs instance size");
  add_dist_flags(count, dist_flags);
  add_common(count);
  count->add_option("--m", m, "samples per n");
  count->add_option("--alpha-range", range_text, "LO:HI");
  count->add_option("--eps", eps, "breakpoint precision");
  count->add_option("--n-grid", n_grid, "instance sizes (default 50..1000)");

  CLI::App* histogram =
      app.add_subcommand("histogram", "breakpoint location histogram");
  add_dist_flags(histogram, dist_flags);
  add_common(histogram);
  histogram->add_option("--m", m, "sample size");
  histogram->add_option("--alpha-range", range_text, "LO:HI");
  histogram->add_option("--eps", eps, "breakpoint precision");
  histogram->add_option("--bins", bins, "bin count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help, --version
    app.exit(e);
    return 2;
  }

  try {
    if (gen->parsed()) return run_gen(dist_flags, common, index);
    if (cluster->parsed())
      return run_cluster(instance_path, alpha, beta_text, rule, T, common,
                         index);
    if (sweep->parsed())
      return run_sweep(dist_flags, common, m, range_text, alpha_points,
                       beta_grid, rule, T);
    if (tune->parsed())
      return run_tune_alpha(dist_flags, common, m, range_text, beta_text, eps,
                            tune_rule, T);
    if (count->parsed())
      return run_count_intervals(dist_flags, common, m, range_text, eps,
                                 n_grid);
    if (histogram->parsed())
      return run_histogram(dist_flags, common, m, range_text, eps, bins);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
