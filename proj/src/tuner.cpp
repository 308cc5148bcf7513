#include "lloydspp/tuner.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lloydspp/parallel.hpp"

namespace lloydspp {

namespace {

constexpr double kGapFlagThreshold = 0.1;
constexpr int kMaxCachedPoints = 2048;

bool wants_power_cache(const ClusteringInstance& instance, double beta,
                       const TunerConfig& config) {
  return config.center_rule == CenterRule::kMedoid && beta != kInf &&
         instance.n() <= kMaxCachedPoints;
}

CostStats reduce_costs(std::span<const double> costs) {
  const int m = static_cast<int>(costs.size());
  double mean = 0.0;
  for (double c : costs) mean += c;
  mean /= m;
  if (m == 1) return CostStats{mean, 0.0};
  double var = 0.0;
  for (double c : costs) var += (c - mean) * (c - mean);
  return CostStats{mean, std::sqrt(var / (m - 1)) / std::sqrt(m)};
}

void check_sample(const Sample& sample, const char* what) {
  if (sample.size() < 1)
    throw std::invalid_argument(std::string(what) + ": empty sample");
}

std::vector<double> grid_or_default(std::span<const double> grid, double lo,
                                    double hi, int count) {
  if (!grid.empty()) return {grid.begin(), grid.end()};
  return linspace(lo, hi, count);
}

std::int64_t advisory_sample_size(const TunerConfig& config, int n, int k) {
  // Sample-size shape of the uniform-convergence bound with H = 1 and unit
  // constant: (1/accuracy)^2 (min(T,k) ln n + ln k + ln(1/delta) +
  // ln ln(alpha_h/alpha_l)), the low end of the range clamped away from 0.
  const double lo = std::max(config.alpha_range.lo, 1e-3);
  const double log_term =
      std::log(std::max(2.0, std::log(config.alpha_range.hi / lo)));
  const double inner = std::min(config.T, k) * std::log(std::max(2, n)) +
                       std::log(std::max(2, k)) +
                       std::log(1.0 / config.delta) + log_term;
  const double m = inner / (config.accuracy * config.accuracy);
  return static_cast<std::int64_t>(std::ceil(m));
}

}  // namespace

std::vector<double> linspace(double lo, double hi, int count) {
  if (count < 1) throw std::invalid_argument("linspace: count must be >= 1");
  if (count == 1) return {lo};
  std::vector<double> grid(count);
  for (int i = 0; i < count; ++i)
    grid[i] = lo + (hi - lo) * static_cast<double>(i) /
                       static_cast<double>(count - 1);
  return grid;
}

Sample draw_sample(const DistributionConfig& distribution, int m,
                   std::uint64_t seed) {
  if (m < 1) throw std::invalid_argument("draw_sample: m must be >= 1");
  Sample sample;
  sample.instances.reserve(m);
  sample.seeds.reserve(m);
  for (int i = 0; i < m; ++i) {
    sample.instances.push_back(make_instance(distribution, seed, i));
    sample.seeds.push_back(draw_seed_vector(seed, i, distribution.k));
  }
  return sample;
}

CostStats empirical_cost(const Sample& sample, double alpha, double beta,
                         const TunerConfig& config) {
  check_sample(sample, "empirical_cost");
  const LloydsConfig lloyds = config.lloyds(beta);
  std::vector<double> costs(sample.size());
  parallel_for(
      sample.size(),
      [&](std::int64_t j) {
        costs[j] =
            clus_cost(sample.instances[j], sample.seeds[j], alpha, lloyds);
      },
      config.threads);
  return reduce_costs(costs);
}

std::pair<int, int> CostSurface::argmin() const {
  int best_a = 0, best_b = 0;
  for (int a = 0; a < static_cast<int>(alphas.size()); ++a)
    for (int b = 0; b < static_cast<int>(betas.size()); ++b) {
      const bool better =
          mean(a, b) < mean(best_a, best_b) ||
          (mean(a, b) == mean(best_a, best_b) &&
           std::pair(alphas[a], betas[b]) <
               std::pair(alphas[best_a], betas[best_b]));
      if (better) {
        best_a = a;
        best_b = b;
      }
    }
  return {best_a, best_b};
}

CostSurface sweep_surface(const Sample& sample,
                          std::span<const double> alpha_grid,
                          std::span<const double> beta_grid,
                          const TunerConfig& config) {
  check_sample(sample, "sweep_surface");
  if (alpha_grid.empty() || beta_grid.empty())
    throw std::invalid_argument("sweep_surface: empty parameter grid");
  const int A = static_cast<int>(alpha_grid.size());
  const int B = static_cast<int>(beta_grid.size());
  const int m = sample.size();

  // costs[j] holds one row per sample element; reused beta-power caches make
  // the medoid updates affordable across the whole alpha row.
  Matrix costs(m, A * B);
  parallel_for(
      m,
      [&](std::int64_t j) {
        const ClusteringInstance& instance = sample.instances[j];
        for (int b = 0; b < B; ++b) {
          const double beta = beta_grid[b];
          const LloydsConfig lloyds = config.lloyds(beta);
          Matrix powers;
          const Matrix* cache = nullptr;
          if (wants_power_cache(instance, beta, config)) {
            powers = beta_power_matrix(instance, beta);
            cache = &powers;
          }
          for (int a = 0; a < A; ++a)
            costs(j, a * B + b) =
                clus_cost(instance, sample.seeds[j], alpha_grid[a], lloyds,
                          cache);
        }
      },
      config.threads);

  CostSurface surface;
  surface.alphas.assign(alpha_grid.begin(), alpha_grid.end());
  surface.betas.assign(beta_grid.begin(), beta_grid.end());
  surface.mean.resize(A, B);
  surface.stderr_.resize(A, B);
  std::vector<double> cell(m);
  for (int a = 0; a < A; ++a)
    for (int b = 0; b < B; ++b) {
      for (int j = 0; j < m; ++j) cell[j] = costs(j, a * B + b);
      const CostStats stats = reduce_costs(cell);
      surface.mean(a, b) = stats.mean;
      surface.stderr_(a, b) = stats.stderr_;
    }
  return surface;
}

double CostStepFunction::value_at(double alpha) const {
  const auto it =
      std::upper_bound(boundaries.begin(), boundaries.end(), alpha);
  return values[static_cast<std::size_t>(it - boundaries.begin())];
}

CostStepFunction cost_step_function(const ClusteringInstance& instance,
                                    const SeedVector& Z, double beta,
                                    AlphaInterval range,
                                    const TunerConfig& config,
                                    BreakpointSet* breakpoints,
                                    int instance_index) {
  const EnumerationResult run = enumerate_execution_tree(
      instance, Z, range, config.eps, d_alpha_family(), instance_index);
  const LloydsConfig lloyds = config.lloyds(beta);
  Matrix powers;
  const Matrix* cache = nullptr;
  if (run.leaves.size() > 1 && wants_power_cache(instance, beta, config)) {
    powers = beta_power_matrix(instance, beta);
    cache = &powers;
  }
  CostStepFunction step;
  step.values.reserve(run.leaves.size());
  step.boundaries.reserve(run.leaves.size() - 1);
  for (std::size_t l = 0; l < run.leaves.size(); ++l) {
    const CenterSet initial =
        centers_from_indices(instance, run.leaves[l].centers);
    const LloydsResult result =
        lloyds_iterate(instance, initial, lloyds, cache);
    step.values.push_back(hamming_distance(instance, result.clustering));
    if (l + 1 < run.leaves.size())
      step.boundaries.push_back(run.leaves[l].interval.hi);
  }
  if (breakpoints) *breakpoints = run.breakpoints;
  return step;
}

std::vector<double> mean_step_cost(std::span<const CostStepFunction> steps,
                                   std::span<const double> alphas,
                                   int threads) {
  const int m = static_cast<int>(steps.size());
  std::vector<double> out(alphas.size());
  parallel_for(
      static_cast<std::int64_t>(alphas.size()),
      [&](std::int64_t q) {
        double sum = 0.0;
        for (int j = 0; j < m; ++j) sum += steps[j].value_at(alphas[q]);
        out[q] = sum / m;
      },
      threads);
  return out;
}

TuneResult tune_alpha(const Sample& sample, double beta, AlphaInterval range,
                      double eps, const TunerConfig& config) {
  check_sample(sample, "tune_alpha");
  TunerConfig cfg = config;
  cfg.eps = eps;

  TuneResult result;
  result.steps.resize(sample.size());
  std::vector<BreakpointSet> sets(sample.size());
  std::vector<std::vector<double>> midpoints(sample.size());
  parallel_for(
      sample.size(),
      [&](std::int64_t j) {
        const EnumerationResult run = enumerate_execution_tree(
            sample.instances[j], sample.seeds[j], range, eps, d_alpha_family(),
            static_cast<int>(j));
        sets[j] = run.breakpoints;
        midpoints[j].reserve(run.leaves.size());
        for (const ExecutionLeaf& leaf : run.leaves)
          midpoints[j].push_back(leaf.interval.midpoint());
        const LloydsConfig lloyds = cfg.lloyds(beta);
        Matrix powers;
        const Matrix* cache = nullptr;
        if (run.leaves.size() > 1 &&
            wants_power_cache(sample.instances[j], beta, cfg)) {
          powers = beta_power_matrix(sample.instances[j], beta);
          cache = &powers;
        }
        CostStepFunction& step = result.steps[j];
        step.values.reserve(run.leaves.size());
        for (std::size_t l = 0; l < run.leaves.size(); ++l) {
          const CenterSet initial = centers_from_indices(
              sample.instances[j], run.leaves[l].centers);
          const LloydsResult lr =
              lloyds_iterate(sample.instances[j], initial, lloyds, cache);
          step.values.push_back(hamming_distance(sample.instances[j],
                                                 lr.clustering));
          if (l + 1 < run.leaves.size())
            step.boundaries.push_back(run.leaves[l].interval.hi);
        }
      },
      cfg.threads);

  BreakpointSet merged;
  merged.precision = eps;
  for (const BreakpointSet& set : sets)
    merged.points.insert(merged.points.end(), set.points.begin(),
                         set.points.end());
  result.breakpoints = deduplicate(std::move(merged));

  // Candidates: range endpoints, every deduplicated breakpoint, and every
  // leaf midpoint, so some candidate lands inside each constant piece of the
  // sample cost.
  std::vector<double> candidates;
  candidates.push_back(range.lo);
  candidates.push_back(range.hi);
  for (const Breakpoint& bp : result.breakpoints.points)
    candidates.push_back(bp.alpha);
  for (const std::vector<double>& mids : midpoints)
    candidates.insert(candidates.end(), mids.begin(), mids.end());
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()),
                   candidates.end());

  const std::vector<double> costs =
      mean_step_cost(result.steps, candidates, cfg.threads);
  result.table.resize(candidates.size());
  int best = 0;
  for (std::size_t q = 0; q < candidates.size(); ++q) {
    result.table[q] = CandidateCost{candidates[q], costs[q]};
    if (costs[q] < costs[best]) best = static_cast<int>(q);
  }
  result.alpha_hat = candidates[best];
  result.cost = costs[best];
  result.evaluations = static_cast<std::int64_t>(candidates.size());
  return result;
}

BaselineResult discretized_baseline(const Sample& sample, double beta,
                                    AlphaInterval range, double step,
                                    const TunerConfig& config) {
  check_sample(sample, "discretized_baseline");
  if (!(step > 0.0))
    throw std::invalid_argument("discretized_baseline: step must be > 0");
  const std::int64_t count =
      static_cast<std::int64_t>(std::floor(range.width() / step)) + 1;
  const LloydsConfig lloyds = config.lloyds(beta);
  const int m = sample.size();

  // One beta-power cache per instance, shared across the whole grid.
  std::vector<Matrix> caches(m);
  std::vector<const Matrix*> cache_ptr(m, nullptr);
  for (int j = 0; j < m; ++j) {
    if (wants_power_cache(sample.instances[j], beta, config)) {
      caches[j] = beta_power_matrix(sample.instances[j], beta);
      cache_ptr[j] = &caches[j];
    }
  }

  std::vector<double> sums(count, 0.0);
  parallel_for(
      count,
      [&](std::int64_t q) {
        const double alpha = range.lo + static_cast<double>(q) * step;
        double sum = 0.0;
        for (int j = 0; j < m; ++j)
          sum += clus_cost(sample.instances[j], sample.seeds[j], alpha, lloyds,
                           cache_ptr[j]);
        sums[q] = sum / m;
      },
      config.threads);

  BaselineResult result;
  result.evaluations = count;
  int best = 0;
  for (std::int64_t q = 1; q < count; ++q)
    if (sums[q] < sums[best]) best = static_cast<int>(q);
  result.alpha = range.lo + static_cast<double>(best) * step;
  result.cost = sums[best];
  return result;
}

TrainTestReport train_test_report(const Sample& train, const Sample& test,
                                  double beta, const TunerConfig& config) {
  check_sample(train, "train_test_report");
  check_sample(test, "train_test_report");
  TrainTestReport report;
  report.alpha_grid = grid_or_default(config.alpha_grid, config.alpha_range.lo,
                                      config.alpha_range.hi, 50);
  report.train_cost.resize(report.alpha_grid.size());
  report.test_cost.resize(report.alpha_grid.size());
  for (std::size_t g = 0; g < report.alpha_grid.size(); ++g) {
    report.train_cost[g] =
        empirical_cost(train, report.alpha_grid[g], beta, config).mean;
    report.test_cost[g] =
        empirical_cost(test, report.alpha_grid[g], beta, config).mean;
    report.max_gap = std::max(
        report.max_gap, std::abs(report.train_cost[g] - report.test_cost[g]));
  }
  report.gap_flagged = report.max_gap > kGapFlagThreshold;

  const TuneResult tuned =
      tune_alpha(train, beta, config.alpha_range, config.eps, config);
  report.alpha_hat = tuned.alpha_hat;
  report.train_at_hat = tuned.cost;
  report.test_at_hat = empirical_cost(test, tuned.alpha_hat, beta, config).mean;
  report.suggested_m = advisory_sample_size(
      config, train.instances.front().n(), train.instances.front().k());
  return report;
}

TrainTestReport train_test_report(const DistributionConfig& distribution,
                                  double beta, const TunerConfig& config) {
  if (config.m < 2)
    throw std::invalid_argument("train_test_report: m must be >= 2");
  const Sample full = draw_sample(distribution, config.m, config.seed);
  Sample train, test;
  const int half = config.m / 2;
  for (int j = 0; j < full.size(); ++j) {
    Sample& side = j < half ? train : test;
    side.instances.push_back(full.instances[j]);
    side.seeds.push_back(full.seeds[j]);
  }
  return train_test_report(train, test, beta, config);
}

}  // namespace lloydspp
