#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "lloydspp/breakpoints.hpp"
#include "lloydspp/core.hpp"
#include "lloydspp/datagen.hpp"
#include "lloydspp/lloyds.hpp"

namespace lloydspp {

struct TunerConfig {
  int m = 0;
  AlphaInterval alpha_range{0.0, 20.0};
  std::vector<double> alpha_grid;  // empty = 50 points over alpha_range
  std::vector<double> beta_grid;   // empty = 25 points over [1, 10]
  double eps = 1e-7;
  double delta = 0.05;     // confidence parameter, reporting only
  double accuracy = 0.05;  // cost accuracy for the advisory sample-size line
  int T = 3;
  CenterRule center_rule = CenterRule::kMedoid;
  bool full_scan = false;
  std::uint64_t seed = 0;
  int threads = 0;

  LloydsConfig lloyds(double beta) const {
    return LloydsConfig{beta, T, center_rule, full_scan};
  }
};

std::vector<double> linspace(double lo, double hi, int count);

struct Sample {
  std::vector<ClusteringInstance> instances;
  std::vector<SeedVector> seeds;

  int size() const { return static_cast<int>(instances.size()); }
};

/// m i.i.d. (instance, Z) pairs from the distribution; element i depends only
/// on (seed, config, i).
Sample draw_sample(const DistributionConfig& distribution, int m,
                   std::uint64_t seed);

struct CostStats {
  double mean = 0.0;
  double stderr_ = 0.0;
};

/// Sample mean of the pipeline cost at fixed parameters, with its standard
/// error. Per-element costs are reduced in element order, so the result never
/// depends on scheduling.
CostStats empirical_cost(const Sample& sample, double alpha, double beta,
                         const TunerConfig& config);

struct CostSurface {
  std::vector<double> alphas;
  std::vector<double> betas;
  Matrix mean;     // alphas.size() x betas.size()
  Matrix stderr_;  // same shape

  /// Cell indices of the minimum mean cost; ties break to the
  /// lexicographically smallest (alpha, beta) value pair.
  std::pair<int, int> argmin() const;
};

CostSurface sweep_surface(const Sample& sample,
                          std::span<const double> alpha_grid,
                          std::span<const double> beta_grid,
                          const TunerConfig& config);

/// Piecewise-constant alpha -> cost map of one sample element, built from the
/// execution-tree leaves; boundaries belong to the interval on their right.
struct CostStepFunction {
  std::vector<double> boundaries;  // interior leaf boundaries, ascending
  std::vector<double> values;      // one per leaf

  double value_at(double alpha) const;
};

CostStepFunction cost_step_function(const ClusteringInstance& instance,
                                    const SeedVector& Z, double beta,
                                    AlphaInterval range,
                                    const TunerConfig& config,
                                    BreakpointSet* breakpoints = nullptr,
                                    int instance_index = 0);

struct CandidateCost {
  double alpha = 0.0;
  double cost = 0.0;
};

struct TuneResult {
  double alpha_hat = 0.0;
  double cost = 0.0;
  std::vector<CandidateCost> table;       // all candidates, ascending alpha
  BreakpointSet breakpoints;              // deduplicated union over the sample
  std::vector<CostStepFunction> steps;    // per sample element
  std::int64_t evaluations = 0;           // alpha candidates evaluated
};

/// Breakpoint-exact alpha tuning at fixed beta: enumerates every sample
/// element's execution tree, evaluates the sample cost at all deduplicated
/// breakpoints, all leaf midpoints, and both range endpoints, and returns the
/// minimizer (ties to the smallest alpha).
TuneResult tune_alpha(const Sample& sample, double beta, AlphaInterval range,
                      double eps, const TunerConfig& config);

/// Mean of the cached step functions at each query point.
std::vector<double> mean_step_cost(std::span<const CostStepFunction> steps,
                                   std::span<const double> alphas,
                                   int threads = 0);

struct BaselineResult {
  double alpha = 0.0;
  double cost = 0.0;
  std::int64_t evaluations = 0;  // floor(width/step) + 1 grid points
};

/// Uniform-grid argmin over alpha at fixed beta, evaluating the full pipeline
/// at every grid point; the runtime foil for tune_alpha.
BaselineResult discretized_baseline(const Sample& sample, double beta,
                                    AlphaInterval range, double step,
                                    const TunerConfig& config);

struct TrainTestReport {
  std::vector<double> alpha_grid;
  std::vector<double> train_cost;
  std::vector<double> test_cost;
  double max_gap = 0.0;
  bool gap_flagged = false;  // max_gap above the reporting threshold
  double alpha_hat = 0.0;
  double train_at_hat = 0.0;
  double test_at_hat = 0.0;
  std::int64_t suggested_m = 0;  // advisory sample size, never enforced
};

/// Tunes alpha on the train half, evaluates the result on the test half, and
/// reports train/test cost curves over the alpha grid with their largest gap.
TrainTestReport train_test_report(const Sample& train, const Sample& test,
                                  double beta, const TunerConfig& config);

/// Draws config.m elements and splits them evenly (first half trains).
TrainTestReport train_test_report(const DistributionConfig& distribution,
                                  double beta, const TunerConfig& config);

}  // namespace lloydspp
