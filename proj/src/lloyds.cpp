#include "lloydspp/lloyds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lloydspp {

namespace {

constexpr double kMeanConvergenceTol = 1e-12;

double candidate_cost(const ClusteringInstance& instance, int x,
                      std::span<const int> cluster, double beta,
                      const Matrix* beta_powers) {
  if (beta == kInf) {
    double worst = 0.0;
    for (int v : cluster) worst = std::max(worst, instance.distance(x, v));
    return worst;
  }
  double sum = 0.0;
  if (beta_powers) {
    // Column walk keeps the reads contiguous (column-major, symmetric matrix)
    // while preserving the summation order of the uncached path.
    for (int v : cluster) sum += (*beta_powers)(v, x);
  } else {
    for (int v : cluster) sum += std::pow(instance.distance(x, v), beta);
  }
  return sum;
}

bool same_centers(const CenterSet& a, const CenterSet& b, CenterRule rule) {
  if (a.k() != b.k()) return false;
  if (rule == CenterRule::kEuclideanMean)
    return (a.coords - b.coords).cwiseAbs().maxCoeff() <= kMeanConvergenceTol;
  // Medoid centers are compared as unordered index sets.
  std::vector<int> ia = a.indices, ib = b.indices;
  for (int idx : ia)
    if (idx < 0) return false;
  for (int idx : ib)
    if (idx < 0) return false;
  std::sort(ia.begin(), ia.end());
  std::sort(ib.begin(), ib.end());
  return ia == ib;
}

}  // namespace

void LloydsConfig::validate(const ClusteringInstance& instance) const {
  if (!(beta >= 1.0))
    throw std::invalid_argument("lloyds: beta must lie in [1, inf]");
  if (T < 1) throw std::invalid_argument("lloyds: T must be positive");
  if (center_rule == CenterRule::kEuclideanMean) {
    if (beta != 2.0 || instance.metric() != Metric::kEuclidean)
      throw std::invalid_argument(
          "lloyds: the mean rule requires beta = 2 and a Euclidean metric");
  }
}

Matrix beta_power_matrix(const ClusteringInstance& instance, double beta) {
  if (!(beta >= 1.0) || beta == kInf)
    throw std::invalid_argument("beta_power_matrix: beta must be finite, >= 1");
  const int n = instance.n();
  Matrix powers(n, n);
  for (int i = 0; i < n; ++i) {
    powers(i, i) = 0.0;
    for (int j = i + 1; j < n; ++j) {
      const double p = std::pow(instance.distance(i, j), beta);
      powers(i, j) = p;
      powers(j, i) = p;
    }
  }
  return powers;
}

Center center_update(const ClusteringInstance& instance,
                     std::span<const int> cluster, const LloydsConfig& config,
                     const Matrix* beta_powers) {
  if (cluster.empty())
    throw std::invalid_argument("center_update: empty cluster");
  Center center;
  if (config.center_rule == CenterRule::kEuclideanMean) {
    Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(instance.dim());
    for (int v : cluster) mean += instance.points().row(v);
    center.coords = mean / static_cast<double>(cluster.size());
    center.index = -1;
    return center;
  }
  int best = -1;
  double best_cost = kInf;
  if (config.full_scan) {
    for (int x = 0; x < instance.n(); ++x) {
      const double c = candidate_cost(instance, x, cluster, config.beta,
                                      beta_powers);
      if (c < best_cost) {
        best_cost = c;
        best = x;
      }
    }
  } else {
    for (int x : cluster) {
      const double c = candidate_cost(instance, x, cluster, config.beta,
                                      beta_powers);
      if (c < best_cost) {
        best_cost = c;
        best = x;
      }
    }
  }
  center.coords = instance.points().row(best);
  center.index = best;
  return center;
}

LloydsResult lloyds_iterate(const ClusteringInstance& instance,
                            const CenterSet& initial,
                            const LloydsConfig& config,
                            const Matrix* beta_powers) {
  config.validate(instance);
  const int k = instance.k();
  if (initial.k() != k)
    throw std::invalid_argument("lloyds_iterate: need exactly k initial centers");

  LloydsResult result;
  CenterSet centers = initial;
  while (true) {
    Clustering partition = voronoi_partition(instance, centers);
    std::vector<std::vector<int>> members(k);
    for (int i = 0; i < instance.n(); ++i)
      members[partition.assignment[i]].push_back(i);

    CenterSet updated;
    updated.coords.resize(k, instance.dim());
    updated.indices.resize(k);
    for (int c = 0; c < k; ++c) {
      if (members[c].empty()) {
        updated.coords.row(c) = centers.coords.row(c);
        updated.indices[c] = centers.indices[c];
        continue;
      }
      const Center next = center_update(instance, members[c], config,
                                        beta_powers);
      updated.coords.row(c) = next.coords;
      updated.indices[c] = next.index;
    }
    ++result.iterations;
    if (same_centers(centers, updated, config.center_rule)) {
      result.converged = true;
      result.clustering = std::move(partition);
      return result;
    }
    centers = std::move(updated);
    if (result.iterations == config.T) break;
  }
  result.clustering = voronoi_partition(instance, centers);
  return result;
}

double clus_cost(const ClusteringInstance& instance, const SeedVector& Z,
                 double alpha, const LloydsConfig& config,
                 const Matrix* beta_powers) {
  const std::vector<int> seeds = seed(instance, Z, alpha);
  const CenterSet initial = centers_from_indices(instance, seeds);
  const LloydsResult run = lloyds_iterate(instance, initial, config,
                                          beta_powers);
  return hamming_distance(instance, run.clustering);
}

}  // namespace lloydspp
