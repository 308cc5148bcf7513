#pragma once

#include <span>

#include "lloydspp/core.hpp"
#include "lloydspp/seeding.hpp"

namespace lloydspp {

enum class CenterRule { kMedoid, kEuclideanMean };

/// beta-Lloyd's configuration. The Euclidean-mean rule is only valid for
/// beta = 2 on a Euclidean instance; full_scan restores the literal
/// argmin-over-all-points medoid update (default scans the cluster's points).
struct LloydsConfig {
  double beta = 2.0;
  int T = 3;
  CenterRule center_rule = CenterRule::kMedoid;
  bool full_scan = false;

  void validate(const ClusteringInstance& instance) const;
};

struct Center {
  Eigen::RowVectorXd coords;
  int index = -1;  // dataset point index, or -1 for a coordinate mean
};

/// Pairwise d(i,j)^beta for every point pair; an optional cache for repeated
/// medoid updates on the same instance. Requires finite beta.
Matrix beta_power_matrix(const ClusteringInstance& instance, double beta);

/// Center of one non-empty cluster: the medoid minimizing
/// sum_v d(x,v)^beta (minimax for beta = inf), or the coordinate centroid.
/// Candidate ties break to the lowest point index.
Center center_update(const ClusteringInstance& instance,
                     std::span<const int> cluster, const LloydsConfig& config,
                     const Matrix* beta_powers = nullptr);

struct LloydsResult {
  Clustering clustering;
  int iterations = 0;
  bool converged = false;
};

/// Alternates Voronoi assignment and center updates until the center set is
/// unchanged or T iterations have run. Empty clusters retain their previous
/// center. The returned clustering is the Voronoi partition of the final
/// centers.
LloydsResult lloyds_iterate(const ClusteringInstance& instance,
                            const CenterSet& initial,
                            const LloydsConfig& config,
                            const Matrix* beta_powers = nullptr);

/// Full pipeline cost: seed, run Lloyd's, and measure the permutation-matched
/// Hamming distance to the instance target. Deterministic in all inputs.
double clus_cost(const ClusteringInstance& instance, const SeedVector& Z,
                 double alpha, const LloydsConfig& config,
                 const Matrix* beta_powers = nullptr);

}  // namespace lloydspp
