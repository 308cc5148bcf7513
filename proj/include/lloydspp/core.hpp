#pragma once

#include <Eigen/Core>

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lloydspp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Array = Eigen::ArrayXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Metric { kEuclidean };

/// A clustering instance: n points with a metric, a desired cluster count k,
/// and a ground-truth labeling used as the tuning target.
class ClusteringInstance {
 public:
  /// Throws std::invalid_argument unless 1 <= k <= n, target has one label per
  /// point, and every label in {0..k-1} occurs at least once.
  ClusteringInstance(Matrix points, int k, std::vector<int> target,
                     Metric metric = Metric::kEuclidean);

  int n() const { return static_cast<int>(points_.rows()); }
  int k() const { return k_; }
  int dim() const { return static_cast<int>(points_.cols()); }
  const Matrix& points() const { return points_; }
  const std::vector<int>& target() const { return target_; }
  Metric metric() const { return metric_; }

  /// d(v_i, v_j); bounds-checked.
  double distance(int i, int j) const;

  /// Distances from every point to an arbitrary location.
  Array distances_to(const Eigen::RowVectorXd& p) const;

 private:
  Matrix points_;
  int k_;
  std::vector<int> target_;
  Metric metric_;
};

/// k centers, as coordinates plus the originating point index per center
/// (-1 for synthetic centers such as coordinate means).
struct CenterSet {
  Matrix coords;             // k x dim
  std::vector<int> indices;  // size k; -1 when the center is not a dataset point

  int k() const { return static_cast<int>(indices.size()); }
};

CenterSet centers_from_indices(const ClusteringInstance& instance,
                               std::span<const int> indices);

/// A k-partition of the points. Empty clusters are permitted; centers are
/// present whenever the producing operation defines them.
struct Clustering {
  std::vector<int> assignment;  // point index -> cluster index in {0..k-1}
  std::optional<CenterSet> centers;
};

/// Distance spread statistics of an instance: R is the max ratio between
/// non-zero pairwise distances, s the minimum ratio between consecutive
/// distinct distance values (s > 1 when two distinct non-zero values exist).
struct DistanceStats {
  double R = 1.0;
  double s = kInf;
  double dmax = 0.0;
  double dmin_nonzero = 0.0;
};

DistanceStats distance_stats(const ClusteringInstance& instance);

double pairwise_distance(const ClusteringInstance& instance, int i, int j);

/// Assigns every point to its nearest center; ties go to the lowest center
/// position in the sequence.
Clustering voronoi_partition(const ClusteringInstance& instance,
                             const CenterSet& centers);

/// The l_beta objective (sum of d(v, c_v)^beta)^(1/beta); beta = inf gives the
/// k-center objective max_v d(v, c_v). Requires centers.
double lp_cost(const ClusteringInstance& instance, const Clustering& clustering,
               double beta);

/// Permutation sigma of {0..k-1} maximizing sum_i confusion(i, sigma(i)).
/// Hungarian method; throws on non-square input.
std::vector<int> optimal_matching(const Eigen::MatrixXd& confusion);

/// Permutation-matched clustering distance: min over label permutations of the
/// fraction of points placed differently from the target. Result in [0, 1].
double hamming_distance(std::span<const int> found, std::span<const int> target,
                        int k);

double hamming_distance(const ClusteringInstance& instance,
                        const Clustering& found);

}  // namespace lloydspp
