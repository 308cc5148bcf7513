#include "lloydspp/core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lloydspp {

ClusteringInstance::ClusteringInstance(Matrix points, int k,
                                       std::vector<int> target, Metric metric)
    : points_(std::move(points)),
      k_(k),
      target_(std::move(target)),
      metric_(metric) {
  const int n = static_cast<int>(points_.rows());
  if (n < 1) throw std::invalid_argument("instance: empty point set");
  if (k_ < 1 || k_ > n)
    throw std::invalid_argument("instance: k must satisfy 1 <= k <= n");
  if (static_cast<int>(target_.size()) != n)
    throw std::invalid_argument("instance: target size mismatch");
  std::vector<char> seen(k_, 0);
  for (int label : target_) {
    if (label < 0 || label >= k_)
      throw std::invalid_argument("instance: target label out of range");
    seen[label] = 1;
  }
  for (int c = 0; c < k_; ++c)
    if (!seen[c]) throw std::invalid_argument("instance: empty target label");
}

double ClusteringInstance::distance(int i, int j) const {
  const int nn = n();
  if (i < 0 || i >= nn || j < 0 || j >= nn)
    throw std::out_of_range("distance: point index out of range");
  return (points_.row(i) - points_.row(j)).norm();
}

Array ClusteringInstance::distances_to(const Eigen::RowVectorXd& p) const {
  return (points_.rowwise() - p).rowwise().norm().array();
}

double pairwise_distance(const ClusteringInstance& instance, int i, int j) {
  return instance.distance(i, j);
}

CenterSet centers_from_indices(const ClusteringInstance& instance,
                               std::span<const int> indices) {
  CenterSet cs;
  cs.coords.resize(static_cast<Eigen::Index>(indices.size()), instance.dim());
  cs.indices.assign(indices.begin(), indices.end());
  for (std::size_t t = 0; t < indices.size(); ++t) {
    const int idx = indices[t];
    if (idx < 0 || idx >= instance.n())
      throw std::out_of_range("centers_from_indices: index out of range");
    cs.coords.row(static_cast<Eigen::Index>(t)) = instance.points().row(idx);
  }
  return cs;
}

DistanceStats distance_stats(const ClusteringInstance& instance) {
  const int n = instance.n();
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double d = instance.distance(i, j);
      if (d > 0.0) values.push_back(d);
    }
  DistanceStats stats;
  if (values.empty()) return stats;
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  stats.dmin_nonzero = values.front();
  stats.dmax = values.back();
  stats.R = stats.dmax / stats.dmin_nonzero;
  for (std::size_t i = 1; i < values.size(); ++i)
    stats.s = std::min(stats.s, values[i] / values[i - 1]);
  return stats;
}

Clustering voronoi_partition(const ClusteringInstance& instance,
                             const CenterSet& centers) {
  const int k = centers.k();
  if (k < 1) throw std::invalid_argument("voronoi_partition: no centers");
  const int n = instance.n();
  Clustering out;
  out.assignment.resize(n);
  Matrix dist(n, k);
  for (int c = 0; c < k; ++c)
    dist.col(c) = instance.distances_to(centers.coords.row(c)).matrix();
  for (int i = 0; i < n; ++i) {
    int best = 0;
    double bestd = dist(i, 0);
    for (int c = 1; c < k; ++c) {
      if (dist(i, c) < bestd) {
        bestd = dist(i, c);
        best = c;
      }
    }
    out.assignment[i] = best;
  }
  out.centers = centers;
  return out;
}

double lp_cost(const ClusteringInstance& instance, const Clustering& clustering,
               double beta) {
  if (!clustering.centers)
    throw std::invalid_argument("lp_cost: clustering has no centers");
  if (!(beta >= 1.0))
    throw std::invalid_argument("lp_cost: beta must be >= 1");
  const int n = instance.n();
  if (static_cast<int>(clustering.assignment.size()) != n)
    throw std::invalid_argument("lp_cost: assignment size mismatch");
  Array d(n);
  for (int i = 0; i < n; ++i) {
    const int c = clustering.assignment[i];
    d[i] = (instance.points().row(i) - clustering.centers->coords.row(c)).norm();
  }
  const double dmax = d.maxCoeff();
  if (beta == kInf || dmax == 0.0) return dmax;
  // Factor out dmax so d^beta stays in [0,1] for arbitrarily large beta.
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += std::pow(d[i] / dmax, beta);
  return dmax * std::pow(sum, 1.0 / beta);
}

std::vector<int> optimal_matching(const Eigen::MatrixXd& confusion) {
  if (confusion.rows() != confusion.cols())
    throw std::invalid_argument("optimal_matching: matrix must be square");
  const int k = static_cast<int>(confusion.rows());
  if (k == 0) return {};
  // Hungarian method with potentials, run on cost = maxval - confusion so the
  // minimum-cost assignment maximizes agreement.
  const double maxval = confusion.maxCoeff();
  std::vector<double> u(k + 1, 0.0), v(k + 1, 0.0);
  std::vector<int> p(k + 1, 0), way(k + 1, 0);
  for (int i = 1; i <= k; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(k + 1, kInf);
    std::vector<char> used(k + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      int j1 = -1;
      double delta = kInf;
      for (int j = 1; j <= k; ++j) {
        if (used[j]) continue;
        const double cur = (maxval - confusion(i0 - 1, j - 1)) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= k; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> sigma(k, -1);
  for (int j = 1; j <= k; ++j) sigma[p[j] - 1] = j - 1;
  return sigma;
}

double hamming_distance(std::span<const int> found, std::span<const int> target,
                        int k) {
  if (found.size() != target.size())
    throw std::invalid_argument("hamming_distance: point sets differ");
  const int n = static_cast<int>(found.size());
  if (n == 0) throw std::invalid_argument("hamming_distance: empty point set");
  Eigen::MatrixXd confusion = Eigen::MatrixXd::Zero(k, k);
  for (int i = 0; i < n; ++i) {
    if (found[i] < 0 || found[i] >= k || target[i] < 0 || target[i] >= k)
      throw std::invalid_argument("hamming_distance: cluster index out of range");
    confusion(found[i], target[i]) += 1.0;
  }
  const std::vector<int> sigma = optimal_matching(confusion);
  double agreement = 0.0;
  for (int i = 0; i < k; ++i) agreement += confusion(i, sigma[i]);
  return (static_cast<double>(n) - agreement) / static_cast<double>(n);
}

double hamming_distance(const ClusteringInstance& instance,
                        const Clustering& found) {
  return hamming_distance(found.assignment, instance.target(), instance.k());
}

}  // namespace lloydspp
