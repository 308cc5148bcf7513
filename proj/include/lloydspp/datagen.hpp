#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "lloydspp/core.hpp"
#include "lloydspp/rng.hpp"
#include "lloydspp/seeding.hpp"

namespace lloydspp {

/// Feature rows with one categorical label each; the raw material for the
/// label-subset instance distribution.
struct LabeledDataset {
  Matrix features;
  std::vector<std::string> labels;
  std::string name;

  int rows() const { return static_cast<int>(features.rows()); }
  int dim() const { return static_cast<int>(features.cols()); }

  /// Distinct label values in first-appearance order.
  std::vector<std::string> label_values() const;
};

enum class DistributionKind { kGaussianGrid, kLabelSubset };

struct DistributionConfig {
  DistributionKind kind = DistributionKind::kGaussianGrid;
  int k = 4;
  int N = 120;  // points per label; n = k*N
  // Gaussian-grid geometry: side x side unit-variance components.
  int grid_side = 3;
  double grid_stride = 5.0;
  // Source dataset for the label-subset distribution.
  std::shared_ptr<const LabeledDataset> dataset;
};

/// 2-D mixture instance: k of the side^2 grid components chosen uniformly,
/// N unit-variance Gaussian points per chosen component (Box-Muller over the
/// counter-based stream), target label = component slot.
ClusteringInstance gaussian_grid_instance(const DistributionConfig& config,
                                          std::uint64_t seed, int i);

/// k labels chosen uniformly without replacement, N rows per chosen label
/// uniformly without replacement; target indices follow the chosen-label
/// order.
ClusteringInstance label_subset_instance(const LabeledDataset& dataset, int k,
                                         int N, std::uint64_t seed, int i);

ClusteringInstance make_instance(const DistributionConfig& config,
                                 std::uint64_t seed, int i);

/// The k uniforms steering the seeding phase of sample element i.
SeedVector draw_seed_vector(std::uint64_t seed, int i, int k);

/// CSV schema: header f0,...,f{d-1},label; numeric feature cells; label is a
/// raw string. Parse failures name the line.
LabeledDataset load_labeled_csv(const std::string& path);
void save_labeled_csv(const std::string& path, const LabeledDataset& dataset);

/// Instances serialize to the same CSV (label = target index) plus a sidecar
/// JSON at <path>.json holding {k, metric, seed, i}.
void save_instance(const std::string& path, const ClusteringInstance& instance,
                   std::uint64_t seed = 0, int i = 0);
ClusteringInstance load_instance(const std::string& path);

}  // namespace lloydspp
