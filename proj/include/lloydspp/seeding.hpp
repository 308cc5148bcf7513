#pragma once

#include <memory>
#include <span>
#include <vector>

#include "lloydspp/core.hpp"

namespace lloydspp {

/// The k pre-drawn uniforms that make the seeding phase a deterministic
/// function of (instance, Z, alpha).
struct SeedVector {
  std::vector<double> z;  // each entry in [0,1)
};

/// Distances from all points to the current center set, sorted descending
/// (ties by ascending point index), together with everything needed to
/// evaluate the cumulative sampling probabilities D_i(alpha)/D_n(alpha).
///
/// Round 1 (no centers yet) is the uniform rule: every point gets an
/// equal-width interval in index order, independent of alpha. When every
/// distance is zero the profile is degenerate and callers fall back to a
/// uniform pick over non-center points.
struct SortedDistanceProfile {
  std::vector<int> order;       // rank -> original point index
  Array d;                      // distances, non-increasing
  Array log_ratio;              // ln(d_r / d_0); -inf where d_r == 0
  std::vector<char> is_center;  // indexed by original point index
  bool uniform = false;         // round-1 rule: equal weights, index order
  bool degenerate = false;      // all distances zero

  int n() const { return static_cast<int>(order.size()); }
};

/// Profile of d_min(v, centers) for all v; centers may be empty (round 1).
SortedDistanceProfile distance_profile(const ClusteringInstance& instance,
                                       std::span<const int> centers);

/// Profile from a precomputed d_min array (shared by seed() and the
/// execution-tree enumeration so both follow the identical code path).
SortedDistanceProfile profile_from_distances(const Array& dmin,
                                             std::span<const int> centers);

/// D_i(alpha)/D_n(alpha) for 1 <= i <= n, computed after factoring out the
/// largest distance so alpha up to a few hundred stays finite. Zero distances
/// carry zero weight for every alpha >= 0. Throws on a degenerate profile.
double partial_sum_ratio(const SortedDistanceProfile& profile, int i,
                         double alpha);

/// The point whose interval [D_{i-1}/D_n, D_i/D_n) contains z. Degenerate
/// profiles pick uniformly over non-center points via z.
int pick_center(const SortedDistanceProfile& profile, double alpha, double z);

/// Phase 1: d^alpha-sampling driven by Z. alpha = inf is farthest-first
/// traversal with argmax ties sharing z_t mass equally in index order.
/// Returns k distinct point indices in pick order.
std::vector<int> seed(const ClusteringInstance& instance, const SeedVector& Z,
                      double alpha);

/// One seeding round of an alpha-parameterized initialization family: the
/// cumulative pick probabilities S_1(alpha) <= ... <= S_n(alpha) over points
/// ordered by decreasing pick probability. The breakpoint enumeration only
/// needs these partial sums to be monotone increasing, continuous, and
/// non-crossing in alpha.
class SeedingRound {
 public:
  virtual ~SeedingRound() = default;

  virtual int slots() const = 0;
  /// S_i(alpha) for 1 <= i <= slots(); S_slots == 1.
  virtual double partial_sum(int i, double alpha) const = 0;
  /// rank (1-based) -> original point index.
  virtual int point(int rank) const = 0;
  /// False when the round's pick cannot depend on alpha (lets the
  /// enumeration skip the search entirely).
  virtual bool alpha_dependent() const = 0;

  /// First rank whose partial sum exceeds z; the generic implementation
  /// binary-searches partial_sum, overrides may do it faster but must agree.
  virtual int pick(double alpha, double z) const;
};

class SeedingFamily {
 public:
  virtual ~SeedingFamily() = default;
  virtual std::unique_ptr<SeedingRound> round(
      const ClusteringInstance& instance,
      std::span<const int> centers) const = 0;
};

/// The built-in d^alpha family (the seeding phase of the clustering
/// algorithm, including the uniform round-1 and degenerate conventions).
class DAlphaFamily final : public SeedingFamily {
 public:
  std::unique_ptr<SeedingRound> round(const ClusteringInstance& instance,
                                      std::span<const int> centers) const override;
};

const SeedingFamily& d_alpha_family();

/// S_{i,C}(alpha) accessor on an arbitrary family.
double family_partial_sum(const SeedingFamily& family,
                          const ClusteringInstance& instance,
                          std::span<const int> centers, int i, double alpha);

/// Spot-checks the family interface contract (partial sums in [0,1],
/// monotone in i and in alpha) on a few probe values. Throws
/// std::invalid_argument naming the violated property.
void check_family_contract(const SeedingFamily& family,
                           const ClusteringInstance& instance,
                           std::span<const int> centers, double alpha_lo,
                           double alpha_hi);

}  // namespace lloydspp
