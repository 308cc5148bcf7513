#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "lloydspp/core.hpp"
#include "lloydspp/seeding.hpp"

namespace lloydspp {

/// Half-open alpha range [lo, hi); the final interval of an enumeration is
/// closed at the upper end of the search range.
struct AlphaInterval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const { return hi - lo; }
  double midpoint() const { return 0.5 * (lo + hi); }
};

/// A state of the seeding phase: the centers chosen so far and the alpha
/// range that produces exactly this prefix.
struct ExecutionNode {
  std::vector<int> centers;
  AlphaInterval interval;

  int depth() const { return static_cast<int>(centers.size()); }
};

struct ExecutionLeaf {
  std::vector<int> centers;
  AlphaInterval interval;
};

struct Breakpoint {
  double alpha = 0.0;
  int instance_index = 0;
};

/// Boundaries between sibling intervals across a whole enumeration (or the
/// union over a sample), with the eps they were solved to.
struct BreakpointSet {
  std::vector<Breakpoint> points;
  double precision = 0.0;

  std::size_t size() const { return points.size(); }
};

/// Sorts and collapses breakpoints closer than the set's precision, leaving a
/// strictly increasing sequence.
BreakpointSet deduplicate(BreakpointSet set);

/// Bisection root of S_rank(alpha) = z inside search. The partial sum is
/// monotone increasing in alpha, so the root exists iff
/// S_rank(lo) <= z < S_rank(hi); anything else is a caller bug. The result is
/// within eps of the true root and sits on its right side, so evaluating at
/// the returned alpha already picks the right-hand center (half-open interval
/// convention). Uses at most ceil(log2(width/eps)) iterations.
double solve_breakpoint(const SeedingRound& round, int rank, double z,
                        AlphaInterval search, double eps,
                        int* iterations = nullptr);
double solve_breakpoint(const SortedDistanceProfile& profile, int rank,
                        double z, AlphaInterval search, double eps,
                        int* iterations = nullptr);

struct ChildSplit {
  std::vector<ExecutionNode> children;  // ordered by interval position
  std::vector<double> boundaries;       // internal boundaries, ascending
};

/// Splits a node's interval by the center chosen in the next round. The picks
/// at the interval endpoints bound the reachable ranks (partial sums are
/// non-crossing), one breakpoint is solved per consecutive rank pair, and the
/// children partition the node's interval in order. Zero-width children are
/// dropped.
ChildSplit child_intervals(const ExecutionNode& node,
                           const ClusteringInstance& instance,
                           const SeedingFamily& family, double z_t, double eps);

struct EnumerationResult {
  std::vector<ExecutionLeaf> leaves;  // ascending, partitioning the range
  BreakpointSet breakpoints;
};

/// Depth-first traversal of the execution tree: enumerates every center
/// sequence the seeding phase can output for alpha in range, as leaves whose
/// intervals partition [range.lo, range.hi]. Leaf count = breakpoint count + 1.
EnumerationResult enumerate_execution_tree(
    const ClusteringInstance& instance, const SeedVector& Z,
    AlphaInterval range, double eps,
    const SeedingFamily& family = d_alpha_family(), int instance_index = 0);

/// Leaf whose interval contains alpha (boundaries belong to the right
/// interval; alpha at or past the range end maps to the last leaf).
const ExecutionLeaf& leaf_at(std::span<const ExecutionLeaf> leaves,
                             double alpha);

struct IntervalCountRow {
  int n = 0;
  double mean_intervals = 0.0;
  double stderr_ = 0.0;
};

using InstanceSampler =
    std::function<std::pair<ClusteringInstance, SeedVector>(int n, int sample)>;

/// Mean leaf count per instance size over m samples of the given sampler.
std::vector<IntervalCountRow> count_intervals_vs_n(const InstanceSampler& sampler,
                                                   std::span<const int> n_grid,
                                                   int m, AlphaInterval range,
                                                   double eps, int threads = 0);

struct HistogramBin {
  double lo = 0.0;
  double hi = 0.0;
  std::int64_t count = 0;
};

/// Fixed-width histogram of breakpoint locations over range; counts sum to
/// the set size. Empty set yields an empty histogram.
std::vector<HistogramBin> breakpoint_histogram(const BreakpointSet& set,
                                               int bins, AlphaInterval range);

}  // namespace lloydspp
