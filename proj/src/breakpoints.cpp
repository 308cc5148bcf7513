#include "lloydspp/breakpoints.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lloydspp/parallel.hpp"

namespace lloydspp {

namespace {

void validate_interval(const AlphaInterval& interval) {
  if (!(interval.lo >= 0.0) || !(interval.hi >= interval.lo) ||
      !std::isfinite(interval.hi))
    throw std::invalid_argument("alpha interval: need 0 <= lo <= hi < inf");
}

template <typename PartialSum>
double bisect(PartialSum&& partial_sum, double z, AlphaInterval search,
              double eps, int* iterations) {
  if (!(eps > 0.0)) throw std::invalid_argument("solve_breakpoint: eps <= 0");
  validate_interval(search);
  double lo = search.lo, hi = search.hi;
  if (!(partial_sum(lo) <= z && z < partial_sum(hi)))
    throw std::logic_error("solve_breakpoint: no sign change in search interval");
  int iters = 0;
  while (hi - lo > eps) {
    const double mid = 0.5 * (lo + hi);
    if (partial_sum(mid) > z)
      hi = mid;
    else
      lo = mid;
    ++iters;
  }
  if (iterations) *iterations = iters;
  return hi;  // S(hi) > z, so the returned alpha lies right of the true root
}

}  // namespace

double solve_breakpoint(const SeedingRound& round, int rank, double z,
                        AlphaInterval search, double eps, int* iterations) {
  return bisect([&](double a) { return round.partial_sum(rank, a); }, z,
                search, eps, iterations);
}

double solve_breakpoint(const SortedDistanceProfile& profile, int rank,
                        double z, AlphaInterval search, double eps,
                        int* iterations) {
  return bisect([&](double a) { return partial_sum_ratio(profile, rank, a); },
                z, search, eps, iterations);
}

ChildSplit child_intervals(const ExecutionNode& node,
                           const ClusteringInstance& instance,
                           const SeedingFamily& family, double z_t,
                           double eps) {
  if (node.depth() >= instance.k())
    throw std::invalid_argument("child_intervals: node is already a leaf");
  validate_interval(node.interval);
  const auto round = family.round(instance, node.centers);

  ChildSplit split;
  auto emit = [&](int rank, AlphaInterval interval) {
    ExecutionNode child;
    child.centers = node.centers;
    child.centers.push_back(round->point(rank));
    child.interval = interval;
    split.children.push_back(std::move(child));
  };

  if (!round->alpha_dependent()) {
    emit(round->pick(node.interval.lo, z_t), node.interval);
    return split;
  }

  const int rank_lo = round->pick(node.interval.lo, z_t);
  const int rank_hi = round->pick(node.interval.hi, z_t);
  if (rank_lo == rank_hi) {
    emit(rank_lo, node.interval);
    return split;
  }
  if (rank_lo < rank_hi)
    throw std::logic_error(
        "child_intervals: rank increased with alpha; family violates the "
        "non-crossing contract");

  // One boundary per consecutive rank pair: the switch from rank r to r-1
  // happens where S_{r-1}(alpha) = z_t. Roots come out ascending because the
  // partial sums are non-crossing; clamping absorbs bisection slack.
  double prev = node.interval.lo;
  for (int r = rank_lo; r > rank_hi; --r) {
    double b = solve_breakpoint(*round, r - 1, z_t,
                                {node.interval.lo, node.interval.hi}, eps);
    b = std::min(std::max(b, prev), node.interval.hi);
    if (b > prev) {
      emit(r, {prev, b});
      split.boundaries.push_back(b);
      prev = b;
    }
  }
  if (node.interval.hi > prev) {
    emit(rank_hi, {prev, node.interval.hi});
  } else if (!split.boundaries.empty()) {
    // The last boundary collapsed into the right endpoint; the final emitted
    // child already ends at hi, so the boundary is not a separator.
    split.boundaries.pop_back();
    split.children.back().interval.hi = node.interval.hi;
  }
  return split;
}

EnumerationResult enumerate_execution_tree(const ClusteringInstance& instance,
                                           const SeedVector& Z,
                                           AlphaInterval range, double eps,
                                           const SeedingFamily& family,
                                           int instance_index) {
  validate_interval(range);
  if (!(range.hi > range.lo))
    throw std::invalid_argument("enumerate_execution_tree: empty alpha range");
  if (!(eps > 0.0))
    throw std::invalid_argument("enumerate_execution_tree: eps must be > 0");
  if (static_cast<int>(Z.z.size()) != instance.k())
    throw std::invalid_argument("enumerate_execution_tree: |Z| must equal k");

  EnumerationResult result;
  result.breakpoints.precision = eps;
  std::vector<ExecutionNode> stack;
  stack.push_back(ExecutionNode{{}, range});
  while (!stack.empty()) {
    ExecutionNode node = std::move(stack.back());
    stack.pop_back();
    if (node.depth() == instance.k()) {
      result.leaves.push_back(
          ExecutionLeaf{std::move(node.centers), node.interval});
      continue;
    }
    ChildSplit split =
        child_intervals(node, instance, family, Z.z[node.depth()], eps);
    for (double b : split.boundaries)
      result.breakpoints.points.push_back(Breakpoint{b, instance_index});
    for (auto it = split.children.rbegin(); it != split.children.rend(); ++it)
      stack.push_back(std::move(*it));
  }
  std::sort(result.leaves.begin(), result.leaves.end(),
            [](const ExecutionLeaf& a, const ExecutionLeaf& b) {
              return a.interval.lo < b.interval.lo;
            });
  std::sort(result.breakpoints.points.begin(), result.breakpoints.points.end(),
            [](const Breakpoint& a, const Breakpoint& b) {
              return a.alpha < b.alpha;
            });
  return result;
}

const ExecutionLeaf& leaf_at(std::span<const ExecutionLeaf> leaves,
                             double alpha) {
  if (leaves.empty()) throw std::invalid_argument("leaf_at: no leaves");
  auto it = std::upper_bound(leaves.begin(), leaves.end(), alpha,
                             [](double a, const ExecutionLeaf& leaf) {
                               return a < leaf.interval.lo;
                             });
  if (it == leaves.begin()) return leaves.front();
  return *(it - 1);
}

BreakpointSet deduplicate(BreakpointSet set) {
  std::sort(set.points.begin(), set.points.end(),
            [](const Breakpoint& a, const Breakpoint& b) {
              if (a.alpha != b.alpha) return a.alpha < b.alpha;
              return a.instance_index < b.instance_index;
            });
  std::vector<Breakpoint> kept;
  kept.reserve(set.points.size());
  for (const Breakpoint& bp : set.points) {
    if (kept.empty() || bp.alpha - kept.back().alpha >= set.precision)
      kept.push_back(bp);
  }
  set.points = std::move(kept);
  return set;
}

std::vector<IntervalCountRow> count_intervals_vs_n(const InstanceSampler& sampler,
                                                   std::span<const int> n_grid,
                                                   int m, AlphaInterval range,
                                                   double eps, int threads) {
  if (m < 1) throw std::invalid_argument("count_intervals_vs_n: m must be >= 1");
  std::vector<IntervalCountRow> rows;
  rows.reserve(n_grid.size());
  for (int n : n_grid) {
    std::vector<double> counts(m, 0.0);
    parallel_for(
        m,
        [&](std::int64_t i) {
          auto [instance, Z] = sampler(n, static_cast<int>(i));
          const EnumerationResult run =
              enumerate_execution_tree(instance, Z, range, eps);
          counts[i] = static_cast<double>(run.leaves.size());
        },
        threads);
    double mean = 0.0;
    for (double c : counts) mean += c;
    mean /= m;
    double var = 0.0;
    for (double c : counts) var += (c - mean) * (c - mean);
    const double sd = m > 1 ? std::sqrt(var / (m - 1)) : 0.0;
    rows.push_back(IntervalCountRow{n, mean, sd / std::sqrt(m)});
  }
  return rows;
}

std::vector<HistogramBin> breakpoint_histogram(const BreakpointSet& set,
                                               int bins, AlphaInterval range) {
  if (bins < 1) throw std::invalid_argument("breakpoint_histogram: bins < 1");
  if (set.points.empty()) return {};
  validate_interval(range);
  std::vector<HistogramBin> histogram(bins);
  const double width = range.width() / bins;
  for (int b = 0; b < bins; ++b) {
    histogram[b].lo = range.lo + b * width;
    histogram[b].hi = range.lo + (b + 1) * width;
  }
  histogram.back().hi = range.hi;
  for (const Breakpoint& bp : set.points) {
    int b = static_cast<int>((bp.alpha - range.lo) / width);
    b = std::clamp(b, 0, bins - 1);
    ++histogram[b].count;
  }
  return histogram;
}

}  // namespace lloydspp
