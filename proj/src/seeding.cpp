#include "lloydspp/seeding.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace lloydspp {

namespace {

void validate_unit(double z, const char* what) {
  if (!(z >= 0.0 && z < 1.0))
    throw std::invalid_argument(std::string(what) + ": value must lie in [0,1)");
}

// Eligible points of a degenerate profile: every non-center index, ascending.
std::vector<int> degenerate_eligible(const SortedDistanceProfile& profile) {
  std::vector<int> eligible;
  for (int v = 0; v < profile.n(); ++v)
    if (!profile.is_center[v]) eligible.push_back(v);
  if (eligible.empty())
    throw std::logic_error("seeding: every point is already a center");
  return eligible;
}

// Per-rank sampling weights at a given alpha, after factoring out the largest
// distance. Zero distances carry zero weight for every alpha >= 0.
Array rank_weights(const SortedDistanceProfile& profile, double alpha) {
  const int n = profile.n();
  Array w(n);
  if (alpha == 0.0) {
    for (int r = 0; r < n; ++r) w[r] = profile.d[r] > 0.0 ? 1.0 : 0.0;
  } else {
    for (int r = 0; r < n; ++r) w[r] = std::exp(alpha * profile.log_ratio[r]);
  }
  return w;
}

// First rank i (1-based) with i/m > z, by the same division used in the
// partial-sum accessors.
int uniform_first_rank(int m, double z) {
  int lo = 1, hi = m;
  while (lo < hi) {
    const int mid = lo + (hi - lo) / 2;
    if (static_cast<double>(mid) / static_cast<double>(m) > z)
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo;
}

}  // namespace

SortedDistanceProfile profile_from_distances(const Array& dmin,
                                             std::span<const int> centers) {
  const int n = static_cast<int>(dmin.size());
  SortedDistanceProfile profile;
  profile.order.resize(n);
  std::iota(profile.order.begin(), profile.order.end(), 0);
  std::sort(profile.order.begin(), profile.order.end(), [&](int a, int b) {
    if (dmin[a] != dmin[b]) return dmin[a] > dmin[b];
    return a < b;
  });
  profile.d.resize(n);
  for (int r = 0; r < n; ++r) profile.d[r] = dmin[profile.order[r]];
  profile.is_center.assign(n, 0);
  for (int c : centers) profile.is_center[c] = 1;
  profile.degenerate = profile.d[0] == 0.0;
  if (!profile.degenerate) {
    profile.log_ratio.resize(n);
    const double d0 = profile.d[0];
    for (int r = 0; r < n; ++r)
      profile.log_ratio[r] =
          profile.d[r] > 0.0 ? std::log(profile.d[r] / d0) : -kInf;
  }
  return profile;
}

SortedDistanceProfile distance_profile(const ClusteringInstance& instance,
                                       std::span<const int> centers) {
  const int n = instance.n();
  if (centers.empty()) {
    SortedDistanceProfile profile;
    profile.order.resize(n);
    std::iota(profile.order.begin(), profile.order.end(), 0);
    profile.d = Array::Zero(n);
    profile.is_center.assign(n, 0);
    profile.uniform = true;
    return profile;
  }
  Array dmin = Array::Constant(n, kInf);
  for (int c : centers) {
    if (c < 0 || c >= n)
      throw std::out_of_range("distance_profile: center index out of range");
    dmin = dmin.min(instance.distances_to(instance.points().row(c)));
  }
  return profile_from_distances(dmin, centers);
}

double partial_sum_ratio(const SortedDistanceProfile& profile, int i,
                         double alpha) {
  const int n = profile.n();
  if (i < 1 || i > n)
    throw std::out_of_range("partial_sum_ratio: rank out of range");
  if (profile.uniform)
    return static_cast<double>(i) / static_cast<double>(n);
  if (profile.degenerate)
    throw std::invalid_argument("partial_sum_ratio: degenerate profile");
  if (!(alpha >= 0.0))
    throw std::invalid_argument("partial_sum_ratio: alpha must be >= 0");
  const Array w = rank_weights(profile, alpha);
  double prefix = 0.0;
  for (int r = 0; r < i; ++r) prefix += w[r];
  double total = prefix;
  for (int r = i; r < n; ++r) total += w[r];
  return prefix / total;
}

int pick_center(const SortedDistanceProfile& profile, double alpha, double z) {
  validate_unit(z, "pick_center");
  const int n = profile.n();
  if (profile.degenerate) {
    const std::vector<int> eligible = degenerate_eligible(profile);
    const int m = static_cast<int>(eligible.size());
    return eligible[uniform_first_rank(m, z) - 1];
  }
  if (profile.uniform) return profile.order[uniform_first_rank(n, z) - 1];
  const Array w = rank_weights(profile, alpha);
  const double total = w.sum();
  double cum = 0.0;
  int rank = n;
  for (int r = 0; r < n; ++r) {
    cum += w[r];
    if (cum / total > z) {
      rank = r + 1;
      break;
    }
  }
  return profile.order[rank - 1];
}

std::vector<int> seed(const ClusteringInstance& instance, const SeedVector& Z,
                      double alpha) {
  const int n = instance.n();
  const int k = instance.k();
  if (static_cast<int>(Z.z.size()) != k)
    throw std::invalid_argument("seed: |Z| must equal k");
  for (double z : Z.z) validate_unit(z, "seed");
  if (!(alpha >= 0.0))
    throw std::invalid_argument("seed: alpha must be >= 0");

  std::vector<int> centers;
  centers.reserve(k);
  Array dmin = Array::Constant(n, kInf);
  for (int t = 0; t < k; ++t) {
    int chosen;
    if (t == 0) {
      SortedDistanceProfile round1 = distance_profile(instance, {});
      chosen = pick_center(round1, alpha, Z.z[0]);
    } else {
      SortedDistanceProfile profile = profile_from_distances(dmin, centers);
      if (alpha == kInf && !profile.degenerate) {
        // Farthest-first: argmax ties share z_t mass equally in index order
        // (ties are contiguous leading ranks, already index-ascending).
        int tied = 1;
        while (tied < n && profile.d[tied] == profile.d[0]) ++tied;
        chosen = profile.order[uniform_first_rank(tied, Z.z[t]) - 1];
      } else {
        chosen = pick_center(profile, alpha, Z.z[t]);
      }
    }
    centers.push_back(chosen);
    dmin = dmin.min(instance.distances_to(instance.points().row(chosen)));
  }
  return centers;
}

int SeedingRound::pick(double alpha, double z) const {
  validate_unit(z, "SeedingRound::pick");
  int lo = 1, hi = slots();
  while (lo < hi) {
    const int mid = lo + (hi - lo) / 2;
    if (partial_sum(mid, alpha) > z)
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo;
}

namespace {

class DAlphaRound final : public SeedingRound {
 public:
  explicit DAlphaRound(SortedDistanceProfile profile)
      : profile_(std::move(profile)) {
    if (profile_.degenerate) eligible_ = degenerate_eligible(profile_);
  }

  int slots() const override {
    return profile_.degenerate ? static_cast<int>(eligible_.size())
                               : profile_.n();
  }

  double partial_sum(int i, double alpha) const override {
    if (profile_.degenerate) {
      if (i < 1 || i > slots())
        throw std::out_of_range("partial_sum: rank out of range");
      return static_cast<double>(i) / static_cast<double>(slots());
    }
    return partial_sum_ratio(profile_, i, alpha);
  }

  int point(int rank) const override {
    if (rank < 1 || rank > slots())
      throw std::out_of_range("point: rank out of range");
    return profile_.degenerate ? eligible_[rank - 1]
                               : profile_.order[rank - 1];
  }

  bool alpha_dependent() const override {
    return !profile_.uniform && !profile_.degenerate;
  }

  int pick(double alpha, double z) const override {
    validate_unit(z, "DAlphaRound::pick");
    if (profile_.degenerate || profile_.uniform)
      return uniform_first_rank(slots(), z);
    // Single pass over the cumulative ratios; agrees with the generic binary
    // search because both compare the identical prefix/total values to z.
    const Array w = rank_weights(profile_, alpha);
    const double total = w.sum();
    double cum = 0.0;
    for (int r = 0; r < profile_.n(); ++r) {
      cum += w[r];
      if (cum / total > z) return r + 1;
    }
    return profile_.n();
  }

 private:
  SortedDistanceProfile profile_;
  std::vector<int> eligible_;
};

}  // namespace

std::unique_ptr<SeedingRound> DAlphaFamily::round(
    const ClusteringInstance& instance, std::span<const int> centers) const {
  return std::make_unique<DAlphaRound>(distance_profile(instance, centers));
}

const SeedingFamily& d_alpha_family() {
  static const DAlphaFamily family;
  return family;
}

double family_partial_sum(const SeedingFamily& family,
                          const ClusteringInstance& instance,
                          std::span<const int> centers, int i, double alpha) {
  const auto round = family.round(instance, centers);
  if (i < 1 || i > round->slots())
    throw std::out_of_range("family_partial_sum: rank out of range");
  return round->partial_sum(i, alpha);
}

void check_family_contract(const SeedingFamily& family,
                           const ClusteringInstance& instance,
                           std::span<const int> centers, double alpha_lo,
                           double alpha_hi) {
  constexpr double kTol = 1e-9;
  const auto round = family.round(instance, centers);
  const int m = round->slots();
  const double alphas[] = {alpha_lo, 0.5 * (alpha_lo + alpha_hi), alpha_hi};
  for (double a : alphas) {
    double prev = 0.0;
    for (int i = 1; i <= m; ++i) {
      const double s = round->partial_sum(i, a);
      if (!(s >= -kTol && s <= 1.0 + kTol))
        throw std::invalid_argument("seeding family: partial sum outside [0,1]");
      if (s < prev - kTol)
        throw std::invalid_argument("seeding family: partial sums cross");
      prev = s;
    }
    if (std::abs(prev - 1.0) > 1e-6)
      throw std::invalid_argument("seeding family: partial sums do not reach 1");
  }
  for (int i = 1; i <= m; ++i) {
    double prev = round->partial_sum(i, alphas[0]);
    for (int j = 1; j < 3; ++j) {
      const double s = round->partial_sum(i, alphas[j]);
      if (s < prev - kTol)
        throw std::invalid_argument(
            "seeding family: partial sum not monotone in alpha");
      prev = s;
    }
  }
}

}  // namespace lloydspp
