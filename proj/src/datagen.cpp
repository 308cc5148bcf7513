#include "lloydspp/datagen.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>
#include <unordered_map>

#include <json.hpp>

#include "lloydspp/csvio.hpp"

namespace lloydspp {

namespace {

// Partial Fisher-Yates: the first `take` entries of pool, shuffled uniformly
// by one counter-based draw per step.
std::vector<int> choose_without_replacement(int pool_size, int take,
                                            std::uint64_t seed,
                                            RngStream stream, std::uint64_t i,
                                            std::uint64_t slot_base) {
  std::vector<int> pool(pool_size);
  for (int p = 0; p < pool_size; ++p) pool[p] = p;
  for (int t = 0; t < take; ++t) {
    const double u = rng_uniform(seed, stream, i, slot_base + t);
    const int j = t + static_cast<int>(u * (pool_size - t));
    std::swap(pool[t], pool[std::min(j, pool_size - 1)]);
  }
  pool.resize(take);
  return pool;
}

[[noreturn]] void parse_fail(const std::string& path, int line,
                             const std::string& message) {
  // Content problems are input-validation failures; I/O problems stay
  // runtime_error.
  throw std::invalid_argument(path + ":" + std::to_string(line) + ": " +
                              message);
}

}  // namespace

std::vector<std::string> LabeledDataset::label_values() const {
  std::vector<std::string> values;
  std::unordered_map<std::string, int> seen;
  for (const std::string& label : labels) {
    if (seen.emplace(label, 0).second) values.push_back(label);
  }
  return values;
}

ClusteringInstance gaussian_grid_instance(const DistributionConfig& config,
                                          std::uint64_t seed, int i) {
  const int components = config.grid_side * config.grid_side;
  if (config.k < 1 || config.k > components)
    throw std::invalid_argument(
        "gaussian_grid_instance: k must lie in [1, grid_side^2]");
  if (config.N < 1)
    throw std::invalid_argument("gaussian_grid_instance: N must be positive");
  const std::vector<int> chosen = choose_without_replacement(
      components, config.k, seed, RngStream::kComponent, i, 0);

  const int n = config.k * config.N;
  Matrix points(n, 2);
  std::vector<int> target(n);
  for (int c = 0; c < config.k; ++c) {
    const int g = chosen[c];
    const double mx = config.grid_stride * (g % config.grid_side);
    const double my = config.grid_stride * (g / config.grid_side);
    for (int j = 0; j < config.N; ++j) {
      const int row = c * config.N + j;
      // Slots are indexed by (label slot, point) rather than row, so growing
      // N extends each label's point set instead of reshuffling it.
      const std::uint64_t slot =
          (static_cast<std::uint64_t>(c) << 33) | (2 * std::uint64_t(j));
      const double u1 = rng_uniform(seed, RngStream::kGaussian, i, slot);
      const double u2 = rng_uniform(seed, RngStream::kGaussian, i, slot + 1);
      // Box-Muller; 1-u1 lies in (0,1] so the log is finite.
      const double r = std::sqrt(-2.0 * std::log(1.0 - u1));
      const double theta = 2.0 * std::numbers::pi * u2;
      points(row, 0) = mx + r * std::cos(theta);
      points(row, 1) = my + r * std::sin(theta);
      target[row] = c;
    }
  }
  return ClusteringInstance(std::move(points), config.k, std::move(target));
}

ClusteringInstance label_subset_instance(const LabeledDataset& dataset, int k,
                                         int N, std::uint64_t seed, int i) {
  const std::vector<std::string> values = dataset.label_values();
  if (k < 1 || k > static_cast<int>(values.size()))
    throw std::invalid_argument(
        "label_subset_instance: k exceeds the number of labels");
  if (N < 1)
    throw std::invalid_argument("label_subset_instance: N must be positive");

  std::vector<std::vector<int>> rows_by_label(values.size());
  std::unordered_map<std::string, int> value_index;
  for (std::size_t v = 0; v < values.size(); ++v) value_index[values[v]] = v;
  for (int r = 0; r < dataset.rows(); ++r)
    rows_by_label[value_index[dataset.labels[r]]].push_back(r);

  const std::vector<int> chosen = choose_without_replacement(
      static_cast<int>(values.size()), k, seed, RngStream::kLabelChoice, i, 0);

  Matrix points(k * N, dataset.dim());
  std::vector<int> target(k * N);
  for (int c = 0; c < k; ++c) {
    const std::vector<int>& rows = rows_by_label[chosen[c]];
    if (static_cast<int>(rows.size()) < N)
      throw std::invalid_argument("label_subset_instance: label '" +
                                  values[chosen[c]] + "' has fewer than N rows");
    const std::vector<int> picked = choose_without_replacement(
        static_cast<int>(rows.size()), N, seed, RngStream::kRowChoice, i,
        static_cast<std::uint64_t>(c) << 32);
    for (int j = 0; j < N; ++j) {
      const int row = c * N + j;
      points.row(row) = dataset.features.row(rows[picked[j]]);
      target[row] = c;
    }
  }
  return ClusteringInstance(std::move(points), k, std::move(target));
}

ClusteringInstance make_instance(const DistributionConfig& config,
                                 std::uint64_t seed, int i) {
  if (config.kind == DistributionKind::kGaussianGrid)
    return gaussian_grid_instance(config, seed, i);
  if (!config.dataset)
    throw std::invalid_argument("make_instance: label-subset needs a dataset");
  return label_subset_instance(*config.dataset, config.k, config.N, seed, i);
}

SeedVector draw_seed_vector(std::uint64_t seed, int i, int k) {
  SeedVector Z;
  Z.z.resize(k);
  for (int t = 0; t < k; ++t)
    Z.z[t] = rng_uniform(seed, RngStream::kSeedVector, i, t);
  return Z;
}

LabeledDataset load_labeled_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open file");
  std::string line;
  if (!std::getline(in, line)) parse_fail(path, 1, "missing header");
  const std::vector<std::string> header = split_csv_line(line);
  const int dim = static_cast<int>(header.size()) - 1;
  if (dim < 1 || header.back() != "label")
    parse_fail(path, 1, "header must be f0,...,f{d-1},label");
  for (int c = 0; c < dim; ++c)
    if (header[c] != "f" + std::to_string(c))
      parse_fail(path, 1, "unknown header column '" + header[c] + "'");

  std::vector<double> cells;
  std::vector<std::string> labels;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::vector<std::string> row = split_csv_line(line);
    if (static_cast<int>(row.size()) != dim + 1)
      parse_fail(path, line_no, "expected " + std::to_string(dim + 1) +
                                    " columns, found " +
                                    std::to_string(row.size()));
    for (int c = 0; c < dim; ++c) {
      double value = 0.0;
      const char* begin = row[c].data();
      const char* end = begin + row[c].size();
      const auto [ptr, ec] = std::from_chars(begin, end, value);
      if (ec != std::errc() || ptr != end)
        parse_fail(path, line_no, "non-numeric feature cell '" + row[c] + "'");
      cells.push_back(value);
    }
    labels.push_back(row[dim]);
  }
  if (labels.empty()) parse_fail(path, line_no, "no data rows");

  LabeledDataset dataset;
  dataset.name = path;
  dataset.features.resize(static_cast<Eigen::Index>(labels.size()), dim);
  for (std::size_t r = 0; r < labels.size(); ++r)
    for (int c = 0; c < dim; ++c)
      dataset.features(static_cast<Eigen::Index>(r), c) = cells[r * dim + c];
  dataset.labels = std::move(labels);
  return dataset;
}

void save_labeled_csv(const std::string& path, const LabeledDataset& dataset) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open file for writing");
  for (int c = 0; c < dataset.dim(); ++c) out << "f" << c << ",";
  out << "label\n";
  for (int r = 0; r < dataset.rows(); ++r) {
    for (int c = 0; c < dataset.dim(); ++c)
      out << format_double(dataset.features(r, c)) << ",";
    out << dataset.labels[r] << "\n";
  }
}

void save_instance(const std::string& path, const ClusteringInstance& instance,
                   std::uint64_t seed, int i) {
  LabeledDataset dataset;
  dataset.features = instance.points();
  dataset.labels.reserve(instance.n());
  for (int label : instance.target())
    dataset.labels.push_back(std::to_string(label));
  save_labeled_csv(path, dataset);

  nlohmann::json sidecar;
  sidecar["k"] = instance.k();
  sidecar["metric"] = "euclidean";
  sidecar["seed"] = seed;
  sidecar["i"] = i;
  std::ofstream out(path + ".json");
  if (!out)
    throw std::runtime_error(path + ".json: cannot open file for writing");
  out << sidecar.dump(2) << "\n";
}

ClusteringInstance load_instance(const std::string& path) {
  const LabeledDataset dataset = load_labeled_csv(path);
  std::ifstream in(path + ".json");
  if (!in) throw std::runtime_error(path + ".json: cannot open sidecar");
  nlohmann::json sidecar;
  in >> sidecar;
  const int k = sidecar.at("k").get<int>();
  if (sidecar.value("metric", "euclidean") != std::string("euclidean"))
    throw std::invalid_argument(path + ".json: unsupported metric");
  if (k > dataset.rows())
    throw std::invalid_argument("load_instance: k exceeds point count");

  // Labels map to target indices in first-appearance order.
  std::unordered_map<std::string, int> index;
  std::vector<int> target;
  target.reserve(dataset.rows());
  for (const std::string& label : dataset.labels) {
    auto [it, inserted] = index.emplace(label, static_cast<int>(index.size()));
    target.push_back(it->second);
  }
  if (static_cast<int>(index.size()) != k)
    throw std::invalid_argument(
        "load_instance: label count does not match k in the sidecar");
  return ClusteringInstance(dataset.features, k, std::move(target));
}

}  // namespace lloydspp
