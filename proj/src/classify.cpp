#include "pelab/classify.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>

#include "pelab/error.hpp"

namespace pelab {

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    d += diff * diff;
  }
  return d;
}

std::size_t class_count(const FeatureMatrix& train, const FeatureMatrix& test) {
  int max_label = -1;
  for (int l : train.labels) max_label = std::max(max_label, l);
  for (int l : test.labels) max_label = std::max(max_label, l);
  return std::max<std::size_t>(train.label_names.size(),
                               static_cast<std::size_t>(max_label + 1));
}

}  // namespace

Split stratified_split(std::span<const int> labels, double test_fraction,
                       std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0))
    throw DomainError("test fraction must lie in (0, 1)");
  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);

  Split split;
  std::mt19937_64 rng(seed);
  for (auto& [label, members] : by_class) {
    if (members.size() < 2)
      throw DomainError("class " + std::to_string(label) +
                        " has fewer than 2 items; cannot split");
    std::shuffle(members.begin(), members.end(), rng);
    auto n_test = static_cast<std::size_t>(
        std::floor(static_cast<double>(members.size()) * test_fraction));
    n_test = std::clamp<std::size_t>(n_test, 1, members.size() - 1);
    split.test.insert(split.test.end(), members.begin(), members.begin() + n_test);
    split.train.insert(split.train.end(), members.begin() + n_test, members.end());
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

FeatureMatrix subset(const FeatureMatrix& fm, std::span<const std::size_t> rows) {
  FeatureMatrix out;
  out.kind = fm.kind;
  out.cols = fm.cols;
  out.rows = rows.size();
  out.label_names = fm.label_names;
  out.grid = fm.grid;
  out.data.reserve(rows.size() * fm.cols);
  out.labels.reserve(rows.size());
  for (std::size_t r : rows) {
    if (r >= fm.rows) throw DomainError("row index out of range in subset");
    const auto row = fm.row(r);
    out.data.insert(out.data.end(), row.begin(), row.end());
    out.labels.push_back(fm.labels[r]);
  }
  return out;
}

Standardizer Standardizer::fit(const FeatureMatrix& train) {
  Standardizer s;
  s.mean.assign(train.cols, 0.0);
  s.stddev.assign(train.cols, 0.0);
  if (train.rows == 0) {
    std::fill(s.stddev.begin(), s.stddev.end(), 1.0);
    return s;
  }
  const double n = static_cast<double>(train.rows);
  for (std::size_t r = 0; r < train.rows; ++r) {
    const auto row = train.row(r);
    for (std::size_t c = 0; c < train.cols; ++c) s.mean[c] += row[c];
  }
  for (auto& m : s.mean) m /= n;
  for (std::size_t r = 0; r < train.rows; ++r) {
    const auto row = train.row(r);
    for (std::size_t c = 0; c < train.cols; ++c) {
      const double d = row[c] - s.mean[c];
      s.stddev[c] += d * d;
    }
  }
  for (auto& sd : s.stddev) {
    sd = std::sqrt(sd / n);
    if (sd == 0.0) sd = 1.0;
  }
  return s;
}

void Standardizer::apply(FeatureMatrix& fm) const {
  if (fm.cols != mean.size())
    throw DomainError("standardizer dimension mismatch");
  for (std::size_t r = 0; r < fm.rows; ++r)
    for (std::size_t c = 0; c < fm.cols; ++c) {
      double& v = fm.data[r * fm.cols + c];
      v = (v - mean[c]) / stddev[c];
    }
}

std::string Method::name() const {
  return kind == Kind::kCentroid ? "centroid" : "knn:" + std::to_string(k);
}

Method parse_method(std::string_view text) {
  if (text == "centroid") return Method::centroid();
  if (text.starts_with("knn")) {
    std::string_view rest = text.substr(3);
    if (rest.empty()) return Method::knn(1);
    if (rest.front() == ':') rest.remove_prefix(1);
    int k = 0;
    const auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), k);
    if (ec == std::errc() && ptr == rest.data() + rest.size() && k >= 1)
      return Method::knn(k);
  }
  throw ConfigError("unknown classifier '" + std::string(text) +
                    "' (expected centroid, knn or knn:K)");
}

ConfusionMatrix::ConfusionMatrix(std::vector<std::string> labels)
    : labels_(std::move(labels)), counts_(labels_.size() * labels_.size(), 0) {}

void ConfusionMatrix::add(int truth, int predicted) {
  const auto c = static_cast<int>(labels_.size());
  if (truth < 0 || truth >= c || predicted < 0 || predicted >= c)
    throw DomainError("label outside confusion matrix");
  ++counts_[static_cast<std::size_t>(truth) * labels_.size() + predicted];
}

std::uint64_t ConfusionMatrix::total() const {
  return std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
}

std::uint64_t ConfusionMatrix::trace() const {
  std::uint64_t t = 0;
  for (std::size_t i = 0; i < labels_.size(); ++i) t += at(i, i);
  return t;
}

std::uint64_t ConfusionMatrix::row_sum(std::size_t truth) const {
  std::uint64_t s = 0;
  for (std::size_t j = 0; j < labels_.size(); ++j) s += at(truth, j);
  return s;
}

double ConfusionMatrix::accuracy() const {
  const auto n = total();
  return n == 0 ? 0.0 : static_cast<double>(trace()) / static_cast<double>(n);
}

std::vector<int> predict(const FeatureMatrix& train, const FeatureMatrix& test,
                         const Method& method) {
  if (train.cols != test.cols)
    throw DomainError("feature dimension mismatch: train has " +
                      std::to_string(train.cols) + ", test has " +
                      std::to_string(test.cols));
  if (train.rows == 0) throw DomainError("empty training set");
  if (train.labels.size() != train.rows || test.labels.size() != test.rows)
    throw DomainError("label count does not match row count");
  for (int l : train.labels)
    if (l < 0) throw DomainError("negative class label");
  const std::size_t classes = class_count(train, test);
  std::vector<int> out(test.rows, 0);
  const long rows = static_cast<long>(test.rows);

  if (method.kind == Method::Kind::kCentroid) {
    std::vector<double> centroids(classes * train.cols, 0.0);
    std::vector<std::size_t> members(classes, 0);
    for (std::size_t r = 0; r < train.rows; ++r) {
      const auto c = static_cast<std::size_t>(train.labels[r]);
      const auto row = train.row(r);
      for (std::size_t j = 0; j < train.cols; ++j)
        centroids[c * train.cols + j] += row[j];
      ++members[c];
    }
    for (std::size_t c = 0; c < classes; ++c) {
      if (members[c] == 0)
        throw DomainError("class " + std::to_string(c) +
                          " has no training items");
      for (std::size_t j = 0; j < train.cols; ++j)
        centroids[c * train.cols + j] /= static_cast<double>(members[c]);
    }
#pragma omp parallel for schedule(static)
    for (long i = 0; i < rows; ++i) {
      double best = std::numeric_limits<double>::infinity();
      int best_class = 0;
      for (std::size_t c = 0; c < classes; ++c) {
        const double d = squared_distance(
            test.row(i), {centroids.data() + c * train.cols, train.cols});
        if (d < best) {
          best = d;
          best_class = static_cast<int>(c);
        }
      }
      out[i] = best_class;
    }
    return out;
  }

  if (method.k < 1 || static_cast<std::size_t>(method.k) > train.rows)
    throw DomainError("k=" + std::to_string(method.k) + " outside [1, " +
                      std::to_string(train.rows) + "]");
  const std::size_t k = static_cast<std::size_t>(method.k);
#pragma omp parallel for schedule(dynamic, 8)
  for (long i = 0; i < rows; ++i) {
    std::vector<std::pair<double, std::size_t>> dist(train.rows);
    for (std::size_t r = 0; r < train.rows; ++r)
      dist[r] = {squared_distance(test.row(i), train.row(r)), r};
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k),
                      dist.end());
    std::vector<std::size_t> votes(classes, 0);
    for (std::size_t j = 0; j < k; ++j)
      ++votes[static_cast<std::size_t>(train.labels[dist[j].second])];
    out[i] = static_cast<int>(std::max_element(votes.begin(), votes.end()) -
                              votes.begin());
  }
  return out;
}

ConfusionMatrix fit_predict(const FeatureMatrix& train, const FeatureMatrix& test,
                            const Method& method, bool standardize) {
  std::vector<int> predicted;
  if (standardize) {
    const auto s = Standardizer::fit(train);
    FeatureMatrix train_z = train, test_z = test;
    s.apply(train_z);
    s.apply(test_z);
    predicted = predict(train_z, test_z, method);
  } else {
    predicted = predict(train, test, method);
  }

  std::vector<std::string> names = train.label_names;
  const std::size_t classes = class_count(train, test);
  for (std::size_t c = names.size(); c < classes; ++c)
    names.push_back(std::to_string(c));
  ConfusionMatrix cm(std::move(names));
  for (std::size_t i = 0; i < test.rows; ++i) cm.add(test.labels[i], predicted[i]);
  return cm;
}

bool default_standardize(FeatureKind kind) { return kind != FeatureKind::kMspe; }

std::uint64_t sweep_dataset_seed(std::uint64_t seed, std::size_t snr_index) {
  return mix_seed(seed ^ mix_seed(0x5eed0000ULL + snr_index));
}

std::vector<SweepRow> snr_sweep(const SweepConfig& cfg) {
  if (cfg.snrs.empty()) throw DomainError("SNR list is empty");
  if (cfg.kinds.empty()) throw DomainError("feature kind list is empty");
  std::vector<SweepRow> rows;
  for (std::size_t s = 0; s < cfg.snrs.size(); ++s) {
    const std::uint64_t ds_seed = sweep_dataset_seed(cfg.seed, s);
    const Dataset ds = make_dataset(cfg.schemes, cfg.per_class, cfg.length,
                                    cfg.snrs[s], ds_seed);
    const Split split = stratified_split(ds.labels(), cfg.test_fraction,
                                         mix_seed(ds_seed));
    for (FeatureKind kind : cfg.kinds) {
      const FeatureMatrix fm = extract_features(ds, kind, cfg.grid);
      const bool standardize = cfg.standardize.value_or(default_standardize(kind));
      const auto cm = fit_predict(subset(fm, split.train), subset(fm, split.test),
                                  cfg.method, standardize);
      rows.push_back({cfg.snrs[s], kind, cm.accuracy(), cfg.seed});
    }
  }
  return rows;
}

}  // namespace pelab
