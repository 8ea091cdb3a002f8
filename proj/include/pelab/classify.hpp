#pragma once

// Desk-scale classification harness: stratified splits, nearest-centroid
// and k-nearest-neighbour classifiers, confusion matrices and SNR sweeps.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pelab/features.hpp"
#include "pelab/synth.hpp"

namespace pelab {

struct Split {
  std::vector<std::size_t> train;  // ascending
  std::vector<std::size_t> test;   // ascending
};

// Per class, floor(count * test_fraction) items go to the test side,
// clamped to [1, count - 1] so both sides see every class. Deterministic
// per seed. Throws DomainError if test_fraction is outside (0, 1) or any
// present class has fewer than 2 items.
Split stratified_split(std::span<const int> labels, double test_fraction,
                       std::uint64_t seed);

// Rows of fm selected by index, in the given order.
FeatureMatrix subset(const FeatureMatrix& fm, std::span<const std::size_t> rows);

// Per-feature z-scoring fit on training rows. Zero deviations become 1.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> stddev;

  static Standardizer fit(const FeatureMatrix& train);
  void apply(FeatureMatrix& fm) const;
};

struct Method {
  enum class Kind { kCentroid, kKnn };
  Kind kind = Kind::kCentroid;
  int k = 1;

  static Method centroid() { return {Kind::kCentroid, 1}; }
  static Method knn(int k) { return {Kind::kKnn, k}; }
  std::string name() const;
};

// Parses "centroid", "knn" (k = 1) or "knn:K" / "knnK".
Method parse_method(std::string_view text);

class ConfusionMatrix {
 public:
  ConfusionMatrix() = default;
  explicit ConfusionMatrix(std::vector<std::string> labels);

  void add(int truth, int predicted);

  const std::vector<std::string>& labels() const { return labels_; }
  std::size_t classes() const { return labels_.size(); }
  // Rows are true labels, columns predicted labels.
  std::uint64_t at(std::size_t truth, std::size_t predicted) const {
    return counts_[truth * labels_.size() + predicted];
  }
  std::uint64_t total() const;
  std::uint64_t trace() const;
  std::uint64_t row_sum(std::size_t truth) const;
  double accuracy() const;

  bool operator==(const ConfusionMatrix&) const = default;

 private:
  std::vector<std::string> labels_;
  std::vector<std::uint64_t> counts_;
};

// Predicted class index for every test row, evaluated in parallel. Nearest
// centroid breaks distance ties toward the smaller class index; k-NN ranks
// neighbours by (distance, training index) and breaks vote ties toward the
// smaller class index. Throws DomainError on dimension mismatch, an empty
// training class (centroid), or k outside [1, train rows] (k-NN).
std::vector<int> predict(const FeatureMatrix& train, const FeatureMatrix& test,
                         const Method& method);

// Optionally standardizes (fit on train), predicts and tallies.
ConfusionMatrix fit_predict(const FeatureMatrix& train, const FeatureMatrix& test,
                            const Method& method, bool standardize);

// ON for raw and spectrogram features, OFF for MSPE.
bool default_standardize(FeatureKind kind);

struct SweepConfig {
  std::vector<Scheme> schemes{std::begin(kAllSchemes), std::end(kAllSchemes)};
  std::vector<double> snrs{-10, -5, 0, 5, 10, 15, 20, 25};
  std::size_t per_class = 200;
  std::size_t length = 2048;
  std::vector<FeatureKind> kinds{FeatureKind::kMspe, FeatureKind::kRaw,
                                 FeatureKind::kSpectrogram};
  Method method = Method::centroid();
  std::optional<bool> standardize;  // nullopt = per-kind default
  double test_fraction = 0.3;
  MspeGrid grid;
  std::uint64_t seed = 0;
};

struct SweepRow {
  double snr_db;
  FeatureKind kind;
  double accuracy;
  std::uint64_t seed;
};

// Seed of the dataset generated for the i-th SNR of a sweep.
std::uint64_t sweep_dataset_seed(std::uint64_t seed, std::size_t snr_index);

// One dataset per SNR, shared by every feature kind at that SNR; rows
// ordered by SNR then kind.
std::vector<SweepRow> snr_sweep(const SweepConfig& cfg);

}  // namespace pelab
