#pragma once

// Fixed-length feature vectors for classification.
//
// mspe:        7 non-overlapping windows (full signal, two halves, four
//              quarters), one MSPE matrix each, flattened row-major (n-major,
//              then tau) and concatenated in window order. The default grid
//              n = 3..7, tau = {1,5,10,15,20,30,40,50} gives 7 * 40 = 280.
// raw:         the samples themselves.
// spectrogram: one-sided DFT magnitudes (bins 0..L/2, rectangular window,
//              no log scaling) of 8x256, 16x128 and 32x64 non-overlapping
//              windows, window-major, concatenated: 8*129 + 16*65 + 32*33.

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pelab/synth.hpp"

namespace pelab {

enum class FeatureKind { kMspe, kRaw, kSpectrogram };

std::string_view feature_kind_name(FeatureKind k);
FeatureKind parse_feature_kind(std::string_view name);

inline constexpr std::size_t kSpectrogramLength = 2048;
inline constexpr std::size_t kSpectrogramFeatureCount =
    8 * 129 + 16 * 65 + 32 * 33;  // 3128

struct MspeGrid {
  std::vector<int> dims{3, 4, 5, 6, 7};
  std::vector<int> delays{1, 5, 10, 15, 20, 30, 40, 50};
  bool normalized = false;

  std::size_t cells() const { return dims.size() * delays.size(); }
};

struct FeatureVector {
  FeatureKind kind = FeatureKind::kRaw;
  std::vector<double> values;
  std::size_t signal_id = 0;
  std::string parameters;
};

// Throws SignalTooShort if the quarter windows cannot host the largest
// grid cell, DomainError if |x| is not divisible by 4.
FeatureVector mspe_features(std::span<const double> x, const MspeGrid& grid = {});

FeatureVector raw_features(std::span<const double> x);

// Throws DomainError unless |x| == 2048.
FeatureVector spectrogram_features(std::span<const double> x);

// One-sided DFT magnitudes |X_0| .. |X_{L/2}| of a window.
std::vector<double> magnitude_spectrum(std::span<const double> window);

// Dense row-major feature table with one row per signal.
struct FeatureMatrix {
  FeatureKind kind = FeatureKind::kRaw;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;
  std::vector<int> labels;
  std::vector<std::string> label_names;
  MspeGrid grid;  // meaningful for kind == kMspe

  std::span<const double> row(std::size_t i) const {
    return {data.data() + i * cols, cols};
  }
};

// Features for every signal, computed in parallel, rows in input order.
FeatureMatrix extract_features(const Dataset& ds, FeatureKind kind,
                               const MspeGrid& grid = {});

}  // namespace pelab
