#include "pelab/features.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pelab/entropy.hpp"
#include "pelab/error.hpp"

namespace pelab {

namespace {

constexpr std::size_t kSpectrogramWindows[] = {256, 128, 64};

std::string grid_description(const MspeGrid& g) {
  std::string s = "dims=";
  for (std::size_t i = 0; i < g.dims.size(); ++i)
    s += (i ? "," : "") + std::to_string(g.dims[i]);
  s += ";delays=";
  for (std::size_t i = 0; i < g.delays.size(); ++i)
    s += (i ? "," : "") + std::to_string(g.delays[i]);
  s += g.normalized ? ";normalized" : ";bits";
  return s;
}

std::size_t feature_count(FeatureKind kind, const MspeGrid& grid,
                          std::size_t length) {
  switch (kind) {
    case FeatureKind::kMspe: return 7 * grid.cells();
    case FeatureKind::kRaw: return length;
    case FeatureKind::kSpectrogram: return kSpectrogramFeatureCount;
  }
  return 0;
}

}  // namespace

std::string_view feature_kind_name(FeatureKind k) {
  switch (k) {
    case FeatureKind::kMspe: return "mspe";
    case FeatureKind::kRaw: return "raw";
    case FeatureKind::kSpectrogram: return "spectrogram";
  }
  return "?";
}

FeatureKind parse_feature_kind(std::string_view name) {
  if (name == "mspe") return FeatureKind::kMspe;
  if (name == "raw") return FeatureKind::kRaw;
  if (name == "spectrogram") return FeatureKind::kSpectrogram;
  throw ConfigError("unknown feature kind '" + std::string(name) +
                    "' (expected mspe, raw or spectrogram)");
}

FeatureVector mspe_features(std::span<const double> x, const MspeGrid& grid) {
  if (x.size() % 4 != 0)
    throw DomainError("mspe features need a length divisible by 4, got " +
                      std::to_string(x.size()));
  const std::size_t quarter = x.size() / 4;
  int max_n = 0, max_tau = 0;
  for (int n : grid.dims) max_n = std::max(max_n, n);
  for (int tau : grid.delays) max_tau = std::max(max_tau, tau);
  const std::size_t need = required_length(max_n, max_tau);
  if (quarter < need)
    throw SignalTooShort("quarter windows of " + std::to_string(quarter) +
                             " samples cannot host (n=" + std::to_string(max_n) +
                             ", tau=" + std::to_string(max_tau) +
                             "); signal needs at least " +
                             std::to_string(4 * need) + " samples",
                         4 * need);

  FeatureVector fv;
  fv.kind = FeatureKind::kMspe;
  fv.parameters = grid_description(grid);
  fv.values.reserve(7 * grid.cells());
  for (std::size_t parts : {1, 2, 4}) {
    const std::size_t len = x.size() / parts;
    for (std::size_t w = 0; w < parts; ++w) {
      const auto m = mspe(x.subspan(w * len, len), grid.dims, grid.delays,
                          grid.normalized);
      fv.values.insert(fv.values.end(), m.values.begin(), m.values.end());
    }
  }
  return fv;
}

FeatureVector raw_features(std::span<const double> x) {
  FeatureVector fv;
  fv.kind = FeatureKind::kRaw;
  fv.values.assign(x.begin(), x.end());
  return fv;
}

std::vector<double> magnitude_spectrum(std::span<const double> window) {
  const std::size_t len = window.size();
  std::vector<double> mag(len / 2 + 1);
  // Twiddles indexed by (k * j) mod L keep the phase argument exact.
  std::vector<double> cos_table(len), sin_table(len);
  for (std::size_t m = 0; m < len; ++m) {
    const double a = 2.0 * std::numbers::pi * static_cast<double>(m) /
                     static_cast<double>(len);
    cos_table[m] = std::cos(a);
    sin_table[m] = std::sin(a);
  }
  for (std::size_t k = 0; k < mag.size(); ++k) {
    double re = 0.0, im = 0.0;
    std::size_t idx = 0;
    for (std::size_t j = 0; j < len; ++j) {
      re += window[j] * cos_table[idx];
      im -= window[j] * sin_table[idx];
      idx += k;
      if (idx >= len) idx -= len;
    }
    mag[k] = std::hypot(re, im);
  }
  return mag;
}

FeatureVector spectrogram_features(std::span<const double> x) {
  if (x.size() != kSpectrogramLength)
    throw DomainError("spectrogram features need exactly 2048 samples, got " +
                      std::to_string(x.size()));
  FeatureVector fv;
  fv.kind = FeatureKind::kSpectrogram;
  fv.parameters = "windows=8x256,16x128,32x64;one-sided magnitude";
  fv.values.reserve(kSpectrogramFeatureCount);
  for (std::size_t len : kSpectrogramWindows) {
    for (std::size_t start = 0; start + len <= x.size(); start += len) {
      const auto mag = magnitude_spectrum(x.subspan(start, len));
      fv.values.insert(fv.values.end(), mag.begin(), mag.end());
    }
  }
  return fv;
}

FeatureMatrix extract_features(const Dataset& ds, FeatureKind kind,
                               const MspeGrid& grid) {
  FeatureMatrix fm;
  fm.kind = kind;
  fm.rows = ds.signals.size();
  fm.cols = feature_count(kind, grid, ds.length);
  fm.data.assign(fm.rows * fm.cols, 0.0);
  fm.labels = ds.labels();
  fm.label_names = ds.label_names();
  fm.grid = grid;
  if (fm.rows == 0) return fm;

  // Validate once on the first signal so the parallel loop cannot throw.
  for (const auto& s : ds.signals) {
    if (s.samples.size() != ds.length)
      throw ConfigError("dataset signal length does not match header");
    for (double v : s.samples)
      if (!std::isfinite(v)) throw DomainError("non-finite sample in dataset");
  }
  const auto extract = [&](std::span<const double> x) {
    switch (kind) {
      case FeatureKind::kMspe: return mspe_features(x, grid);
      case FeatureKind::kRaw: return raw_features(x);
      case FeatureKind::kSpectrogram: return spectrogram_features(x);
    }
    return raw_features(x);
  };
  const auto v0 = extract(ds.signals[0].samples);
  std::copy(v0.values.begin(), v0.values.end(), fm.data.begin());

  const long rows = static_cast<long>(fm.rows);
#pragma omp parallel for schedule(dynamic)
  for (long i = 1; i < rows; ++i) {
    const auto v = extract(ds.signals[i].samples);
    std::copy(v.values.begin(), v.values.end(),
              fm.data.begin() + static_cast<std::ptrdiff_t>(i * fm.cols));
  }
  return fm;
}

}  // namespace pelab
