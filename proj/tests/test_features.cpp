#include <doctest.h>

#include <algorithm>
#include <complex>
#include <numbers>
#include <random>

#include "pelab/entropy.hpp"
#include "pelab/error.hpp"
#include "pelab/features.hpp"

using namespace pelab;

namespace {

std::vector<double> noise(std::size_t t, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<double> x(t);
  for (auto& v : x) v = g(rng);
  return x;
}

// Direct evaluation of X_k = sum_j x_j e^{-2 pi i k j / L}.
std::vector<double> dft_magnitudes(std::span<const double> x) {
  const double L = static_cast<double>(x.size());
  std::vector<double> out;
  for (std::size_t k = 0; k <= x.size() / 2; ++k) {
    std::complex<double> acc = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j)
      acc += x[j] * std::polar(1.0, -2.0 * std::numbers::pi * k * j / L);
    out.push_back(std::abs(acc));
  }
  return out;
}

}  // namespace

TEST_CASE("mspe features have 280 values in window, n, tau order") {
  const auto x = noise(2048, 1);
  const MspeGrid grid;
  const auto fv = mspe_features(x, grid);
  REQUIRE(fv.values.size() == 280);
  CHECK(fv.kind == FeatureKind::kMspe);

  const std::span<const double> xs = x;
  const std::pair<std::size_t, std::size_t> windows[] = {
      {0, 2048}, {0, 1024}, {1024, 1024}, {0, 512}, {512, 512}, {1024, 512}, {1536, 512}};
  std::size_t idx = 0;
  for (const auto& [start, len] : windows)
    for (int n : grid.dims)
      for (int tau : grid.delays) {
        const auto d = distribution(xs.subspan(start, len), n, tau);
        REQUIRE(fv.values[idx] == permutation_entropy(d));
        ++idx;
      }
  // Window 3 (first quarter), n=5, tau=20 -> 3*40 + 2*8 + 4.
  CHECK(fv.values[140] ==
        permutation_entropy(distribution(xs.subspan(0, 512), 5, 20)));
}

TEST_CASE("mspe features of a monotone series are zero") {
  std::vector<double> x(2048);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = static_cast<double>(i) * 0.01;
  for (double v : mspe_features(x).values) CHECK(v == 0.0);
}

TEST_CASE("amplitude agnosticism of mspe features") {
  const auto x = noise(2048, 2);
  std::vector<double> scaled = x, affine = x;
  for (auto& v : scaled) v *= 5.0;
  for (auto& v : affine) v = 0.25 * v + 3.0;
  const auto base = mspe_features(x).values;
  CHECK(mspe_features(scaled).values == base);
  CHECK(mspe_features(affine).values == base);

  // Raw and spectrogram features do change with amplitude.
  CHECK(raw_features(scaled).values != raw_features(x).values);
  CHECK(spectrogram_features(scaled).values != spectrogram_features(x).values);
}

TEST_CASE("normalized mspe features stay in [0, 1]") {
  MspeGrid grid;
  grid.normalized = true;
  for (double v : mspe_features(noise(2048, 3), grid).values) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
}

TEST_CASE("mspe feature errors") {
  CHECK_THROWS_AS(mspe_features(noise(2046, 1)), DomainError);
  try {
    mspe_features(noise(1200, 1));
    FAIL("expected SignalTooShort");
  } catch (const SignalTooShort& e) {
    CHECK(e.required_length() == 4 * 301);
  }
  CHECK_NOTHROW(mspe_features(noise(4 * 301 + 4, 1)));
}

TEST_CASE("raw features copy the samples") {
  const auto x = noise(2048, 4);
  CHECK(raw_features(x).values == x);
  CHECK(raw_features(std::vector<double>{}).values.empty());
  CHECK(raw_features(std::vector{1.0, -1.0}).values == std::vector{1.0, -1.0});
}

TEST_CASE("spectrogram layout") {
  const auto zeros = spectrogram_features(std::vector<double>(2048, 0.0));
  CHECK(zeros.values.size() == 3128);
  CHECK(kSpectrogramFeatureCount == 8 * 129 + 16 * 65 + 32 * 33);
  for (double v : zeros.values) CHECK(v == 0.0);
  CHECK_THROWS_AS(spectrogram_features(std::vector<double>(2047, 0.0)), DomainError);
}

TEST_CASE("spectrogram peak bin of a pure tone") {
  std::vector<double> x(2048);
  for (std::size_t i = 0; i < x.size(); ++i)
    x[i] = std::cos(2 * std::numbers::pi * 32.0 * i / 2048.0);
  const auto fv = spectrogram_features(x).values;
  for (std::size_t w = 0; w < 8; ++w) {
    const auto first = fv.begin() + static_cast<std::ptrdiff_t>(w * 129);
    CHECK(std::max_element(first, first + 129) - first == 4);
  }
  // 128-sample windows: 32 cycles per 2048 -> bin 2; 64-sample windows -> bin 1.
  for (std::size_t w = 0; w < 16; ++w) {
    const auto first = fv.begin() + static_cast<std::ptrdiff_t>(8 * 129 + w * 65);
    CHECK(std::max_element(first, first + 65) - first == 2);
  }
}

TEST_CASE("magnitude spectrum matches the DFT definition and Parseval") {
  const auto x = noise(256, 5);
  for (std::size_t len : {256u, 128u, 64u}) {
    const std::span<const double> w(x.data(), len);
    const auto mag = magnitude_spectrum(w);
    const auto ref = dft_magnitudes(w);
    REQUIRE(mag.size() == len / 2 + 1);
    for (std::size_t k = 0; k < mag.size(); ++k)
      CHECK(mag[k] == doctest::Approx(ref[k]).epsilon(1e-9));

    double time_energy = 0.0;
    for (double v : w) time_energy += v * v;
    double freq_energy = mag.front() * mag.front() + mag.back() * mag.back();
    for (std::size_t k = 1; k + 1 < mag.size(); ++k) freq_energy += 2 * mag[k] * mag[k];
    CHECK(freq_energy / static_cast<double>(len) ==
          doctest::Approx(time_energy).epsilon(1e-6));
  }
}

TEST_CASE("batch extraction keeps input order") {
  const std::vector<Scheme> schemes{Scheme::kOok, Scheme::kAm};
  const auto ds = make_dataset(schemes, 3, 2048, 10.0, 8);
  for (FeatureKind kind :
       {FeatureKind::kMspe, FeatureKind::kRaw, FeatureKind::kSpectrogram}) {
    const auto fm = extract_features(ds, kind);
    REQUIRE(fm.rows == 6);
    for (std::size_t i = 0; i < fm.rows; ++i) {
      const auto& x = ds.signals[i].samples;
      const auto single = kind == FeatureKind::kMspe ? mspe_features(x)
                          : kind == FeatureKind::kRaw ? raw_features(x)
                                                      : spectrogram_features(x);
      const auto row = fm.row(i);
      CHECK(std::vector<double>(row.begin(), row.end()) == single.values);
      CHECK(fm.labels[i] == ds.signals[i].label);
    }
  }
  CHECK(parse_feature_kind("spectrogram") == FeatureKind::kSpectrogram);
  CHECK_THROWS_AS(parse_feature_kind("wavelet"), ConfigError);
}
