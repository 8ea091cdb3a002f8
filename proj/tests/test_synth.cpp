#include <doctest.h>

#include <omp.h>

#include <cmath>
#include <numbers>
#include <random>

#include "pelab/entropy.hpp"
#include "pelab/error.hpp"
#include "pelab/synth.hpp"

using namespace pelab;
using Bits = std::vector<std::uint8_t>;

namespace {

Bits random_bits(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Bits b(n);
  for (auto& v : b) v = static_cast<std::uint8_t>(rng() & 1);
  return b;
}

ModemConfig bpsk() {
  ModemConfig cfg;
  cfg.scheme = Scheme::kBpsk;
  return cfg;
}

}  // namespace

TEST_CASE("BPSK symbol for 0 is the negated carrier") {
  const auto y = modulate(Bits{1, 0}, bpsk());
  REQUIRE(y.size() == 32);
  for (std::size_t j = 0; j < 16; ++j) CHECK(y[16 + j] == doctest::Approx(-y[j]));
}

TEST_CASE("OOK off state is silent") {
  ModemConfig cfg;
  cfg.scheme = Scheme::kOok;
  cfg.phase_offset = 0.7;
  for (double v : modulate(Bits{0}, cfg)) CHECK(v == 0.0);
}

TEST_CASE("BPSK sign pattern at each symbol's quarter-cycle peak") {
  const Bits bits{1, 0, 1, 1, 0};
  const auto y = modulate(bits, bpsk());
  REQUIRE(y.size() == 80);
  // 2 cycles per 16 samples: the first peak of sin sits 2 samples in.
  for (std::size_t s = 0; s < bits.size(); ++s) {
    const double expected =
        (bits[s] ? 1.0 : -1.0) * std::sin(2 * std::numbers::pi * 2.0 / 16.0 * (16.0 * s + 2));
    CHECK(y[16 * s + 2] == doctest::Approx(expected));
    CHECK((y[16 * s + 2] > 0) == (bits[s] == 1));
  }
}

TEST_CASE("modulate output lengths and errors") {
  ModemConfig cfg;
  for (Scheme s : kAllSchemes) {
    cfg.scheme = s;
    const auto y = modulate(Bits(8, 1), cfg);
    CHECK(y.size() == (s == Scheme::kQpsk ? 4u : 8u) * 16u);
  }
  cfg.scheme = Scheme::kQpsk;
  CHECK_THROWS_AS(modulate(Bits{1, 0, 1}, cfg), DomainError);
  CHECK_THROWS_AS(modulate(Bits{}, bpsk()), DomainError);
  CHECK_THROWS_AS(modulate(Bits{2}, bpsk()), DomainError);
  auto bad = bpsk();
  bad.samples_per_symbol = 3;
  CHECK_THROWS_AS(modulate(Bits{1}, bad), DomainError);
}

TEST_CASE("property: flipping every bit negates a BPSK waveform") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto b = random_bits(40, seed);
    const auto y = modulate(b, bpsk());
    for (auto& v : b) v ^= 1;
    const auto z = modulate(b, bpsk());
    for (std::size_t i = 0; i < y.size(); ++i) CHECK(z[i] == -y[i]);
  }
}

TEST_CASE("property: constant-envelope schemes have payload-independent RMS") {
  for (Scheme s : {Scheme::kBpsk, Scheme::kQpsk, Scheme::kFsk2}) {
    ModemConfig cfg;
    cfg.scheme = s;
    const double ref = rms(modulate(random_bits(64, 1), cfg));
    for (std::uint64_t seed = 2; seed < 30; ++seed)
      CHECK(rms(modulate(random_bits(64, seed), cfg)) == doctest::Approx(ref).epsilon(0.01));
  }
}

TEST_CASE("BPSK demodulation") {
  SUBCASE("clean round trip") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      auto cfg = bpsk();
      cfg.phase_offset = 0.1 * static_cast<double>(seed);
      const auto b = random_bits(1 + seed, seed);
      CHECK(bpsk_demodulate(modulate(b, cfg), cfg) == b);
    }
  }
  SUBCASE("25 dB channel") {
    const auto cfg = bpsk();
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const auto b = random_bits(128, seed);
      CHECK(bpsk_demodulate(awgn(modulate(b, cfg), 25.0, seed), cfg) == b);
    }
  }
  SUBCASE("zero correlation decodes as 1") {
    CHECK(bpsk_demodulate(std::vector<double>(48, 0.0), bpsk()) == Bits{1, 1, 1});
  }
  SUBCASE("framing") {
    CHECK_THROWS_AS(bpsk_demodulate(std::vector<double>(20, 0.0), bpsk()), FramingError);
  }
}

TEST_CASE("awgn scales noise to the requested SNR") {
  const auto x = modulate(random_bits(128, 3), bpsk());
  REQUIRE(x.size() == 2048);
  for (double snr : {0.0, 20.0}) {
    const auto y = awgn(x, snr, 5);
    std::vector<double> w(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) w[i] = y[i] - x[i];
    const double ratio = rms(w) / rms(x);
    CHECK(ratio == doctest::Approx(std::pow(10.0, -snr / 20.0)).epsilon(0.02));
  }
  for (int snr = -10; snr <= 25; snr += 5) {
    const auto y = awgn(x, snr, 100 + snr);
    std::vector<double> w(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) w[i] = y[i] - x[i];
    CHECK(std::abs(measured_snr_db(x, w) - snr) < 0.3);
  }
}

TEST_CASE("awgn determinism and errors") {
  const auto x = modulate(random_bits(16, 9), bpsk());
  CHECK(awgn(x, 3.0, 77) == awgn(x, 3.0, 77));
  CHECK(awgn(x, 3.0, 77) != awgn(x, 3.0, 78));
  CHECK_THROWS_AS(awgn(std::vector<double>(64, 0.0), 10.0, 1), DomainError);
  CHECK_THROWS_AS(awgn(x, NAN, 1), DomainError);
  CHECK_THROWS_AS(awgn(x, INFINITY, 1), DomainError);
}

TEST_CASE("dataset shape, balance and reproducibility") {
  const std::vector<Scheme> schemes(std::begin(kAllSchemes), std::end(kAllSchemes));
  const auto ds = make_dataset(schemes, 200, 2048, 10.0, 42);
  REQUIRE(ds.signals.size() == 1000);
  std::vector<int> per_label(5, 0);
  for (const auto& s : ds.signals) {
    CHECK(s.samples.size() == 2048);
    ++per_label[s.label];
  }
  for (int c : per_label) CHECK(c == 200);

  const auto again = make_dataset(schemes, 200, 2048, 10.0, 42);
  for (std::size_t i = 0; i < ds.signals.size(); ++i)
    REQUIRE(ds.signals[i].samples == again.signals[i].samples);
  CHECK(make_dataset(schemes, 1, 2048, 10.0, 43).signals[0].samples !=
        ds.signals[0].samples);
}

TEST_CASE("dataset does not depend on the thread count") {
  const std::vector<Scheme> schemes{Scheme::kBpsk, Scheme::kFsk2};
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const auto serial = make_dataset(schemes, 8, 512, 0.0, 5);
  omp_set_num_threads(4);
  const auto parallel = make_dataset(schemes, 8, 512, 0.0, 5);
  omp_set_num_threads(saved);
  for (std::size_t i = 0; i < serial.signals.size(); ++i)
    CHECK(serial.signals[i].samples == parallel.signals[i].samples);
}

TEST_CASE("near-clean dataset keeps the clean permutation entropy") {
  const std::vector<Scheme> schemes(std::begin(kAllSchemes), std::end(kAllSchemes));
  const auto noisy = make_dataset(schemes, 1, 2048, 60.0, 3);
  const auto clean = make_dataset(schemes, 1, 2048, std::nullopt, 3);
  for (std::size_t i = 0; i < schemes.size(); ++i) {
    const double a = permutation_entropy(distribution(noisy.signals[i].samples, 3, 1));
    const double b = permutation_entropy(distribution(clean.signals[i].samples, 3, 1));
    if (schemes[i] == Scheme::kOok) {
      // Clean OOK silence is exact zeros, which tie-break to the ascending
      // pattern; at any noise level those stretches become random patterns.
      CHECK(a - b > 0.5);
    } else {
      CHECK(std::abs(a - b) < 0.02);
    }
  }
}

TEST_CASE("dataset errors") {
  CHECK_THROWS_AS(parse_scheme("usb"), ConfigError);
  CHECK(parse_scheme("fsk2") == Scheme::kFsk2);
  const std::vector<Scheme> one{Scheme::kAm};
  CHECK_THROWS_AS(make_dataset(one, 0, 2048, 0.0, 1), DomainError);
  CHECK_THROWS_AS(make_dataset(one, 1, 255, 0.0, 1), DomainError);
  CHECK_THROWS_AS(make_dataset({}, 1, 2048, 0.0, 1), ConfigError);
  // Lengths that are not whole symbols are truncated.
  CHECK(make_dataset(one, 2, 300, 5.0, 1).signals[1].samples.size() == 300);
}
