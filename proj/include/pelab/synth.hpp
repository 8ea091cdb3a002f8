#pragma once

// Synthetic modulated signals, an additive white Gaussian noise channel at
// a calibrated SNR, and a coherent BPSK demodulator.
//
// Waveforms are real-valued and sampled at unit rate. The carrier for
// sample i is sin(2*pi*(f_c + f_off)*i + phase) with
// f_c = carrier_cycles_per_symbol / samples_per_symbol.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pelab {

enum class Scheme { kOok, kBpsk, kQpsk, kFsk2, kAm };

inline constexpr Scheme kAllSchemes[] = {Scheme::kOok, Scheme::kBpsk,
                                         Scheme::kQpsk, Scheme::kFsk2,
                                         Scheme::kAm};

// Lower-case names: ook, bpsk, qpsk, fsk2, am.
std::string_view scheme_name(Scheme s);
// Throws ConfigError on an unknown name.
Scheme parse_scheme(std::string_view name);

struct ModemConfig {
  double carrier_cycles_per_symbol = 2.0;
  int samples_per_symbol = 16;
  Scheme scheme = Scheme::kBpsk;
  double phase_offset = 0.0;  // radians
  double freq_offset = 0.0;   // cycles per sample

  // Throws DomainError unless samples_per_symbol >= 4 and the carrier is a
  // positive finite frequency.
  void validate() const;
};

// Number of payload bits carried by one symbol period.
int bits_per_symbol(Scheme s);

// Modulated waveform of length (bits.size() / bits_per_symbol) * sps.
//   OOK   bit 1 -> carrier, bit 0 -> silence
//   BPSK  bit 1 -> carrier, bit 0 -> carrier shifted by pi
//   QPSK  bit pairs select (+-1, +-1) on the cosine/sine pair, scaled by 1/sqrt(2)
//   FSK2  continuous-phase, bit b -> f_c + (2b - 1) / sps
//   AM    (1 + 0.5 m(i)) * carrier for a fixed two-tone message m; the
//         payload only sets the length
// Throws DomainError on empty input, bits other than 0/1, or an odd QPSK
// payload.
std::vector<double> modulate(std::span<const std::uint8_t> bits,
                             const ModemConfig& cfg);

// Correlates each symbol period against the reference carrier; a
// correlation >= 0 decodes as 1. Throws FramingError if the length is not a
// multiple of samples_per_symbol.
std::vector<std::uint8_t> bpsk_demodulate(std::span<const double> y,
                                          const ModemConfig& cfg);

double rms(std::span<const double> x);

// Zero-mean Gaussian noise of the given length, rescaled to exactly
// target_rms (unit-RMS normalization of the raw draw). Draws come from
// std::mt19937_64 seeded with `seed` and std::normal_distribution.
std::vector<double> gaussian_noise(std::size_t length, double target_rms,
                                   std::uint64_t seed);

// x + w with RMS(w) = RMS(x) * 10^(-snr_db / 20). Throws DomainError if x
// has zero RMS or snr_db is not finite.
std::vector<double> awgn(std::span<const double> x, double snr_db,
                         std::uint64_t seed);

// 20 log10(rms(clean) / rms(noise)).
double measured_snr_db(std::span<const double> clean,
                       std::span<const double> noise);

// splitmix64 finalizer; used to derive independent seeds.
std::uint64_t mix_seed(std::uint64_t x);

struct LabeledSignal {
  std::vector<double> samples;
  int label = 0;                  // index into Dataset::schemes
  std::optional<double> snr_db;   // nullopt = clean
  std::uint64_t seed = 0;         // per-signal seed
};

struct Dataset {
  std::vector<Scheme> schemes;
  std::size_t length = 0;
  std::optional<double> snr_db;
  std::uint64_t seed = 0;
  std::vector<LabeledSignal> signals;

  std::vector<int> labels() const;
  std::vector<std::string> label_names() const;
};

struct DatasetOptions {
  int samples_per_symbol = 16;
  double carrier_cycles_per_symbol = 2.0;
  double max_freq_offset = 0.002;  // cycles per sample
};

// per_class signals of each scheme, ordered class by class. Signal i uses
// seed mix_seed(seed ^ i) for its payload, phase offset in [0, 2pi),
// frequency offset in [-f_max, f_max] and noise draw, so the dataset is a
// pure function of its arguments regardless of thread count. snr_db =
// nullopt produces the clean counterparts of the same signals.
Dataset make_dataset(std::span<const Scheme> schemes, std::size_t per_class,
                     std::size_t length, std::optional<double> snr_db,
                     std::uint64_t seed, const DatasetOptions& opts = {});

}  // namespace pelab
