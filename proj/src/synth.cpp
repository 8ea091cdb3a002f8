#include "pelab/synth.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "pelab/error.hpp"

namespace pelab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Two-tone AM message, |m| <= 1.
double am_message(std::size_t i) {
  const double t = static_cast<double>(i);
  return 0.6 * std::sin(kTwoPi * t / 509.0) + 0.4 * std::sin(kTwoPi * t / 131.0);
}

double carrier_frequency(const ModemConfig& cfg) {
  return cfg.carrier_cycles_per_symbol / cfg.samples_per_symbol + cfg.freq_offset;
}

}  // namespace

std::string_view scheme_name(Scheme s) {
  switch (s) {
    case Scheme::kOok: return "ook";
    case Scheme::kBpsk: return "bpsk";
    case Scheme::kQpsk: return "qpsk";
    case Scheme::kFsk2: return "fsk2";
    case Scheme::kAm: return "am";
  }
  return "?";
}

Scheme parse_scheme(std::string_view name) {
  for (Scheme s : kAllSchemes)
    if (scheme_name(s) == name) return s;
  throw ConfigError("unknown modulation scheme '" + std::string(name) +
                    "' (expected ook, bpsk, qpsk, fsk2 or am)");
}

int bits_per_symbol(Scheme s) { return s == Scheme::kQpsk ? 2 : 1; }

void ModemConfig::validate() const {
  if (samples_per_symbol < 4)
    throw DomainError("samples_per_symbol must be >= 4, got " +
                      std::to_string(samples_per_symbol));
  if (!(std::isfinite(carrier_cycles_per_symbol) && carrier_cycles_per_symbol > 0))
    throw DomainError("carrier_cycles_per_symbol must be positive and finite");
  if (!std::isfinite(phase_offset) || !std::isfinite(freq_offset))
    throw DomainError("phase and frequency offsets must be finite");
}

std::vector<double> modulate(std::span<const std::uint8_t> bits,
                             const ModemConfig& cfg) {
  cfg.validate();
  if (bits.empty()) throw DomainError("cannot modulate an empty bit sequence");
  for (auto b : bits)
    if (b > 1) throw DomainError("bits must be 0 or 1");
  const int bps = bits_per_symbol(cfg.scheme);
  if (bits.size() % bps != 0)
    throw DomainError("QPSK needs an even number of bits, got " +
                      std::to_string(bits.size()));

  const std::size_t sps = static_cast<std::size_t>(cfg.samples_per_symbol);
  const std::size_t symbols = bits.size() / bps;
  const double f = carrier_frequency(cfg);
  std::vector<double> out(symbols * sps);

  if (cfg.scheme == Scheme::kFsk2) {
    const double deviation = 1.0 / cfg.samples_per_symbol;
    double phase = cfg.phase_offset;
    for (std::size_t s = 0; s < symbols; ++s) {
      const double fs = f + (bits[s] ? deviation : -deviation);
      for (std::size_t j = 0; j < sps; ++j) {
        out[s * sps + j] = std::sin(phase);
        phase = std::fmod(phase + kTwoPi * fs, kTwoPi);
      }
    }
    return out;
  }

  for (std::size_t s = 0; s < symbols; ++s) {
    for (std::size_t j = 0; j < sps; ++j) {
      const std::size_t i = s * sps + j;
      const double theta = kTwoPi * f * static_cast<double>(i) + cfg.phase_offset;
      double v = 0.0;
      switch (cfg.scheme) {
        case Scheme::kOok:
          v = bits[s] ? std::sin(theta) : 0.0;
          break;
        case Scheme::kBpsk:
          v = bits[s] ? std::sin(theta) : -std::sin(theta);
          break;
        case Scheme::kQpsk: {
          const double in_phase = bits[2 * s] ? 1.0 : -1.0;
          const double quadrature = bits[2 * s + 1] ? 1.0 : -1.0;
          v = (in_phase * std::cos(theta) + quadrature * std::sin(theta)) /
              std::numbers::sqrt2;
          break;
        }
        case Scheme::kAm:
          v = (1.0 + 0.5 * am_message(i)) * std::sin(theta);
          break;
        case Scheme::kFsk2:
          break;
      }
      out[i] = v;
    }
  }
  return out;
}

std::vector<std::uint8_t> bpsk_demodulate(std::span<const double> y,
                                          const ModemConfig& cfg) {
  cfg.validate();
  const std::size_t sps = static_cast<std::size_t>(cfg.samples_per_symbol);
  if (y.size() % sps != 0)
    throw FramingError("signal length " + std::to_string(y.size()) +
                       " is not a multiple of samples_per_symbol " +
                       std::to_string(sps));
  const double f = carrier_frequency(cfg);
  std::vector<std::uint8_t> bits(y.size() / sps);
  for (std::size_t s = 0; s < bits.size(); ++s) {
    double corr = 0.0;
    for (std::size_t j = 0; j < sps; ++j) {
      const std::size_t i = s * sps + j;
      corr += y[i] * std::sin(kTwoPi * f * static_cast<double>(i) + cfg.phase_offset);
    }
    bits[s] = corr >= 0.0 ? 1 : 0;
  }
  return bits;
}

double rms(std::span<const double> x) {
  if (x.empty()) return 0.0;
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return std::sqrt(acc / static_cast<double>(x.size()));
}

std::vector<double> gaussian_noise(std::size_t length, double target_rms,
                                   std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> w(length);
  for (auto& v : w) v = normal(rng);
  const double draw_rms = rms(w);
  if (draw_rms > 0.0)
    for (auto& v : w) v *= target_rms / draw_rms;
  return w;
}

std::vector<double> awgn(std::span<const double> x, double snr_db,
                         std::uint64_t seed) {
  if (!std::isfinite(snr_db)) throw DomainError("snr_db must be finite");
  for (double v : x)
    if (!std::isfinite(v)) throw DomainError("non-finite sample in signal");
  const double signal_rms = rms(x);
  if (!(signal_rms > 0.0))
    throw DomainError("SNR undefined for a signal with zero RMS");
  const auto w =
      gaussian_noise(x.size(), signal_rms * std::pow(10.0, -snr_db / 20.0), seed);
  std::vector<double> y(x.begin(), x.end());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += w[i];
  return y;
}

double measured_snr_db(std::span<const double> clean,
                       std::span<const double> noise) {
  return 20.0 * std::log10(rms(clean) / rms(noise));
}

std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::vector<int> Dataset::labels() const {
  std::vector<int> out;
  out.reserve(signals.size());
  for (const auto& s : signals) out.push_back(s.label);
  return out;
}

std::vector<std::string> Dataset::label_names() const {
  std::vector<std::string> out;
  for (Scheme s : schemes) out.emplace_back(scheme_name(s));
  return out;
}

Dataset make_dataset(std::span<const Scheme> schemes, std::size_t per_class,
                     std::size_t length, std::optional<double> snr_db,
                     std::uint64_t seed, const DatasetOptions& opts) {
  if (schemes.empty()) throw ConfigError("dataset needs at least one scheme");
  if (per_class < 1) throw DomainError("per_class must be >= 1");
  if (length < 256)
    throw DomainError("signal length must be >= 256, got " + std::to_string(length));
  if (snr_db && !std::isfinite(*snr_db)) throw DomainError("snr_db must be finite");
  if (!(opts.max_freq_offset >= 0.0))
    throw DomainError("max_freq_offset must be >= 0");

  Dataset ds;
  ds.schemes.assign(schemes.begin(), schemes.end());
  ds.length = length;
  ds.snr_db = snr_db;
  ds.seed = seed;
  ds.signals.resize(schemes.size() * per_class);

  ModemConfig base;
  base.samples_per_symbol = opts.samples_per_symbol;
  base.carrier_cycles_per_symbol = opts.carrier_cycles_per_symbol;
  base.validate();
  const std::size_t sps = static_cast<std::size_t>(base.samples_per_symbol);
  const std::size_t symbols = (length + sps - 1) / sps;

  const long count = static_cast<long>(ds.signals.size());
#pragma omp parallel for schedule(dynamic)
  for (long idx = 0; idx < count; ++idx) {
    const std::uint64_t signal_seed = mix_seed(seed ^ static_cast<std::uint64_t>(idx));
    std::mt19937_64 rng(signal_seed);
    std::uniform_real_distribution<double> phase_dist(0.0, kTwoPi);
    std::uniform_real_distribution<double> freq_dist(-opts.max_freq_offset,
                                                     opts.max_freq_offset);

    ModemConfig cfg = base;
    cfg.scheme = schemes[static_cast<std::size_t>(idx) / per_class];
    std::vector<std::uint8_t> bits(symbols * bits_per_symbol(cfg.scheme));
    for (auto& b : bits) b = static_cast<std::uint8_t>(rng() >> 63);
    cfg.phase_offset = phase_dist(rng);
    cfg.freq_offset = freq_dist(rng);
    const std::uint64_t noise_seed = rng();

    auto samples = modulate(bits, cfg);
    samples.resize(length);
    if (snr_db) samples = awgn(samples, *snr_db, noise_seed);

    auto& sig = ds.signals[idx];
    sig.samples = std::move(samples);
    sig.label = static_cast<int>(static_cast<std::size_t>(idx) / per_class);
    sig.snr_db = snr_db;
    sig.seed = signal_seed;
  }
  return ds;
}

}  // namespace pelab
