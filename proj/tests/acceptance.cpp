// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails. Each criterion also has a wall-clock budget.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "oracle.hpp"
#include "pelab/classify.hpp"
#include "pelab/entropy.hpp"
#include "pelab/features.hpp"
#include "pelab/ordinal.hpp"
#include "pelab/synth.hpp"
#include "pelab/windowing.hpp"

using namespace pelab;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

int failures = 0;

void criterion(const char* id, const char* title, double budget_s,
               const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail << " [exception: " << e.what() << "]";
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (elapsed > budget_s) {
    o.pass = false;
    o.detail << " [over budget " << budget_s << " s]";
  }
  if (!o.pass) ++failures;
  std::printf("%s %-4s %s (%.2f s)%s\n", o.pass ? "PASS" : "FAIL", id, title, elapsed,
              o.detail.str().c_str());
  std::fflush(stdout);
}

const std::vector<Scheme> kFiveSchemes(std::begin(kAllSchemes), std::end(kAllSchemes));

double centroid_accuracy(const Dataset& ds, const Split& split, FeatureKind kind) {
  const auto fm = extract_features(ds, kind);
  return fit_predict(subset(fm, split.train), subset(fm, split.test), Method::centroid(),
                     default_standardize(kind))
      .accuracy();
}

}  // namespace

int main() {
  criterion("A1", "worked-example entropy: H = 1.922, h = 0.744 (+-0.001)", 1.0, [](Outcome& o) {
    const std::vector<std::uint64_t> counts{1, 0, 1, 2, 1, 0};  // p = (1/5,0,1/5,2/5,1/5,0)
    const auto d = PatternDistribution::from_counts(3, 2, counts);
    const double h = permutation_entropy(d), npe = normalized_pe(d);
    o.detail << " H=" << h << " h=" << npe;
    o.require(std::abs(h - 1.922) <= 1e-3, "H");
    o.require(std::abs(npe - 0.744) <= 1e-3, "h");
  });

  criterion("A2", "pattern(1.2,3.1,-4.9) has rank 4; rank/unrank identity n<=8", 1.0,
            [](Outcome& o) {
              o.require(lex_rank(pattern(std::vector{1.2, 3.1, -4.9})) == 4, "rank 4");
              std::uint64_t checked = 0;
              for (int n = 1; n <= 8; ++n)
                for (std::uint64_t r = 1; r <= factorial(n); ++r, ++checked)
                  if (lex_rank(lex_unrank(r, n)) != r) {
                    o.require(false, "identity at n=" + std::to_string(n));
                    return;
                  }
              o.detail << " ranks checked=" << checked;
            });

  criterion("A3", "window starts t=14,k=5,alpha=0.4: figure (1,4,7,10), strict (1,5,9)", 1.0,
            [](Outcome& o) {
              const auto fig = window_starts(14, {5, 0.4, CeilingMode::kFigure});
              const auto strict = window_starts(14, {5, 0.4, CeilingMode::kStrictFootnote});
              o.require(fig == std::vector<std::size_t>{1, 4, 7, 10}, "figure");
              o.require(strict == std::vector<std::size_t>{1, 5, 9}, "strict-footnote");
            });

  criterion("A4", "distribution == naive recount, 500 series, n<=4, tau<=3", 5.0,
            [](Outcome& o) {
              std::mt19937_64 rng(4);
              std::uniform_int_distribution<int> len(1, 50), level(0, 6);
              std::normal_distribution<double> g;
              std::size_t cells = 0;
              for (int s = 0; s < 500; ++s) {
                std::vector<double> x(len(rng));
                for (auto& v : x) v = s % 3 == 0 ? level(rng) : g(rng);
                for (int n = 1; n <= 4; ++n)
                  for (int tau = 1; tau <= 3; ++tau) {
                    if (x.size() < required_length(n, tau)) continue;
                    ++cells;
                    if (distribution(x, n, tau).counts() != oracle::recount(x, n, tau))
                      o.require(false, "mismatch in series " + std::to_string(s));
                  }
              }
              o.detail << " cells=" << cells;
            });

  criterion("A5", "monotone => NPE 0; iid noise 1e5 => NPE >= 0.99 (n=3,4,5, tau=1)", 5.0,
            [](Outcome& o) {
              std::vector<double> ramp(60);
              for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = 0.3 * static_cast<double>(i);
              for (int n = 2; n <= kMaxDimension; ++n)
                for (int tau = 1; required_length(n, tau) <= ramp.size(); ++tau)
                  o.require(normalized_pe(distribution(ramp, n, tau)) == 0.0,
                            "monotone n=" + std::to_string(n) + " tau=" + std::to_string(tau));
              std::mt19937_64 rng(5);
              std::uniform_real_distribution<double> u(0.0, 1.0);
              std::vector<double> x(100000);
              for (auto& v : x) v = u(rng);
              for (int n : {3, 4, 5}) {
                const double h = normalized_pe(distribution(x, n, 1));
                o.detail << " h" << n << "=" << h;
                o.require(h >= 0.99, "noise n=" + std::to_string(n));
              }
            });

  criterion("A6", "mspe_features: 280 values, frozen order, x vs 5x bitwise", 5.0,
            [](Outcome& o) {
              const auto ds = make_dataset(kFiveSchemes, 1, 2048, 10.0, 6);
              for (const auto& sig : ds.signals) {
                const std::span<const double> x = sig.samples;
                const auto f = mspe_features(x).values;
                o.require(f.size() == 280, "length");
                const MspeGrid grid;
                const std::size_t starts[] = {0, 0, 1024, 0, 512, 1024, 1536};
                const std::size_t lens[] = {2048, 1024, 1024, 512, 512, 512, 512};
                std::size_t idx = 0;
                for (int w = 0; w < 7; ++w)
                  for (int n : grid.dims)
                    for (int tau : grid.delays)
                      if (f[idx++] != permutation_entropy(distribution(
                                          x.subspan(starts[w], lens[w]), n, tau)))
                        o.require(false, "order at index " + std::to_string(idx - 1));
                std::vector<double> scaled(x.begin(), x.end());
                for (auto& v : scaled) v *= 5.0;
                o.require(mspe_features(scaled).values == f, "scale invariance");
              }
            });

  criterion("A7", "25 dB, 200/class: MSPE centroid >= raw + 15 pp and >= 2x chance", 120.0,
            [](Outcome& o) {
              const auto ds = make_dataset(kFiveSchemes, 200, 2048, 25.0, 2024);
              const auto split = stratified_split(ds.labels(), 0.3, 2024);
              const double mspe_acc = centroid_accuracy(ds, split, FeatureKind::kMspe);
              const double raw_acc = centroid_accuracy(ds, split, FeatureKind::kRaw);
              o.detail << " mspe=" << mspe_acc << " raw=" << raw_acc;
              o.require(mspe_acc - raw_acc >= 0.15, "gap >= 15 pp");
              o.require(mspe_acc >= 2.0 / 5.0, "mspe >= 2x chance");
              // Regression floors frozen from the calibration run
              // (mspe 0.9967, raw 0.3033 on this seed).
              o.require(mspe_acc >= 0.95, "mspe regression floor 0.95");
              o.require(raw_acc <= 0.45, "raw regression ceiling 0.45");
            });

  criterion("A8", "8-point SNR sweep: MSPE(25) > MSPE(-10) in >= 4/5 seeds; all >= chance-0.05",
            600.0, [](Outcome& o) {
              int wins = 0;
              double worst = 1.0;
              for (std::uint64_t seed = 1; seed <= 5; ++seed) {
                SweepConfig cfg;
                cfg.seed = seed;
                const auto rows = snr_sweep(cfg);
                double lo = -1, hi = -1;
                for (const auto& r : rows) {
                  worst = std::min(worst, r.accuracy);
                  if (r.kind != FeatureKind::kMspe) continue;
                  if (r.snr_db == -10) lo = r.accuracy;
                  if (r.snr_db == 25) hi = r.accuracy;
                }
                wins += hi > lo;
                o.detail << " s" << seed << ":" << lo << "->" << hi;
              }
              o.detail << " worst=" << worst;
              o.require(wins >= 4, "monotone endpoints in >= 4 of 5 seeds");
              o.require(worst >= 1.0 / 5.0 - 0.05, "accuracy floor");
            });

  criterion("A9", "awgn measured SNR within 0.3 dB, -10..25 dB x 100 seeds", 10.0,
            [](Outcome& o) {
              ModemConfig cfg;
              double worst = 0.0;
              for (int snr = -10; snr <= 25; snr += 5)
                for (std::uint64_t seed = 0; seed < 100; ++seed) {
                  std::mt19937_64 rng(seed);
                  std::vector<std::uint8_t> bits(128);
                  for (auto& b : bits) b = static_cast<std::uint8_t>(rng() & 1);
                  const auto x = modulate(bits, cfg);
                  const auto y = awgn(x, snr, seed * 31 + 7);
                  std::vector<double> w(x.size());
                  for (std::size_t i = 0; i < x.size(); ++i) w[i] = y[i] - x[i];
                  worst = std::max(worst, std::abs(measured_snr_db(x, w) - snr));
                }
              o.detail << " max|err|=" << worst << " dB";
              o.require(worst <= 0.3, "tolerance");
            });

  criterion("A10", "BPSK: 1000 clean round trips; BER 0 at 25 dB over 100 trials", 10.0,
            [](Outcome& o) {
              ModemConfig cfg;  // 16 samples/symbol
              std::mt19937_64 rng(10);
              for (int trial = 0; trial < 1000; ++trial) {
                std::vector<std::uint8_t> bits(1 + rng() % 256);
                for (auto& b : bits) b = static_cast<std::uint8_t>(rng() & 1);
                if (bpsk_demodulate(modulate(bits, cfg), cfg) != bits)
                  o.require(false, "clean trial " + std::to_string(trial));
              }
              std::size_t errors = 0;
              for (std::uint64_t trial = 0; trial < 100; ++trial) {
                std::vector<std::uint8_t> bits(128);
                for (auto& b : bits) b = static_cast<std::uint8_t>(rng() & 1);
                const auto rx = bpsk_demodulate(awgn(modulate(bits, cfg), 25.0, trial), cfg);
                for (std::size_t i = 0; i < bits.size(); ++i) errors += rx[i] != bits[i];
              }
              o.detail << " bit errors at 25 dB=" << errors;
              o.require(errors == 0, "BER 0");
            });

  criterion("A11", "noise->periodic profile: min(first half) > max(second half)", 1.0,
            [](Outcome& o) {
              std::mt19937_64 rng(11);
              std::uniform_real_distribution<double> u(-1.0, 1.0);
              std::vector<double> x(4096);
              for (std::size_t i = 0; i < 2048; ++i) x[i] = u(rng);
              for (std::size_t i = 2048; i < 4096; ++i) x[i] = static_cast<double>(i % 16) / 16.0;
              const auto h = pe_profile(x, 3, 1, {512, 0.0});
              o.require(h.size() == 8, "8 windows");
              const double first_min = *std::min_element(h.begin(), h.begin() + 4);
              const double second_max = *std::max_element(h.begin() + 4, h.end());
              o.detail << " min(first)=" << first_min << " max(second)=" << second_max;
              o.require(first_min > second_max, "drop");
            });

  std::printf("%s: %d criterion(s) failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
