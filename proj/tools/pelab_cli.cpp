// pelab: permutation-entropy analysis and modulation-lab command line.
//
// Exit codes: 0 success, 1 domain/data error, 2 usage error.
// PELAB_NUM_THREADS overrides the OpenMP thread count.

#include <omp.h>

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pelab/classify.hpp"
#include "pelab/entropy.hpp"
#include "pelab/error.hpp"
#include "pelab/io.hpp"
#include "pelab/ordinal.hpp"
#include "pelab/synth.hpp"
#include "pelab/windowing.hpp"

using namespace pelab;
using json = nlohmann::ordered_json;

namespace {

// Bad flag values detected after CLI11 parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string input;
  std::string output;
  std::string format = "csv";
};

struct Options {
  Common common;
  // pattern
  std::vector<double> values;
  std::uint64_t rank = 0;
  // pe / profile
  int n = 3;
  int tau = 1;
  // mspe / scan / features
  std::vector<int> dims{3, 4, 5, 6, 7};
  std::vector<int> delays{1, 5, 10, 15, 20, 30, 40, 50};
  bool normalized = false;
  double epsilon = 0.01;
  // profile
  std::size_t k = 512;
  double alpha = 0.0;
  std::string ceiling = "figure";
  // synth / sweep
  std::vector<std::string> schemes{"ook", "bpsk", "qpsk", "fsk2", "am"};
  std::size_t per_class = 200;
  std::size_t t = 2048;
  std::string snr = "25";
  std::vector<double> snrs{-10, -5, 0, 5, 10, 15, 20, 25};
  std::optional<std::uint64_t> seed;
  std::string csv_path;
  // modem
  std::string bits;
  std::size_t random_bits = 0;
  int sps = 16;
  double cycles = 2.0;
  double phase = 0.0;
  std::string waveform_path;
  std::string modem_snr = "clean";
  // features / classify / sweep
  std::string dataset_path;
  std::string features_path;
  std::string kind = "mspe";
  std::vector<std::string> kinds{"mspe", "raw", "spectrogram"};
  std::string method = "centroid";
  int knn_k = 1;
  double test_fraction = 0.3;
  std::string standardize = "auto";
};

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw ConfigError("cannot open '" + path + "' for writing");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

bool want_json(const Options& o) { return o.common.format == "json"; }

std::vector<double> load_input(const Options& o) {
  if (o.common.input.empty()) throw UsageError("--input is required");
  auto x = io::read_series(o.common.input);
  if (x.empty()) throw DomainError("input series '" + o.common.input + "' is empty");
  return x;
}

std::uint64_t require_seed(const Options& o, const std::string& sub) {
  if (!o.seed) throw UsageError(sub + ": --seed is required");
  return *o.seed;
}

std::vector<Scheme> parse_schemes(const std::vector<std::string>& names) {
  std::vector<Scheme> out;
  try {
    for (const auto& n : names) out.push_back(parse_scheme(n));
  } catch (const ConfigError& e) {
    throw UsageError(std::string("--schemes: ") + e.what());
  }
  if (out.empty()) throw UsageError("--schemes: empty list");
  return out;
}

std::optional<double> parse_snr(const std::string& text) {
  if (text == "clean") return std::nullopt;
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw UsageError("--snr: expected a number or 'clean', got '" + text + "'");
  }
}

FeatureKind kind_or_usage(const std::string& name, const char* flag) {
  try {
    return parse_feature_kind(name);
  } catch (const ConfigError& e) {
    throw UsageError(std::string(flag) + ": " + e.what());
  }
}

Method method_from(const Options& o) {
  Method m;
  try {
    m = parse_method(o.method);
  } catch (const ConfigError& e) {
    throw UsageError(std::string("--method: ") + e.what());
  }
  if (m.kind == Method::Kind::kKnn && o.method == "knn") m.k = o.knn_k;
  return m;
}

std::optional<bool> standardize_from(const Options& o) {
  if (o.standardize == "auto") return std::nullopt;
  if (o.standardize == "on") return true;
  if (o.standardize == "off") return false;
  throw UsageError("--standardize: expected auto, on or off");
}

std::string join_bits(const std::vector<std::uint8_t>& bits) {
  std::string s;
  for (auto b : bits) s += b ? '1' : '0';
  return s;
}

std::vector<std::uint8_t> parse_bits(const std::string& text) {
  std::vector<std::uint8_t> bits;
  for (char c : text) {
    if (c == '0' || c == '1')
      bits.push_back(static_cast<std::uint8_t>(c - '0'));
    else if (c != ',' && c != ' ')
      throw UsageError(std::string("--bits: unexpected character '") + c + "'");
  }
  return bits;
}

MspeGrid grid_from(const Options& o) {
  MspeGrid g;
  g.dims = o.dims;
  g.delays = o.delays;
  g.normalized = o.normalized;
  return g;
}

// --- subcommands ---------------------------------------------------------

void run_pattern(const Options& o) {
  Output out(o.common.output);
  OrdinalPattern p;
  std::optional<std::uint64_t> rank;
  if (o.rank != 0) {
    p = lex_unrank(o.rank, o.n);
    rank = o.rank;
  } else {
    const auto x = o.values.empty() ? load_input(o) : o.values;
    p = pattern(x);
    if (p.dimension() <= kMaxDimension) rank = lex_rank(p);
  }
  if (want_json(o)) {
    json j;
    j["spec_version"] = io::kSpecVersion;
    j["symbols"] = p.symbols;
    j["lex_rank"] = rank ? json(*rank) : json(nullptr);
    out.stream() << j.dump(2) << '\n';
    return;
  }
  out.stream() << "symbols,lex_rank\n";
  for (std::size_t i = 0; i < p.symbols.size(); ++i)
    out.stream() << (i ? " " : "") << p.symbols[i];
  out.stream() << ',' << (rank ? std::to_string(*rank) : "") << '\n';
}

void run_pe(const Options& o) {
  const auto x = load_input(o);
  const auto d = distribution(x, o.n, o.tau);
  const double h = permutation_entropy(d);
  std::optional<double> npe;
  if (o.n >= 2) npe = normalized_pe(d);
  Output out(o.common.output);
  if (want_json(o)) {
    json j;
    j["spec_version"] = io::kSpecVersion;
    j["n"] = o.n;
    j["tau"] = o.tau;
    j["total"] = d.total();
    j["H"] = h;
    j["h"] = npe ? json(*npe) : json(nullptr);
    out.stream() << j.dump(2) << '\n';
    return;
  }
  out.stream() << "n,tau,total,H,h\n"
               << o.n << ',' << o.tau << ',' << d.total() << ',' << io::format_double(h)
               << ',' << (npe ? io::format_double(*npe) : "") << '\n';
}

void run_mspe(const Options& o) {
  const auto x = load_input(o);
  const auto m = mspe(x, o.dims, o.delays, o.normalized);
  Output out(o.common.output);
  if (want_json(o))
    io::write_mspe_json(out.stream(), m);
  else
    io::write_mspe_csv(out.stream(), m);
}

void run_profile(const Options& o) {
  const auto x = load_input(o);
  WindowSpec spec{o.k, o.alpha, CeilingMode::kFigure};
  try {
    spec.mode = parse_ceiling_mode(o.ceiling);
  } catch (const DomainError& e) {
    throw UsageError(std::string("--ceiling: ") + e.what());
  }
  const auto h = pe_profile(x, o.n, o.tau, spec);
  const auto starts = window_starts(x.size(), spec);
  Output out(o.common.output);
  if (want_json(o)) {
    json j;
    j["spec_version"] = io::kSpecVersion;
    j["n"] = o.n;
    j["tau"] = o.tau;
    j["k"] = o.k;
    j["alpha"] = o.alpha;
    j["ceiling"] = to_string(spec.mode);
    j["starts"] = starts;
    j["h"] = h;
    out.stream() << j.dump(2) << '\n';
    return;
  }
  out.stream() << "window,start,h\n";
  for (std::size_t i = 0; i < h.size(); ++i)
    out.stream() << i + 1 << ',' << starts[i] << ',' << io::format_double(h[i]) << '\n';
}

void run_scan(const Options& o) {
  const auto x = load_input(o);
  const auto r = scan(x, o.dims, o.delays, o.epsilon);
  Output out(o.common.output);
  auto cells = [](const std::vector<ScaleResult>& v) {
    json a = json::array();
    for (const auto& c : v) a.push_back({{"n", c.n}, {"tau", c.tau}, {"h", c.npe}});
    return a;
  };
  if (want_json(o)) {
    json j;
    j["spec_version"] = io::kSpecVersion;
    j["epsilon"] = o.epsilon;
    j["near_uniform"] = cells(r.near_uniform);
    j["structured"] = cells(r.structured);
    j["argmin"] = {{"n", r.argmin.n}, {"tau", r.argmin.tau}, {"h", r.argmin.npe}};
    out.stream() << j.dump(2) << '\n';
    return;
  }
  out.stream() << "n,tau,h,near_uniform,argmin\n";
  for (int n : o.dims)
    for (int tau : o.delays) {
      auto emit = [&](const ScaleResult& c, bool uniform) {
        if (c.n != n || c.tau != tau) return;
        const bool is_min = c.n == r.argmin.n && c.tau == r.argmin.tau;
        out.stream() << n << ',' << tau << ',' << io::format_double(c.npe) << ','
                     << uniform << ',' << is_min << '\n';
      };
      for (const auto& c : r.near_uniform) emit(c, true);
      for (const auto& c : r.structured) emit(c, false);
    }
}

void run_synth(const Options& o) {
  const auto seed = require_seed(o, "synth");
  const auto schemes = parse_schemes(o.schemes);
  const auto snr = parse_snr(o.snr);
  if (o.common.output.empty() && o.csv_path.empty())
    throw UsageError("synth: give --output (binary) and/or --csv");
  const auto ds = make_dataset(schemes, o.per_class, o.t, snr, seed);
  if (!o.common.output.empty()) io::save_dataset(o.common.output, ds);
  if (!o.csv_path.empty()) {
    Output csv(o.csv_path);
    io::write_dataset_csv(csv.stream(), ds);
  }
  std::cerr << "wrote " << ds.signals.size() << " signals of length " << ds.length << '\n';
}

void run_modem(const Options& o) {
  std::vector<std::uint8_t> bits;
  if (!o.bits.empty()) {
    bits = parse_bits(o.bits);
  } else if (o.random_bits > 0) {
    std::mt19937_64 rng(mix_seed(require_seed(o, "modem --random")));
    bits.resize(o.random_bits);
    for (auto& b : bits) b = static_cast<std::uint8_t>(rng() >> 63);
  } else {
    throw UsageError("modem: give --bits or --random");
  }
  ModemConfig cfg;
  cfg.scheme = Scheme::kBpsk;
  cfg.samples_per_symbol = o.sps;
  cfg.carrier_cycles_per_symbol = o.cycles;
  cfg.phase_offset = o.phase;
  auto wave = modulate(bits, cfg);
  const auto snr = parse_snr(o.modem_snr);
  if (snr) wave = awgn(wave, *snr, mix_seed(require_seed(o, "modem --snr") ^ 0xa5a5));
  const auto received = bpsk_demodulate(wave, cfg);
  std::size_t errors = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) errors += bits[i] != received[i];
  if (!o.waveform_path.empty()) {
    Output w(o.waveform_path);
    io::write_series(w.stream(), wave);
  }
  Output out(o.common.output);
  const double ber = static_cast<double>(errors) / static_cast<double>(bits.size());
  if (want_json(o)) {
    json j;
    j["spec_version"] = io::kSpecVersion;
    j["sent"] = join_bits(bits);
    j["received"] = join_bits(received);
    j["bit_errors"] = errors;
    j["ber"] = ber;
    out.stream() << j.dump(2) << '\n';
    return;
  }
  out.stream() << "sent,received,bit_errors,ber\n"
               << join_bits(bits) << ',' << join_bits(received) << ',' << errors << ','
               << io::format_double(ber) << '\n';
}

FeatureMatrix features_from_dataset(const Options& o, FeatureKind kind) {
  if (o.dataset_path.empty()) throw UsageError("--dataset is required");
  const auto ds = io::load_dataset(o.dataset_path);
  return extract_features(ds, kind, grid_from(o));
}

void run_features(const Options& o) {
  const auto fm = features_from_dataset(o, kind_or_usage(o.kind, "--kind"));
  Output out(o.common.output);
  if (want_json(o))
    io::write_features_json(out.stream(), fm);
  else
    io::write_features_csv(out.stream(), fm);
}

void run_classify(const Options& o) {
  const auto seed = require_seed(o, "classify");
  const Method method = method_from(o);
  const auto override = standardize_from(o);
  FeatureMatrix fm;
  FeatureKind kind = kind_or_usage(o.kind, "--kind");
  if (!o.features_path.empty()) {
    std::ifstream is(o.features_path);
    if (!is) throw ConfigError("cannot open '" + o.features_path + "'");
    fm = io::read_features_csv(is);
    fm.kind = kind;
  } else {
    fm = features_from_dataset(o, kind);
  }
  const auto split = stratified_split(fm.labels, o.test_fraction, seed);
  const auto cm = fit_predict(subset(fm, split.train), subset(fm, split.test), method,
                              override.value_or(default_standardize(kind)));
  Output out(o.common.output);
  if (want_json(o))
    io::write_confusion_json(out.stream(), cm);
  else
    io::write_confusion_csv(out.stream(), cm);
  std::cerr << "accuracy " << io::format_double(cm.accuracy()) << '\n';
}

void run_sweep(const Options& o) {
  SweepConfig cfg;
  cfg.seed = require_seed(o, "sweep");
  cfg.schemes = parse_schemes(o.schemes);
  cfg.snrs = o.snrs;
  cfg.per_class = o.per_class;
  cfg.length = o.t;
  cfg.kinds.clear();
  for (const auto& k : o.kinds) cfg.kinds.push_back(kind_or_usage(k, "--kinds"));
  cfg.method = method_from(o);
  cfg.standardize = standardize_from(o);
  cfg.test_fraction = o.test_fraction;
  cfg.grid = grid_from(o);
  const auto rows = snr_sweep(cfg);
  Output out(o.common.output);
  if (want_json(o)) {
    json j;
    j["spec_version"] = io::kSpecVersion;
    j["method"] = cfg.method.name();
    j["per_class"] = cfg.per_class;
    j["seed"] = cfg.seed;
    auto& a = j["rows"] = json::array();
    for (const auto& r : rows)
      a.push_back({{"snr", r.snr_db}, {"kind", feature_kind_name(r.kind)},
                   {"accuracy", r.accuracy}});
    out.stream() << j.dump(2) << '\n';
    return;
  }
  io::write_sweep_csv(out.stream(), rows);
}

// --- wiring --------------------------------------------------------------

void add_common(CLI::App* sub, Options& o, bool with_input) {
  if (with_input)
    sub->add_option("-i,--input", o.common.input,
                    "Series file: one sample per line or one comma-separated line");
  sub->add_option("-o,--output", o.common.output, "Output path (default: stdout)");
  sub->add_option("--format", o.common.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
}

void add_grid(CLI::App* sub, Options& o) {
  sub->add_option("--dims", o.dims, "Pattern dimensions n, strictly increasing")
      ->delimiter(',')
      ->capture_default_str();
  sub->add_option("--delays", o.delays, "Delays tau, strictly increasing")
      ->delimiter(',')
      ->capture_default_str();
}

void add_seed(CLI::App* sub, Options& o) {
  sub->add_option("--seed", o.seed, "PRNG seed (required for randomized output)");
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* env = std::getenv("PELAB_NUM_THREADS")) {
    const int threads = std::atoi(env);
    if (threads > 0) omp_set_num_threads(threads);
  }

  CLI::App app{"Permutation entropy analysis and modulation lab"};
  app.require_subcommand(1);
  Options o;

  auto* pat = app.add_subcommand("pattern", "Ordinal pattern and lexicographic rank");
  add_common(pat, o, true);
  pat->add_option("--values", o.values, "Comma-separated values")->delimiter(',');
  pat->add_option("--rank", o.rank, "Unrank this 1-based lexicographic rank instead");
  pat->add_option("--n", o.n, "Dimension for --rank")->capture_default_str();

  auto* pe = app.add_subcommand("pe", "Permutation entropy H and normalized h");
  add_common(pe, o, true);
  pe->add_option("--n", o.n, "Dimension")->capture_default_str();
  pe->add_option("--tau", o.tau, "Delay")->capture_default_str();

  auto* ms = app.add_subcommand("mspe", "Multi-scale permutation entropy matrix");
  add_common(ms, o, true);
  add_grid(ms, o);
  ms->add_flag("--normalized", o.normalized, "Report h instead of H");

  auto* prof = app.add_subcommand("profile", "Windowed normalized entropy profile");
  add_common(prof, o, true);
  prof->add_option("--n", o.n, "Dimension")->capture_default_str();
  prof->add_option("--tau", o.tau, "Delay")->capture_default_str();
  prof->add_option("--k", o.k, "Window length")->capture_default_str();
  prof->add_option("--alpha", o.alpha, "Overlap proportion in [0,1)")->capture_default_str();
  prof->add_option("--ceiling", o.ceiling, "Step rounding: figure or strict-footnote")
      ->capture_default_str();

  auto* sc = app.add_subcommand("scan", "Classify (n, tau) cells as near-uniform or structured");
  add_common(sc, o, true);
  add_grid(sc, o);
  sc->add_option("--epsilon", o.epsilon, "Near-uniform threshold 1 - epsilon")
      ->capture_default_str();

  auto* syn = app.add_subcommand("synth", "Generate a labeled synthetic dataset");
  syn->add_option("-o,--output", o.common.output, "Binary dataset path");
  syn->add_option("--csv", o.csv_path, "Also write CSV (label, samples...)");
  syn->add_option("--schemes", o.schemes, "Schemes: ook,bpsk,qpsk,fsk2,am")
      ->delimiter(',')
      ->capture_default_str();
  syn->add_option("--per-class", o.per_class, "Signals per scheme")->capture_default_str();
  syn->add_option("--t", o.t, "Signal length")->capture_default_str();
  syn->add_option("--snr", o.snr, "SNR in dB, or 'clean'")->capture_default_str();
  add_seed(syn, o);

  auto* mod = app.add_subcommand("modem", "BPSK modulate, optional AWGN, demodulate");
  add_common(mod, o, false);
  mod->add_option("--bits", o.bits, "Payload, e.g. 10110 or 1,0,1,1,0");
  mod->add_option("--random", o.random_bits, "Random payload of this many bits");
  mod->add_option("--sps", o.sps, "Samples per symbol")->capture_default_str();
  mod->add_option("--cycles", o.cycles, "Carrier cycles per symbol")->capture_default_str();
  mod->add_option("--phase", o.phase, "Carrier phase offset (radians)")->capture_default_str();
  mod->add_option("--snr", o.modem_snr, "SNR in dB, or 'clean'")->capture_default_str();
  mod->add_option("--waveform", o.waveform_path, "Write the channel waveform here");
  add_seed(mod, o);

  auto* feat = app.add_subcommand("features", "Extract a feature matrix from a dataset");
  add_common(feat, o, false);
  feat->add_option("--dataset", o.dataset_path, "Binary dataset from 'synth'")->required();
  feat->add_option("--kind", o.kind, "mspe, raw or spectrogram")->capture_default_str();
  add_grid(feat, o);
  feat->add_flag("--normalized", o.normalized, "MSPE cells as h instead of H");

  auto* cls = app.add_subcommand("classify", "Train/test split, classify, confusion matrix");
  add_common(cls, o, false);
  cls->add_option("--dataset", o.dataset_path, "Binary dataset from 'synth'");
  cls->add_option("--features", o.features_path, "Feature CSV from 'features'");
  cls->add_option("--kind", o.kind, "Feature kind")->capture_default_str();
  add_grid(cls, o);
  cls->add_flag("--normalized", o.normalized, "MSPE cells as h instead of H");
  cls->add_option("--method", o.method, "centroid, knn or knn:K")->capture_default_str();
  cls->add_option("--k", o.knn_k, "Neighbours for --method knn")->capture_default_str();
  cls->add_option("--test-fraction", o.test_fraction, "Test share per class")
      ->capture_default_str();
  cls->add_option("--standardize", o.standardize, "auto, on or off")->capture_default_str();
  add_seed(cls, o);

  auto* sw = app.add_subcommand("sweep", "Accuracy versus SNR for several feature kinds");
  add_common(sw, o, false);
  sw->add_option("--schemes", o.schemes, "Schemes")->delimiter(',')->capture_default_str();
  sw->add_option("--snrs", o.snrs, "SNR list (dB)")->delimiter(',')->capture_default_str();
  sw->add_option("--kinds", o.kinds, "Feature kinds")->delimiter(',')->capture_default_str();
  sw->add_option("--per-class", o.per_class, "Signals per scheme")->capture_default_str();
  sw->add_option("--t", o.t, "Signal length")->capture_default_str();
  add_grid(sw, o);
  sw->add_option("--method", o.method, "centroid, knn or knn:K")->capture_default_str();
  sw->add_option("--k", o.knn_k, "Neighbours for --method knn")->capture_default_str();
  sw->add_option("--test-fraction", o.test_fraction, "Test share per class")
      ->capture_default_str();
  sw->add_option("--standardize", o.standardize, "auto, on or off")->capture_default_str();
  add_seed(sw, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    const auto* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    if (name == "pattern") run_pattern(o);
    else if (name == "pe") run_pe(o);
    else if (name == "mspe") run_mspe(o);
    else if (name == "profile") run_profile(o);
    else if (name == "scan") run_scan(o);
    else if (name == "synth") run_synth(o);
    else if (name == "modem") run_modem(o);
    else if (name == "features") run_features(o);
    else if (name == "classify") run_classify(o);
    else if (name == "sweep") run_sweep(o);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
