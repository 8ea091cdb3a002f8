#include "pelab/io.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "pelab/error.hpp"

namespace pelab::io {

namespace {

constexpr char kMagic[8] = {'P', 'E', 'L', 'A', 'B', 'D', 'S', '\0'};

template <typename T>
void put_le(std::ostream& os, T value) {
  static_assert(std::is_unsigned_v<T>);
  char bytes[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i)
    bytes[i] = static_cast<char>((value >> (8 * i)) & 0xff);
  os.write(bytes, sizeof(T));
}

void put_f64(std::ostream& os, double v) { put_le(os, std::bit_cast<std::uint64_t>(v)); }

template <typename T>
T get_le(std::istream& is) {
  unsigned char bytes[sizeof(T)];
  if (!is.read(reinterpret_cast<char*>(bytes), sizeof(T)))
    throw ConfigError("truncated dataset file");
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i)
    value |= static_cast<T>(bytes[i]) << (8 * i);
  return value;
}

double get_f64(std::istream& is) { return std::bit_cast<double>(get_le<std::uint64_t>(is)); }

double parse_number(std::string_view token) {
  // from_chars rejects a leading '+'.
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size())
    throw ConfigError("cannot parse number '" + std::string(token) + "'");
  return v;
}

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const auto comma = line.find(',', pos);
    out.push_back(trim(line.substr(pos, comma - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::ofstream open_out(const std::string& path, std::ios::openmode mode = {}) {
  std::ofstream os(path, std::ios::out | mode);
  if (!os) throw ConfigError("cannot open '" + path + "' for writing");
  return os;
}

std::ifstream open_in(const std::string& path, std::ios::openmode mode = {}) {
  std::ifstream is(path, std::ios::in | mode);
  if (!is) throw ConfigError("cannot open '" + path + "'");
  return is;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::vector<double> parse_series(std::string_view text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const auto line = trim(text.substr(pos, nl - pos));
    pos = nl + 1;
    if (line.empty() || line.front() == '#') continue;
    for (auto token : split_commas(line)) {
      if (token.empty()) continue;
      out.push_back(parse_number(token));
    }
  }
  return out;
}

std::vector<double> read_series(const std::string& path) {
  auto is = open_in(path);
  std::stringstream buf;
  buf << is.rdbuf();
  return parse_series(buf.str());
}

void write_series(std::ostream& os, std::span<const double> x) {
  for (double v : x) os << format_double(v) << '\n';
}

void write_dataset(std::ostream& os, const Dataset& ds) {
  os.write(kMagic, sizeof(kMagic));
  put_le<std::uint32_t>(os, kDatasetFormatVersion);
  put_le<std::uint64_t>(os, ds.length);
  put_le<std::uint32_t>(os, static_cast<std::uint32_t>(ds.schemes.size()));
  for (Scheme s : ds.schemes) {
    const auto name = scheme_name(s);
    put_le<std::uint32_t>(os, static_cast<std::uint32_t>(name.size()));
    os.write(name.data(), static_cast<std::streamsize>(name.size()));
  }
  put_le<std::uint8_t>(os, ds.snr_db ? 1 : 0);
  put_f64(os, ds.snr_db.value_or(0.0));
  put_le<std::uint64_t>(os, ds.seed);
  put_le<std::uint64_t>(os, ds.signals.size());
  for (const auto& sig : ds.signals) {
    if (sig.samples.size() != ds.length)
      throw ConfigError("signal length does not match dataset length");
    put_le<std::uint32_t>(os, static_cast<std::uint32_t>(sig.label));
    for (double v : sig.samples) put_f64(os, v);
  }
  if (!os) throw ConfigError("failed writing dataset");
}

Dataset read_dataset(std::istream& is) {
  char magic[sizeof(kMagic)];
  if (!is.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw ConfigError("not a dataset file (bad magic)");
  const auto version = get_le<std::uint32_t>(is);
  if (version != kDatasetFormatVersion)
    throw ConfigError("unsupported dataset format version " + std::to_string(version));

  Dataset ds;
  ds.length = get_le<std::uint64_t>(is);
  const auto n_schemes = get_le<std::uint32_t>(is);
  for (std::uint32_t i = 0; i < n_schemes; ++i) {
    const auto len = get_le<std::uint32_t>(is);
    if (len > 64) throw ConfigError("implausible scheme name length");
    std::string name(len, '\0');
    if (!is.read(name.data(), len)) throw ConfigError("truncated dataset file");
    ds.schemes.push_back(parse_scheme(name));
  }
  const bool has_snr = get_le<std::uint8_t>(is) != 0;
  const double snr = get_f64(is);
  if (has_snr) ds.snr_db = snr;
  ds.seed = get_le<std::uint64_t>(is);
  const auto records = get_le<std::uint64_t>(is);
  ds.signals.reserve(records);
  for (std::uint64_t r = 0; r < records; ++r) {
    LabeledSignal sig;
    sig.label = static_cast<int>(get_le<std::uint32_t>(is));
    if (sig.label < 0 || static_cast<std::size_t>(sig.label) >= ds.schemes.size())
      throw ConfigError("record " + std::to_string(r) + " has label outside scheme list");
    sig.samples.resize(ds.length);
    for (auto& v : sig.samples) v = get_f64(is);
    sig.snr_db = ds.snr_db;
    ds.signals.push_back(std::move(sig));
  }
  return ds;
}

void save_dataset(const std::string& path, const Dataset& ds) {
  auto os = open_out(path, std::ios::binary);
  write_dataset(os, ds);
}

Dataset load_dataset(const std::string& path) {
  auto is = open_in(path, std::ios::binary);
  return read_dataset(is);
}

void write_dataset_csv(std::ostream& os, const Dataset& ds) {
  for (const auto& sig : ds.signals) {
    os << scheme_name(ds.schemes[sig.label]);
    for (double v : sig.samples) os << ',' << format_double(v);
    os << '\n';
  }
}

void write_features_csv(std::ostream& os, const FeatureMatrix& fm) {
  os << "label";
  for (std::size_t j = 0; j < fm.cols; ++j) os << ",f_" << j;
  os << '\n';
  for (std::size_t i = 0; i < fm.rows; ++i) {
    const int l = fm.labels[i];
    if (l >= 0 && static_cast<std::size_t>(l) < fm.label_names.size())
      os << fm.label_names[l];
    else
      os << l;
    for (double v : fm.row(i)) os << ',' << format_double(v);
    os << '\n';
  }
}

void write_features_json(std::ostream& os, const FeatureMatrix& fm) {
  nlohmann::ordered_json j;
  j["spec_version"] = kSpecVersion;
  j["kind"] = feature_kind_name(fm.kind);
  nlohmann::ordered_json params;
  if (fm.kind == FeatureKind::kMspe) {
    params["dims"] = fm.grid.dims;
    params["delays"] = fm.grid.delays;
    params["normalized"] = fm.grid.normalized;
    params["windows"] = {"full", "half", "half", "quarter", "quarter", "quarter",
                         "quarter"};
  } else if (fm.kind == FeatureKind::kSpectrogram) {
    params["window_lengths"] = {256, 128, 64};
    params["window_counts"] = {8, 16, 32};
    params["overlap"] = 0.0;
    params["magnitude"] = "one-sided";
  }
  j["parameters"] = params;
  j["labels"] = fm.label_names;
  j["dimension"] = fm.cols;
  auto& rows = j["rows"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < fm.rows; ++i) {
    nlohmann::ordered_json row;
    row["label"] = fm.labels[i];
    const auto r = fm.row(i);
    row["values"] = std::vector<double>(r.begin(), r.end());
    rows.push_back(std::move(row));
  }
  os << j.dump(2) << '\n';
}

FeatureMatrix read_features_csv(std::istream& is) {
  FeatureMatrix fm;
  std::string line;
  if (!std::getline(is, line)) throw ConfigError("empty feature file");
  const auto header = split_commas(line);
  if (header.empty() || header.front() != "label")
    throw ConfigError("feature CSV must start with a 'label' column");
  fm.cols = header.size() - 1;
  std::map<std::string, int, std::less<>> ids;
  while (std::getline(is, line)) {
    if (trim(line).empty()) continue;
    const auto cells = split_commas(line);
    if (cells.size() != fm.cols + 1)
      throw ConfigError("feature row " + std::to_string(fm.rows + 1) + " has " +
                        std::to_string(cells.size() - 1) + " values, expected " +
                        std::to_string(fm.cols));
    std::string name(cells.front());
    auto it = ids.find(name);
    if (it == ids.end()) {
      it = ids.emplace(name, static_cast<int>(fm.label_names.size())).first;
      fm.label_names.push_back(name);
    }
    fm.labels.push_back(it->second);
    for (std::size_t j = 1; j < cells.size(); ++j)
      fm.data.push_back(parse_number(cells[j]));
    ++fm.rows;
  }
  return fm;
}

void write_mspe_csv(std::ostream& os, const MspeMatrix& m) {
  os << "n";
  for (int tau : m.delays) os << ",tau=" << tau;
  os << '\n';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    os << m.dims[i];
    for (std::size_t j = 0; j < m.cols(); ++j) os << ',' << format_double(m.at(i, j));
    os << '\n';
  }
}

void write_mspe_json(std::ostream& os, const MspeMatrix& m) {
  nlohmann::ordered_json j;
  j["spec_version"] = kSpecVersion;
  j["dims"] = m.dims;
  j["delays"] = m.delays;
  j["normalized"] = m.normalized;
  auto& values = j["values"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    std::vector<double> row(m.values.begin() + i * m.cols(),
                            m.values.begin() + (i + 1) * m.cols());
    values.push_back(row);
  }
  os << j.dump(2) << '\n';
}

void write_confusion_csv(std::ostream& os, const ConfusionMatrix& cm) {
  os << "true\\predicted";
  for (const auto& l : cm.labels()) os << ',' << l;
  os << '\n';
  for (std::size_t i = 0; i < cm.classes(); ++i) {
    os << cm.labels()[i];
    for (std::size_t j = 0; j < cm.classes(); ++j) os << ',' << cm.at(i, j);
    os << '\n';
  }
}

void write_confusion_json(std::ostream& os, const ConfusionMatrix& cm) {
  nlohmann::ordered_json j;
  j["spec_version"] = kSpecVersion;
  j["labels"] = cm.labels();
  auto& counts = j["counts"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < cm.classes(); ++i) {
    std::vector<std::uint64_t> row;
    for (std::size_t k = 0; k < cm.classes(); ++k) row.push_back(cm.at(i, k));
    counts.push_back(row);
  }
  j["total"] = cm.total();
  j["accuracy"] = cm.accuracy();
  os << j.dump(2) << '\n';
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "snr,kind,accuracy,seed\n";
  for (const auto& r : rows)
    os << format_double(r.snr_db) << ',' << feature_kind_name(r.kind) << ','
       << format_double(r.accuracy) << ',' << r.seed << '\n';
}

}  // namespace pelab::io
