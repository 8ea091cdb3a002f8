#pragma once

// File formats.
//
// Series CSV: numbers separated by commas and/or newlines (one sample per
// line, or a single comma-separated line). Blank lines and lines starting
// with '#' are ignored.
//
// Dataset binary (little-endian throughout):
//   magic "PELABDS\0" (8 bytes), u32 format version (= 1),
//   u64 t, u32 scheme count, per scheme u32 byte length + ASCII name,
//   u8 has_snr, f64 snr_db (0 when clean), u64 seed, u64 record count,
//   then per record: u32 label id, t x f64 samples.
//
// Dataset CSV: one row per signal, scheme name then t samples.
// Feature CSV: header "label,f_0,...,f_{d-1}", one row per signal.
// JSON documents carry a "spec_version" field.

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "pelab/classify.hpp"
#include "pelab/entropy.hpp"
#include "pelab/features.hpp"
#include "pelab/synth.hpp"
#include "pelab/windowing.hpp"

namespace pelab::io {

inline constexpr std::string_view kSpecVersion = "1.0";
inline constexpr std::uint32_t kDatasetFormatVersion = 1;

// Throws ConfigError on an unparseable token.
std::vector<double> parse_series(std::string_view text);
std::vector<double> read_series(const std::string& path);
void write_series(std::ostream& os, std::span<const double> x);

void write_dataset(std::ostream& os, const Dataset& ds);
Dataset read_dataset(std::istream& is);
void save_dataset(const std::string& path, const Dataset& ds);
Dataset load_dataset(const std::string& path);
void write_dataset_csv(std::ostream& os, const Dataset& ds);

void write_features_csv(std::ostream& os, const FeatureMatrix& fm);
void write_features_json(std::ostream& os, const FeatureMatrix& fm);
// Reads the CSV written above. Label names are collected in order of first
// appearance. Throws ConfigError on ragged rows or bad numbers.
FeatureMatrix read_features_csv(std::istream& is);

void write_mspe_csv(std::ostream& os, const MspeMatrix& m);
void write_mspe_json(std::ostream& os, const MspeMatrix& m);

void write_confusion_csv(std::ostream& os, const ConfusionMatrix& cm);
void write_confusion_json(std::ostream& os, const ConfusionMatrix& cm);

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

// Shortest representation that round-trips a double.
std::string format_double(double v);

}  // namespace pelab::io
