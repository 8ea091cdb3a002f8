#include "pelab/reference.hpp"

#include <algorithm>
#include <limits>

#include "pelab/error.hpp"
#include "pelab/ordinal.hpp"

namespace pelab::reference {

PatternDistribution distribution(std::span<const double> x, int n, int tau) {
  PatternDistribution d(n, tau);
  const std::size_t need = required_length(n, tau);
  if (x.size() < need)
    throw SignalTooShort("signal too short", need);
  for (std::size_t k = 1; k + need - 1 <= x.size(); ++k)
    d.add(lex_rank(pattern(delayed_subsequence(x, k, n, tau))) - 1);
  return d;
}

MspeMatrix mspe(std::span<const double> x, std::span<const int> dims,
                std::span<const int> delays, bool normalized) {
  check_grid(x.size(), dims, delays, normalized);
  MspeMatrix m;
  m.dims.assign(dims.begin(), dims.end());
  m.delays.assign(delays.begin(), delays.end());
  m.normalized = normalized;
  for (int n : dims)
    for (int tau : delays) {
      const auto d = distribution(x, n, tau);
      m.values.push_back(normalized ? normalized_pe(d) : permutation_entropy(d));
    }
  return m;
}

std::vector<double> pe_profile(std::span<const double> x, int n, int tau,
                               const WindowSpec& spec) {
  if (spec.length < required_length(n, tau))
    throw SignalTooShort("window too short", required_length(n, tau));
  std::vector<double> h;
  for (std::size_t s : window_starts(x.size(), spec))
    h.push_back(normalized_pe(distribution(x.subspan(s - 1, spec.length), n, tau)));
  return h;
}

FeatureMatrix extract_features(const Dataset& ds, FeatureKind kind,
                               const MspeGrid& grid) {
  FeatureMatrix fm;
  fm.kind = kind;
  fm.rows = ds.signals.size();
  fm.labels = ds.labels();
  fm.label_names = ds.label_names();
  fm.grid = grid;
  for (const auto& sig : ds.signals) {
    std::vector<double> v;
    switch (kind) {
      case FeatureKind::kMspe: {
        // Same window layout as mspe_features, built from the reference MSPE.
        const std::size_t t = sig.samples.size();
        const std::span<const double> x = sig.samples;
        for (std::size_t parts : {1, 2, 4})
          for (std::size_t w = 0; w < parts; ++w) {
            const auto m = mspe(x.subspan(w * (t / parts), t / parts), grid.dims,
                                grid.delays, grid.normalized);
            v.insert(v.end(), m.values.begin(), m.values.end());
          }
        break;
      }
      case FeatureKind::kRaw: v = raw_features(sig.samples).values; break;
      case FeatureKind::kSpectrogram: v = spectrogram_features(sig.samples).values; break;
    }
    fm.cols = v.size();
    fm.data.insert(fm.data.end(), v.begin(), v.end());
  }
  return fm;
}

std::vector<int> predict(const FeatureMatrix& train, const FeatureMatrix& test,
                         const Method& method) {
  if (train.cols != test.cols) throw DomainError("feature dimension mismatch");
  int max_label = 0;
  for (int l : train.labels) max_label = std::max(max_label, l);
  const std::size_t classes = std::max<std::size_t>(train.label_names.size(),
                                                    static_cast<std::size_t>(max_label) + 1);
  auto dist2 = [](std::span<const double> a, std::span<const double> b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] - b[i]) * (a[i] - b[i]);
    return d;
  };

  std::vector<int> out;
  if (method.kind == Method::Kind::kCentroid) {
    std::vector<std::vector<double>> centroids(classes, std::vector<double>(train.cols, 0.0));
    std::vector<double> members(classes, 0.0);
    for (std::size_t r = 0; r < train.rows; ++r) {
      for (std::size_t j = 0; j < train.cols; ++j)
        centroids[train.labels[r]][j] += train.row(r)[j];
      members[train.labels[r]] += 1.0;
    }
    for (std::size_t c = 0; c < classes; ++c) {
      if (members[c] == 0.0) throw DomainError("empty training class");
      for (auto& v : centroids[c]) v /= members[c];
    }
    for (std::size_t i = 0; i < test.rows; ++i) {
      int best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < classes; ++c) {
        const double d = dist2(test.row(i), centroids[c]);
        if (d < best_d) best_d = d, best = static_cast<int>(c);
      }
      out.push_back(best);
    }
    return out;
  }

  if (method.k < 1 || static_cast<std::size_t>(method.k) > train.rows)
    throw DomainError("k out of range");
  for (std::size_t i = 0; i < test.rows; ++i) {
    std::vector<std::pair<double, std::size_t>> dist;
    for (std::size_t r = 0; r < train.rows; ++r)
      dist.emplace_back(dist2(test.row(i), train.row(r)), r);
    std::sort(dist.begin(), dist.end());
    std::vector<int> votes(classes, 0);
    for (int j = 0; j < method.k; ++j) ++votes[train.labels[dist[j].second]];
    int best = 0;
    for (std::size_t c = 1; c < classes; ++c)
      if (votes[c] > votes[best]) best = static_cast<int>(c);
    out.push_back(best);
  }
  return out;
}

}  // namespace pelab::reference
