#include "pelab/entropy.hpp"

#include <cmath>
#include <string>

#include "pelab/error.hpp"
#include "pelab/ordinal.hpp"

namespace pelab {

namespace {

std::string cell_name(int n, int tau) {
  return "(n=" + std::to_string(n) + ", tau=" + std::to_string(tau) + ")";
}

void check_scale(int n, int tau) {
  if (n < 1 || n > kMaxDimension)
    throw DomainError("dimension out of range at " + cell_name(n, tau));
  if (tau < 1) throw DomainError("delay must be >= 1 at " + cell_name(n, tau));
}

void check_finite(std::span<const double> x) {
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!std::isfinite(x[i]))
      throw DomainError("non-finite sample at index " + std::to_string(i));
}

void check_increasing(std::span<const int> v, const char* what) {
  if (v.empty()) throw DomainError(std::string(what) + " list is empty");
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] <= v[i - 1])
      throw DomainError(std::string(what) + " list must be strictly increasing");
}

// Distribution over a series already known to be finite and long enough.
PatternDistribution count_patterns(std::span<const double> x, int n, int tau) {
  PatternDistribution d(n, tau);
  const std::size_t windows = x.size() - required_length(n, tau) + 1;
  const std::uint64_t* fact = factorial_table();
  for (std::size_t k = 0; k < windows; ++k)
    d.add(lehmer_rank0(x.data() + k, n, static_cast<std::size_t>(tau), fact));
  return d;
}

}  // namespace

PatternDistribution::PatternDistribution(int n, int tau) : n_(n), tau_(tau) {
  check_scale(n, tau);
  if (n <= kDenseDimensionLimit) dense_.assign(factorial(n), 0);
}

PatternDistribution PatternDistribution::from_counts(
    int n, int tau, std::span<const std::uint64_t> counts) {
  PatternDistribution d(n, tau);
  if (counts.size() != d.pattern_count())
    throw DomainError("expected " + std::to_string(d.pattern_count()) +
                      " counts for n=" + std::to_string(n) + ", got " +
                      std::to_string(counts.size()));
  for (std::size_t r = 0; r < counts.size(); ++r)
    if (counts[r] != 0) d.add(r, counts[r]);
  return d;
}

std::uint64_t PatternDistribution::pattern_count() const {
  return factorial(n_);
}

void PatternDistribution::add(std::uint64_t rank0, std::uint64_t times) {
  if (n_ <= kDenseDimensionLimit)
    dense_[rank0] += times;
  else
    sparse_[rank0] += times;
  total_ += times;
}

std::uint64_t PatternDistribution::count(std::uint64_t rank0) const {
  if (n_ <= kDenseDimensionLimit) return rank0 < dense_.size() ? dense_[rank0] : 0;
  auto it = sparse_.find(rank0);
  return it == sparse_.end() ? 0 : it->second;
}

std::vector<std::uint64_t> PatternDistribution::counts() const {
  if (n_ <= kDenseDimensionLimit) return dense_;
  if (n_ > 10)
    throw DomainError("refusing to materialize " + std::to_string(n_) +
                      "! dense counts");
  std::vector<std::uint64_t> out(factorial(n_), 0);
  for (const auto& [r, c] : sparse_) out[r] = c;
  return out;
}

std::vector<double> PatternDistribution::probabilities() const {
  const auto c = counts();
  std::vector<double> p(c.size(), 0.0);
  if (total_ == 0) return p;
  for (std::size_t i = 0; i < c.size(); ++i)
    p[i] = static_cast<double>(c[i]) / static_cast<double>(total_);
  return p;
}

std::size_t required_length(int n, int tau) {
  return static_cast<std::size_t>(n - 1) * static_cast<std::size_t>(tau) + 1;
}

PatternDistribution distribution(std::span<const double> x, int n, int tau) {
  check_scale(n, tau);
  const std::size_t need = required_length(n, tau);
  if (x.size() < need)
    throw SignalTooShort("signal too short for " + cell_name(n, tau) +
                             ": need at least " + std::to_string(need) +
                             " samples, got " + std::to_string(x.size()),
                         need);
  check_finite(x);
  return count_patterns(x, n, tau);
}

double shannon_entropy_bits(std::span<const double> probabilities) {
  double h = 0.0;
  for (double p : probabilities)
    if (p > 0.0) h -= p * std::log2(p);
  return h;
}

double permutation_entropy(const PatternDistribution& d) {
  if (d.total() == 0) throw DomainError("entropy of an empty distribution");
  const double total = static_cast<double>(d.total());
  double h = 0.0;
  d.for_each_nonzero([&](std::uint64_t, std::uint64_t c) {
    const double p = static_cast<double>(c) / total;
    h -= p * std::log2(p);
  });
  // A single pattern yields -1*log2(1) = -0.0; report +0.
  return h + 0.0;
}

double normalized_pe(const PatternDistribution& d) {
  if (d.dimension() < 2)
    throw DomainError("normalized entropy undefined for n=1 (log2 1! = 0)");
  return permutation_entropy(d) /
         std::log2(static_cast<double>(d.pattern_count()));
}

void check_grid(std::size_t length, std::span<const int> dims,
                std::span<const int> delays, bool normalized) {
  check_increasing(dims, "dimension");
  check_increasing(delays, "delay");
  for (int n : dims) {
    for (int tau : delays) {
      check_scale(n, tau);
      if (normalized && n < 2)
        throw DomainError("normalized entropy undefined at " + cell_name(n, tau));
      const std::size_t need = required_length(n, tau);
      if (length < need)
        throw SignalTooShort("grid cell " + cell_name(n, tau) + " needs " +
                                 std::to_string(need) + " samples, got " +
                                 std::to_string(length),
                             need);
    }
  }
}

MspeMatrix mspe(std::span<const double> x, std::span<const int> dims,
                std::span<const int> delays, bool normalized) {
  check_grid(x.size(), dims, delays, normalized);
  check_finite(x);

  MspeMatrix m;
  m.dims.assign(dims.begin(), dims.end());
  m.delays.assign(delays.begin(), delays.end());
  m.normalized = normalized;
  m.values.assign(dims.size() * delays.size(), 0.0);

  const long rows = static_cast<long>(dims.size());
  const long cols = static_cast<long>(delays.size());
#pragma omp parallel for collapse(2) schedule(dynamic)
  for (long i = 0; i < rows; ++i) {
    for (long j = 0; j < cols; ++j) {
      const auto d = count_patterns(x, dims[i], delays[j]);
      m.values[i * cols + j] =
          normalized ? normalized_pe(d) : permutation_entropy(d);
    }
  }
  return m;
}

ScanResult scan(std::span<const double> x, std::span<const int> dims,
                std::span<const int> delays, double epsilon) {
  if (!std::isfinite(epsilon) || epsilon < 0.0)
    throw DomainError("epsilon must be a finite non-negative number");
  const MspeMatrix m = mspe(x, dims, delays, /*normalized=*/true);

  ScanResult out{};
  bool first = true;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const ScaleResult cell{m.dims[i], m.delays[j], m.at(i, j)};
      (cell.npe >= 1.0 - epsilon ? out.near_uniform : out.structured)
          .push_back(cell);
      if (first || cell.npe < out.argmin.npe) {
        out.argmin = cell;
        first = false;
      }
    }
  }
  return out;
}

}  // namespace pelab
