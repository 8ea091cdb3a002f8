#pragma once

// Permutation distributions and the entropies built on them. All entropies
// are in bits; 0 * log2(0) is taken as 0.

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

namespace pelab {

// Dimensions up to this value keep dense count arrays (7! = 5040 cells);
// larger ones use a sparse rank -> count map.
inline constexpr int kDenseDimensionLimit = 7;

// Counts of each ordinal pattern (indexed by 0-based lex rank) over all
// delayed subsequences of a series.
class PatternDistribution {
 public:
  // Empty distribution over the n! patterns of dimension n.
  PatternDistribution(int n, int tau);

  // From explicit dense counts; counts.size() must equal n!.
  static PatternDistribution from_counts(int n, int tau,
                                         std::span<const std::uint64_t> counts);

  int dimension() const { return n_; }
  int delay() const { return tau_; }
  std::uint64_t total() const { return total_; }
  std::uint64_t pattern_count() const;  // n!
  bool is_dense() const { return n_ <= kDenseDimensionLimit; }

  // rank0 is the 0-based lex rank.
  void add(std::uint64_t rank0, std::uint64_t times = 1);
  std::uint64_t count(std::uint64_t rank0) const;

  // Dense count vector of length n!. Throws DomainError for sparse
  // dimensions where n! would not be reasonable to materialize (n > 10).
  std::vector<std::uint64_t> counts() const;
  std::vector<double> probabilities() const;

  // Visit every (rank0, count) with count > 0 in increasing rank order.
  template <typename F>
  void for_each_nonzero(F&& f) const {
    if (n_ <= kDenseDimensionLimit) {
      for (std::size_t r = 0; r < dense_.size(); ++r)
        if (dense_[r] != 0) f(static_cast<std::uint64_t>(r), dense_[r]);
    } else {
      for (const auto& [r, c] : sparse_) f(r, c);
    }
  }

  bool operator==(const PatternDistribution&) const = default;

 private:
  int n_;
  int tau_;
  std::uint64_t total_ = 0;
  std::vector<std::uint64_t> dense_;
  std::map<std::uint64_t, std::uint64_t> sparse_;
};

// Minimum series length for which the (n, tau) distribution is defined.
std::size_t required_length(int n, int tau);

// Pattern distribution of x at (n, tau). Throws SignalTooShort if
// x.size() < (n-1)*tau + 1 and DomainError on non-finite samples.
PatternDistribution distribution(std::span<const double> x, int n, int tau);

// Shannon entropy (bits) of a probability vector.
double shannon_entropy_bits(std::span<const double> probabilities);

double permutation_entropy(const PatternDistribution& d);

// H / log2(n!). Throws DomainError for n = 1.
double normalized_pe(const PatternDistribution& d);

struct MspeMatrix {
  std::vector<int> dims;
  std::vector<int> delays;
  // Row-major: values[i * delays.size() + j] is the cell (dims[i], delays[j]).
  std::vector<double> values;
  bool normalized = false;

  std::size_t rows() const { return dims.size(); }
  std::size_t cols() const { return delays.size(); }
  double at(std::size_t i, std::size_t j) const {
    return values[i * delays.size() + j];
  }
};

// Validates a (dims, delays) grid against a series length: both lists
// non-empty and strictly increasing, every dimension in [1, kMaxDimension]
// (>= 2 when normalized), and every cell feasible. Errors name the
// offending (n, tau) pair.
void check_grid(std::size_t length, std::span<const int> dims,
                std::span<const int> delays, bool normalized);

// Entropy of every (n, tau) cell. Cells are evaluated in parallel.
MspeMatrix mspe(std::span<const double> x, std::span<const int> dims,
                std::span<const int> delays, bool normalized);

struct ScaleResult {
  int n;
  int tau;
  double npe;
};

struct ScanResult {
  std::vector<ScaleResult> near_uniform;  // NPE >= 1 - epsilon
  std::vector<ScaleResult> structured;    // NPE < 1 - epsilon
  ScaleResult argmin;                     // smallest n, then tau, on ties
};

ScanResult scan(std::span<const double> x, std::span<const int> dims,
                std::span<const int> delays, double epsilon);

}  // namespace pelab
