#pragma once

// Ordinal (permutation) patterns of real-valued sequences.
//
// A pattern is stored as a rank sequence: symbols[i] is the 1-based rank
// of x[i] within x. Equal values are ranked by order of appearance, so the
// earlier of two ties gets the smaller rank.
//
// Patterns are enumerated lexicographically; lex_rank/lex_unrank use
// 1-based ranks in {1..n!}.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace pelab {

// Largest pattern dimension supported; 12! still fits in 32 bits and every
// intermediate product fits in 64.
inline constexpr int kMaxDimension = 12;

struct OrdinalPattern {
  std::vector<int> symbols;

  int dimension() const { return static_cast<int>(symbols.size()); }
  bool operator==(const OrdinalPattern&) const = default;
};

// n! for 0 <= n <= kMaxDimension.
std::uint64_t factorial(int n);

// {0!, 1!, ..., kMaxDimension!}.
const std::uint64_t* factorial_table();

// Rank sequence of x with stable tie-breaking. Throws DomainError on empty
// input or any non-finite entry.
OrdinalPattern pattern(std::span<const double> x);

// 1-based lexicographic position of p among all permutations of {1..n}.
// Throws DomainError if p is not a permutation or n > kMaxDimension.
std::uint64_t lex_rank(const OrdinalPattern& p);

// Inverse of lex_rank. Throws DomainError unless 1 <= rank <= n!.
OrdinalPattern lex_unrank(std::uint64_t rank, int n);

// (x_k, x_{k+tau}, ..., x_{k+(n-1)tau}) with k 1-based.
// Throws SignalTooShort if the subsequence does not fit in x.
std::vector<double> delayed_subsequence(std::span<const double> x,
                                        std::size_t k, int n, int tau);

// Hot-path form: 0-based lexicographic rank of the pattern of
// (x[start], x[start+tau], ..., x[start+(n-1)tau]), computed from the
// Lehmer code directly without materializing the pattern. No validation.
inline std::uint64_t lehmer_rank0(const double* x, int n, std::size_t tau,
                                  const std::uint64_t* factorials) {
  std::uint64_t rank = 0;
  for (int i = 0; i < n - 1; ++i) {
    const double xi = x[static_cast<std::size_t>(i) * tau];
    std::uint64_t smaller = 0;
    // Under stable tie-breaking a later equal value ranks higher, so only
    // strictly smaller successors count.
    for (int j = i + 1; j < n; ++j)
      smaller += x[static_cast<std::size_t>(j) * tau] < xi;
    rank += smaller * factorials[n - 1 - i];
  }
  return rank;
}

}  // namespace pelab
