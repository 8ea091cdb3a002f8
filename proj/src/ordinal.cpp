#include "pelab/ordinal.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>

#include "pelab/error.hpp"

namespace pelab {

namespace {

constexpr std::array<std::uint64_t, kMaxDimension + 1> kFactorials = [] {
  std::array<std::uint64_t, kMaxDimension + 1> f{};
  f[0] = 1;
  for (int i = 1; i <= kMaxDimension; ++i) f[i] = f[i - 1] * i;
  return f;
}();

void check_dimension(int n) {
  if (n < 1 || n > kMaxDimension)
    throw DomainError("pattern dimension n=" + std::to_string(n) +
                      " outside [1, " + std::to_string(kMaxDimension) + "]");
}

}  // namespace

std::uint64_t factorial(int n) {
  if (n < 0 || n > kMaxDimension)
    throw DomainError("factorial argument " + std::to_string(n) +
                      " out of range");
  return kFactorials[n];
}

const std::uint64_t* factorial_table() { return kFactorials.data(); }

OrdinalPattern pattern(std::span<const double> x) {
  if (x.empty()) throw DomainError("pattern of an empty sequence");
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!std::isfinite(x[i]))
      throw DomainError("non-finite value at index " + std::to_string(i));

  std::vector<int> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return x[a] < x[b]; });

  OrdinalPattern p;
  p.symbols.resize(x.size());
  for (std::size_t r = 0; r < order.size(); ++r)
    p.symbols[order[r]] = static_cast<int>(r) + 1;
  return p;
}

std::uint64_t lex_rank(const OrdinalPattern& p) {
  const int n = p.dimension();
  check_dimension(n);
  std::array<bool, kMaxDimension + 1> seen{};
  for (int s : p.symbols) {
    if (s < 1 || s > n || seen[s])
      throw DomainError("not a permutation of {1.." + std::to_string(n) +
                        "}: bad symbol " + std::to_string(s));
    seen[s] = true;
  }

  std::uint64_t rank = 0;
  for (int i = 0; i < n; ++i) {
    std::uint64_t smaller = 0;
    for (int j = i + 1; j < n; ++j) smaller += p.symbols[j] < p.symbols[i];
    rank += smaller * kFactorials[n - 1 - i];
  }
  return rank + 1;
}

OrdinalPattern lex_unrank(std::uint64_t rank, int n) {
  check_dimension(n);
  if (rank < 1 || rank > kFactorials[n])
    throw DomainError("rank " + std::to_string(rank) + " outside [1, " +
                      std::to_string(kFactorials[n]) + "]");

  std::vector<int> pool(n);
  std::iota(pool.begin(), pool.end(), 1);
  std::uint64_t rest = rank - 1;
  OrdinalPattern p;
  p.symbols.reserve(n);
  for (int i = n - 1; i >= 0; --i) {
    const std::uint64_t digit = rest / kFactorials[i];
    rest %= kFactorials[i];
    p.symbols.push_back(pool[digit]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(digit));
  }
  return p;
}

std::vector<double> delayed_subsequence(std::span<const double> x,
                                        std::size_t k, int n, int tau) {
  if (n < 1 || tau < 1)
    throw DomainError("dimension and delay must be >= 1 (n=" +
                      std::to_string(n) + ", tau=" + std::to_string(tau) + ")");
  const std::size_t span_len = static_cast<std::size_t>(n - 1) * tau + 1;
  if (x.size() < span_len)
    throw SignalTooShort("signal too short: (n=" + std::to_string(n) +
                             ", tau=" + std::to_string(tau) + ") needs " +
                             std::to_string(span_len) + " samples, got " +
                             std::to_string(x.size()),
                         span_len);
  if (k < 1 || k > x.size() - span_len + 1)
    throw SignalTooShort("start index k=" + std::to_string(k) +
                             " outside [1, " +
                             std::to_string(x.size() - span_len + 1) + "]",
                         k - 1 + span_len);

  std::vector<double> out(n);
  for (int i = 0; i < n; ++i)
    out[i] = x[k - 1 + static_cast<std::size_t>(i) * tau];
  return out;
}

}  // namespace pelab
