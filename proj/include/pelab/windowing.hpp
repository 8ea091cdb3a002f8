#pragma once

// Overlapping windows and per-window entropy profiles.
//
// Windows have fixed length k and start at s_1 = 1, s_j = s_{j-1} + step,
// where step is the ceiling of (1 - alpha) * k. The last window is the one
// with s_l + k - 1 <= t; trailing samples that do not fill a window are
// dropped. Start indices are 1-based.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace pelab {

enum class CeilingMode {
  // Ordinary ceiling: an integral (1 - alpha) * k is kept as is. Windows of
  // length 5 with alpha = 0.4 overlap by two samples.
  kFigure,
  // Smallest integer strictly greater than (1 - alpha) * k: an integral
  // value is bumped by one.
  kStrictFootnote,
};

CeilingMode parse_ceiling_mode(std::string_view name);
std::string_view to_string(CeilingMode mode);

struct WindowSpec {
  std::size_t length = 0;  // k
  double overlap = 0.0;    // alpha in [0, 1)
  CeilingMode mode = CeilingMode::kFigure;

  // Distance between consecutive starts, always >= 1. Throws DomainError
  // for alpha outside [0, 1) or k = 0.
  std::size_t step() const;
};

// 1-based start indices s_1..s_l. Throws DomainError if k > t.
std::vector<std::size_t> window_starts(std::size_t t, const WindowSpec& spec);

// Normalized permutation entropy of each window, evaluated in parallel.
// Throws DomainError when k < (n-1)*tau + 1.
std::vector<double> pe_profile(std::span<const double> x, int n, int tau,
                               const WindowSpec& spec);

}  // namespace pelab
