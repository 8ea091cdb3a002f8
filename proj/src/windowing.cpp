#include "pelab/windowing.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pelab/entropy.hpp"
#include "pelab/error.hpp"

namespace pelab {

CeilingMode parse_ceiling_mode(std::string_view name) {
  if (name == "figure") return CeilingMode::kFigure;
  if (name == "strict-footnote" || name == "strict")
    return CeilingMode::kStrictFootnote;
  throw DomainError("unknown ceiling mode '" + std::string(name) +
                    "' (expected figure or strict-footnote)");
}

std::string_view to_string(CeilingMode mode) {
  return mode == CeilingMode::kFigure ? "figure" : "strict-footnote";
}

std::size_t WindowSpec::step() const {
  if (length == 0) throw DomainError("window length k must be >= 1");
  if (!(overlap >= 0.0 && overlap < 1.0))
    throw DomainError("overlap alpha must lie in [0, 1), got " +
                      std::to_string(overlap));

  const double raw = (1.0 - overlap) * static_cast<double>(length);
  // (1 - 0.4) * 5 is not exactly 3 in binary; snap near-integers first.
  const double nearest = std::round(raw);
  const bool integral = std::abs(raw - nearest) <= 1e-9 * std::max(1.0, raw);
  double step;
  if (integral)
    step = mode == CeilingMode::kFigure ? nearest : nearest + 1.0;
  else
    step = std::ceil(raw);
  return step < 1.0 ? 1 : static_cast<std::size_t>(step);
}

std::vector<std::size_t> window_starts(std::size_t t, const WindowSpec& spec) {
  const std::size_t step = spec.step();
  if (spec.length > t)
    throw DomainError("window exceeds series: k=" + std::to_string(spec.length) +
                      " > t=" + std::to_string(t));
  std::vector<std::size_t> starts;
  for (std::size_t s = 1; s + spec.length - 1 <= t; s += step)
    starts.push_back(s);
  return starts;
}

std::vector<double> pe_profile(std::span<const double> x, int n, int tau,
                               const WindowSpec& spec) {
  if (n < 2) throw DomainError("profile needs n >= 2 for normalized entropy");
  if (tau < 1) throw DomainError("delay tau must be >= 1");
  const std::size_t need = required_length(n, tau);
  if (spec.length < need)
    throw SignalTooShort("window too short for (n=" + std::to_string(n) +
                             ", tau=" + std::to_string(tau) + "): k=" +
                             std::to_string(spec.length) + " < " +
                             std::to_string(need),
                         need);
  const auto starts = window_starts(x.size(), spec);
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!std::isfinite(x[i]))
      throw DomainError("non-finite sample at index " + std::to_string(i));

  std::vector<double> h(starts.size());
  const long count = static_cast<long>(starts.size());
#pragma omp parallel for schedule(static)
  for (long w = 0; w < count; ++w) {
    const auto window = x.subspan(starts[w] - 1, spec.length);
    h[w] = normalized_pe(distribution(window, n, tau));
  }
  return h;
}

}  // namespace pelab
