#pragma once

// Serial reference implementations of the parallel kernels. They follow the
// definitions step by step (materialize each subsequence, rank it, look up
// its lexicographic index) and exist to cross-check and benchmark the
// OpenMP paths.

#include <span>
#include <vector>

#include "pelab/classify.hpp"
#include "pelab/entropy.hpp"
#include "pelab/features.hpp"
#include "pelab/windowing.hpp"

namespace pelab::reference {

PatternDistribution distribution(std::span<const double> x, int n, int tau);

MspeMatrix mspe(std::span<const double> x, std::span<const int> dims,
                std::span<const int> delays, bool normalized);

std::vector<double> pe_profile(std::span<const double> x, int n, int tau,
                               const WindowSpec& spec);

FeatureMatrix extract_features(const Dataset& ds, FeatureKind kind,
                               const MspeGrid& grid = {});

std::vector<int> predict(const FeatureMatrix& train, const FeatureMatrix& test,
                         const Method& method);

}  // namespace pelab::reference
