// OpenMP kernels against their serial references. Thread count follows
// OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "pelab/classify.hpp"
#include "pelab/entropy.hpp"
#include "pelab/features.hpp"
#include "pelab/reference.hpp"
#include "pelab/synth.hpp"

namespace {

using namespace pelab;

const std::vector<Scheme> kSchemes(std::begin(kAllSchemes), std::end(kAllSchemes));

std::vector<double> noise(std::size_t t) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  std::vector<double> x(t);
  for (auto& v : x) v = g(rng);
  return x;
}

const Dataset& dataset() {
  static const Dataset ds = make_dataset(kSchemes, 20, 2048, 10.0, 7);
  return ds;
}

struct Problem {
  FeatureMatrix train, test;
};

const Problem& problem() {
  static const Problem p = [] {
    const auto& ds = dataset();
    const auto fm = extract_features(ds, FeatureKind::kMspe);
    const auto split = stratified_split(ds.labels(), 0.3, 7);
    return Problem{subset(fm, split.train), subset(fm, split.test)};
  }();
  return p;
}

const std::vector<int> kDims{3, 4, 5, 6, 7};
const std::vector<int> kDelays{1, 5, 10, 15, 20, 30, 40, 50};

void BM_Mspe(benchmark::State& state) {
  const auto x = noise(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(mspe(x, kDims, kDelays, true));
}

void BM_MspeReference(benchmark::State& state) {
  const auto x = noise(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(reference::mspe(x, kDims, kDelays, true));
}

void BM_ExtractMspe(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(extract_features(dataset(), FeatureKind::kMspe));
}

void BM_ExtractMspeReference(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(reference::extract_features(dataset(), FeatureKind::kMspe));
}

void BM_PredictKnn(benchmark::State& state) {
  const auto& p = problem();
  for (auto _ : state) benchmark::DoNotOptimize(predict(p.train, p.test, Method::knn(5)));
}

void BM_PredictKnnReference(benchmark::State& state) {
  const auto& p = problem();
  for (auto _ : state)
    benchmark::DoNotOptimize(reference::predict(p.train, p.test, Method::knn(5)));
}

}  // namespace

BENCHMARK(BM_Mspe)->Arg(2048)->Arg(65536)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MspeReference)->Arg(2048)->Arg(65536)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExtractMspe)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExtractMspeReference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PredictKnn)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_PredictKnnReference)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
