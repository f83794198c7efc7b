// Serial reference vs OpenMP kernel for feature extraction and batch scoring.
#include <benchmark/benchmark.h>

#include <omp.h>

#include <map>

#include "actdis/features.hpp"
#include "actdis/ingest.hpp"
#include "actdis/log.hpp"
#include "actdis/svm.hpp"
#include "actdis/synth.hpp"

using namespace actdis;

namespace {

struct Corpus {
  SynthOutput data;
  std::vector<Window> windows;
  std::vector<WindowFeatures> features;
  FeatureMatrix matrix;
  SvmModel model;
};

const Corpus& corpus(int days) {
  static std::map<int, Corpus> cache;
  auto it = cache.find(days);
  if (it != cache.end()) return it->second;
  set_warning_sink([](std::string_view) {});
  Corpus c;
  SynthConfig cfg = SynthConfig::standard();
  cfg.days = days;
  c.data = generate(cfg);
  c.windows = hour_windows(c.data.load, &c.data.temperature);
  c.features = extract_features(c.data.load, c.windows, &c.data.temperature);
  std::vector<Label> labels;
  for (const auto& w : c.windows)
    labels.push_back(c.data.labels.back().labels[static_cast<std::size_t>((w.start - c.data.load.start) / std::chrono::hours(1))]);
  c.matrix = assemble(c.features, labels, Method::M4);
  c.model = train(standardize(c.matrix));
  return cache.emplace(days, std::move(c)).first->second;
}

void BM_ExtractFeaturesSerial(benchmark::State& state) {
  const auto& c = corpus(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(extract_features_serial(c.data.load, c.windows, &c.data.temperature));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(c.windows.size()));
}

void BM_ExtractFeaturesOpenMP(benchmark::State& state) {
  const auto& c = corpus(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(extract_features(c.data.load, c.windows, &c.data.temperature));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(c.windows.size()));
  state.counters["threads"] = omp_get_max_threads();
}

void BM_DecisionValuesSerial(benchmark::State& state) {
  const auto& c = corpus(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(decision_values_serial(c.model, c.matrix));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(c.matrix.rows()));
}

void BM_DecisionValuesOpenMP(benchmark::State& state) {
  const auto& c = corpus(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(decision_values(c.model, c.matrix));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(c.matrix.rows()));
  state.counters["threads"] = omp_get_max_threads();
}

}  // namespace

BENCHMARK(BM_ExtractFeaturesSerial)->Arg(60)->Arg(365)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExtractFeaturesOpenMP)->Arg(60)->Arg(365)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DecisionValuesSerial)->Arg(60)->Arg(365)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_DecisionValuesOpenMP)->Arg(60)->Arg(365)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
