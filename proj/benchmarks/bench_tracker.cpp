#include <benchmark/benchmark.h>

#include "anchortrack/global_models.hpp"
#include "anchortrack/keypoints.hpp"
#include "anchortrack/localization.hpp"
#include "anchortrack/pipeline.hpp"
#include "anchortrack/synth.hpp"

using namespace anchortrack;

namespace {

const SynthSequence& sequence() {
  static const SynthSequence seq = [] {
    SynthParams p = preset("translation");
    p.frames = 40;
    return generate(make_spec(p));
  }();
  return seq;
}

void BM_Detect(benchmark::State& st) {
  const auto& f = sequence().frames[1];
  const TrackerConfig cfg;
  for (auto _ : st) benchmark::DoNotOptimize(detect(f, std::nullopt, cfg));
}
BENCHMARK(BM_Detect);

void BM_Match(benchmark::State& st) {
  const TrackerConfig cfg;
  const auto model = initialize(sequence().frames[0], sequence().truth[0], cfg).model.descriptors();
  std::vector<Descriptor> frame;
  for (const auto& k : detect(sequence().frames[1], std::nullopt, cfg)) frame.push_back(k.descriptor);
  for (auto _ : st) benchmark::DoNotOptimize(match_descriptors(model, frame, cfg.ratio_test));
}
BENCHMARK(BM_Match);

void BM_Accumulate(benchmark::State& st) {
  const TrackerConfig cfg;
  const auto& f = sequence().frames[1];
  auto model = initialize(sequence().frames[0], sequence().truth[0], cfg).model;
  const auto kps = detect(f, std::nullopt, cfg);
  std::vector<Descriptor> frame;
  for (const auto& k : kps) frame.push_back(k.descriptor);
  const auto matches = match_descriptors(model.descriptors(), frame, cfg.ratio_test);
  for (auto _ : st) benchmark::DoNotOptimize(accumulate(model, matches, kps, f.width(), f.height(), cfg));
}
BENCHMARK(BM_Accumulate);

void BM_Gate(benchmark::State& st) {
  const TrackerConfig cfg;
  const auto& seq = sequence();
  const auto refs = build_references(seq.frames[0], seq.truth[0], cfg);
  for (auto _ : st) benchmark::DoNotOptimize(evaluate_gate(seq.frames[1], seq.truth[1], refs, cfg));
}
BENCHMARK(BM_Gate);

void BM_Step(benchmark::State& st) {
  const auto& seq = sequence();
  const TrackerConfig cfg;
  for (auto _ : st) {
    st.PauseTiming();
    auto state = initialize(seq.frames[0], seq.truth[0], cfg);
    st.ResumeTiming();
    for (std::size_t i = 1; i < seq.frames.size(); ++i) benchmark::DoNotOptimize(step(state, seq.frames[i]));
  }
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(seq.frames.size() - 1));
}
BENCHMARK(BM_Step)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
