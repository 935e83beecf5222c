#include <benchmark/benchmark.h>

#include <sstream>
#include <string>

#include "jnr/consolidate.hpp"
#include "jnr/interchange.hpp"
#include "jnr/pipeline.hpp"
#include "jnr/subject_filter.hpp"
#include "jnr/synthgen.hpp"

namespace {

const jnr::SynthCorpus& Corpus() {
  static const jnr::SynthCorpus corpus = [] {
    jnr::SynthConfig cfg;
    cfg.n_tracklets = 200;
    cfg.frames_per_tracklet = 100;
    cfg.eps_distract = 0.2;
    cfg.eps_trunc = 0.2;
    cfg.legible_frac = 0.5;
    cfg.seed = 1;
    return jnr::GenerateCorpus(cfg);
  }();
  return corpus;
}

std::size_t FrameCount() {
  std::size_t n = 0;
  for (const auto& t : Corpus().tracklets) n += t.frames.size();
  return n;
}

void BM_ConsolidateHeuristic(benchmark::State& state) {
  const auto& tracklets = Corpus().tracklets;
  std::vector<jnr::LegibleSet> legible;
  for (const auto& t : tracklets) legible.push_back(jnr::GateLegible(t));
  for (auto _ : state) {
    for (std::size_t i = 0; i < tracklets.size(); ++i) {
      benchmark::DoNotOptimize(jnr::ConsolidateHeuristic(tracklets[i], legible[i], {}));
    }
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * tracklets.size()));
}
BENCHMARK(BM_ConsolidateHeuristic);

void BM_ConsolidateProbabilistic(benchmark::State& state) {
  const auto& tracklets = Corpus().tracklets;
  const auto mode = state.range(0) == 0 ? jnr::PriorMode::kPerFrame : jnr::PriorMode::kOnce;
  std::vector<jnr::LegibleSet> legible;
  for (const auto& t : tracklets) legible.push_back(jnr::GateLegible(t));
  const jnr::CalibrationModel calibration(1.3);
  for (auto _ : state) {
    for (std::size_t i = 0; i < tracklets.size(); ++i) {
      benchmark::DoNotOptimize(jnr::ConsolidateProbabilistic(tracklets[i], legible[i],
                                                             jnr::Prior::SingleDigitBias(0.39), calibration, mode));
    }
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * tracklets.size()));
}
BENCHMARK(BM_ConsolidateProbabilistic)->Arg(0)->Arg(1);

void BM_SubjectFilter(benchmark::State& state) {
  const auto& tracklets = Corpus().tracklets;
  const jnr::FilterConfig cfg{3, 3.5, state.range(0) == 0 ? jnr::FilterMode::kRadialZScore
                                                          : jnr::FilterMode::kIsotropicMahalanobis};
  for (auto _ : state) {
    for (const auto& t : tracklets) benchmark::DoNotOptimize(jnr::FilterTrackletFrames(t, cfg));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * FrameCount()));
}
BENCHMARK(BM_SubjectFilter)->Arg(0)->Arg(1);

void BM_ParseFrameRecords(benchmark::State& state) {
  std::ostringstream out;
  jnr::WriteFrameRecords(out, Corpus().tracklets);
  const std::string text = out.str();
  for (auto _ : state) benchmark::DoNotOptimize(jnr::ParseFrameRecords(std::string_view(text)));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_ParseFrameRecords);

void BM_Pipeline(benchmark::State& state) {
  const auto& tracklets = Corpus().tracklets;
  jnr::PipelineConfig cfg;
  const auto jobs = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(jnr::RunPipeline(tracklets, cfg, jobs));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * tracklets.size()));
}
BENCHMARK(BM_Pipeline)->Arg(1)->Arg(4)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
