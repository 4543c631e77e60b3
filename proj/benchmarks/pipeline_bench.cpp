#include <benchmark/benchmark.h>

#include <map>

#include "budding/aggregate.hpp"
#include "budding/normalize.hpp"
#include "budding/score.hpp"
#include "budding/spinoff.hpp"
#include "budding/synth.hpp"

using namespace budding;

namespace {

const Corpus& corpus_of(int universities) {
  static std::map<int, Corpus> cache;
  auto it = cache.find(universities);
  if (it == cache.end()) {
    SynthConfig config;
    config.n_universities = universities;
    it = cache.emplace(universities, generate(config)).first;
  }
  return it->second;
}

void BM_MedianTable(benchmark::State& state) {
  const Corpus& c = corpus_of(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build_median_table(c));
  state.counters["publications"] = static_cast<double>(c.publications().size());
}
BENCHMARK(BM_MedianTable)->Arg(10)->Arg(46)->Unit(benchmark::kMillisecond);

void BM_ScoreCorpus(benchmark::State& state) {
  const Corpus& c = corpus_of(static_cast<int>(state.range(0)));
  const MedianTable medians = build_median_table(c);
  for (auto _ : state) benchmark::DoNotOptimize(score_corpus(c, medians));
  state.counters["researchers"] = static_cast<double>(c.researchers().size());
}
BENCHMARK(BM_ScoreCorpus)->Arg(10)->Arg(46)->Unit(benchmark::kMillisecond);

void BM_Rankings(benchmark::State& state) {
  const Corpus& c = corpus_of(static_cast<int>(state.range(0)));
  const ScoreTable scores = score_corpus(c, build_median_table(c));
  const CostTable costs;
  for (auto _ : state) benchmark::DoNotOptimize(compute_rankings(scores, c.taxonomy(), costs));
}
BENCHMARK(BM_Rankings)->Arg(10)->Arg(46)->Unit(benchmark::kMillisecond);

void BM_SpinoffPipeline(benchmark::State& state) {
  const Corpus& c = corpus_of(static_cast<int>(state.range(0)));
  const std::vector<std::string> parents = {"U01", "U02", "U03"};
  for (auto _ : state) {
    const ScoreTable scores = score_corpus(c, build_median_table(c));
    const SelectionResult selection = select_spinoff_faculty(build_sizing_plan(c, "U01"), parents, scores);
    benchmark::DoNotOptimize(compute_rankings(with_spinoff(scores, selection), c.taxonomy(), CostTable{}));
  }
}
BENCHMARK(BM_SpinoffPipeline)->Arg(10)->Arg(46)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
