// Desk-scale benchmarks for the hot paths: network construction, the trace
// (Schur complement) solve, harmonic extension, and the scalar projection.
#include <benchmark/benchmark.h>

#include "ssg/engine.hpp"
#include "ssg/function.hpp"
#include "ssg/matching.hpp"
#include "ssg/network.hpp"

using namespace ssg;

namespace {

void bm_build_ssg(benchmark::State& state) {
  MatchingSequence seq = MatchingSequence::geometric(0.5, 0.5);
  int m = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_ssg(seq, m, 2));
  }
}
BENCHMARK(bm_build_ssg)->Arg(2)->Arg(4)->Arg(6);

void bm_trace(benchmark::State& state) {
  MatchingSequence seq = MatchingSequence::geometric(0.5, 0.5);
  int m = static_cast<int>(state.range(0));
  ResistorNetwork net = build_ssg(seq, m + 1, 1);
  VertexSet verts = vertex_set(m);
  std::vector<NodeId> boundary;
  for (const Address& a : verts.addresses()) boundary.push_back(NodeId::vertex(a));
  for (auto _ : state) {
    benchmark::DoNotOptimize(trace(net, boundary));
  }
}
BENCHMARK(bm_trace)->Arg(1)->Arg(2)->Arg(3);

void bm_effective_resistance(benchmark::State& state) {
  MatchingSequence seq = MatchingSequence::geometric(0.5, 0.5);
  ResistorNetwork net = build_ssg(seq, static_cast<int>(state.range(0)), 1);
  NodeId p = NodeId::vertex(Address{"", 1});
  NodeId q = NodeId::vertex(Address{"", 2});
  for (auto _ : state) {
    benchmark::DoNotOptimize(effective_resistance(net, p, q));
  }
}
BENCHMARK(bm_effective_resistance)->Arg(3)->Arg(5);

void bm_harmonic_extend(benchmark::State& state) {
  MatchingSequence seq = MatchingSequence::geometric(0.5, 0.5);
  ResistorNetwork net = build_ssg(seq, static_cast<int>(state.range(0)), 2);
  std::map<NodeId, double> pinned;
  for (int i = 1; i <= 3; ++i) pinned[NodeId::vertex(Address{"", i})] = i == 1 ? 1.0 : 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(harmonic_extend(net, pinned));
  }
}
BENCHMARK(bm_harmonic_extend)->Arg(2)->Arg(4);

void bm_project(benchmark::State& state) {
  MatchingSequence seq = MatchingSequence::geometric(0.5, 0.5);
  int terms = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(project(seq, terms));
  }
}
BENCHMARK(bm_project)->Arg(10)->Arg(40);

void bm_form_components(benchmark::State& state) {
  MatchingSequence seq = MatchingSequence::geometric(0.5, 0.5);
  int m = static_cast<int>(state.range(0));
  DiscretizedFunction f = random_function(7, m, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(form_components(seq, m, f));
  }
}
BENCHMARK(bm_form_components)->Arg(3)->Arg(5);

}  // namespace

BENCHMARK_MAIN();
