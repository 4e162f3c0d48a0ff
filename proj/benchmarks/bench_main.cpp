#include <benchmark/benchmark.h>

#include <random>

#include "gaitscore/features.hpp"
#include "gaitscore/hungarian.hpp"
#include "gaitscore/nn/network.hpp"
#include "gaitscore/synth.hpp"
#include "gaitscore/tracker.hpp"

using namespace gaitscore;

namespace {

std::vector<PoseFrame> walk(int frames) {
  return synth_gait(1, SkeletonLayout::smpl24(), frames, 5).frames;
}

void BM_Features(benchmark::State& state) {
  const auto frames = walk(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(compute_features(frames));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Features)->Arg(100)->Arg(200);

void BM_Forward(benchmark::State& state) {
  nn::ModelSpec spec;
  spec.filters = static_cast<int>(state.range(0));
  const nn::Network net(spec, 1);
  const auto x = compute_features(walk(spec.window));
  for (auto _ : state) benchmark::DoNotOptimize(net.predict(x));
}
BENCHMARK(BM_Forward)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMicrosecond);

void BM_ForwardBackward(benchmark::State& state) {
  nn::ModelSpec spec;
  spec.filters = static_cast<int>(state.range(0));
  nn::Network net(spec, 1);
  const auto x = compute_features(walk(spec.window));
  Eigen::VectorXd g = Eigen::VectorXd::Zero(spec.num_classes);
  g[0] = 1.0;
  for (auto _ : state) {
    net.forward_logits(x);
    benchmark::DoNotOptimize(net.backward(g));
  }
}
BENCHMARK(BM_ForwardBackward)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMicrosecond);

void BM_Hungarian(benchmark::State& state) {
  const auto n = state.range(0);
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd c(n, n);
  for (Eigen::Index i = 0; i < c.size(); ++i) c.data()[i] = u(gen);
  for (auto _ : state) benchmark::DoNotOptimize(hungarian_assign(c));
}
BENCHMARK(BM_Hungarian)->RangeMultiplier(4)->Range(4, 256);

void BM_Tracker(benchmark::State& state) {
  const int people = static_cast<int>(state.range(0));
  DetectionStream stream(300);
  for (int t = 0; t < 300; ++t) {
    for (int p = 0; p < people; ++p) {
      const double x = 60.0 * p + 0.5 * t;
      stream[t].push_back({x, 100, x + 40, 200, 0.9});
    }
  }
  for (auto _ : state) benchmark::DoNotOptimize(track_frames(stream));
  state.SetItemsProcessed(state.iterations() * 300);
}
BENCHMARK(BM_Tracker)->Arg(1)->Arg(4)->Arg(16)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
