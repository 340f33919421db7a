#include <benchmark/benchmark.h>

#include "bergsim/bundle.hpp"
#include "bergsim/frame.hpp"
#include "bergsim/potential.hpp"
#include "bergsim/similarity.hpp"
#include "bergsim/space.hpp"

using namespace bergsim;

namespace {

Frame one_z_frame(int order) {
  Frame f;
  f.order = order;
  f.rows = 2;
  f.cols = 1;
  f.entries = {Atom::poly({Complex(1.0)}), Atom::poly({Complex(0.0), Complex(1.0)})};
  return f;
}

void BM_KernelVector(benchmark::State& state) {
  const SpaceParams p{2, static_cast<int>(state.range(0)), 1};
  const Complex lambda(0.6, 0.3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernel_vector(p, lambda));
  }
}
BENCHMARK(BM_KernelVector)->Arg(100)->Arg(300)->Arg(1000);

void BM_ShiftBundleProjection(benchmark::State& state) {
  const SpaceParams p{3, static_cast<int>(state.range(0)), 1};
  const Complex lambda(0.5, -0.4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(shift_bundle_projection(p, lambda).hs_sq);
  }
}
BENCHMARK(BM_ShiftBundleProjection)->Arg(100)->Arg(200);

void BM_ToeplitzCoanalytic(benchmark::State& state) {
  const Frame f = one_z_frame(2);
  const SpaceParams p{2, static_cast<int>(state.range(0)), 2};
  const auto symbol = f.taylor(p.degree);
  for (auto _ : state) {
    benchmark::DoNotOptimize(toeplitz_coanalytic(symbol, p));
  }
}
BENCHMARK(BM_ToeplitzCoanalytic)->Arg(100)->Arg(200);

void BM_IntertwinerSVD(benchmark::State& state) {
  const Frame f = one_z_frame(2);
  const int degree = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(intertwiner_sweep(f, {degree}).condition[0]);
  }
}
BENCHMARK(BM_IntertwinerSVD)->Arg(50)->Arg(100)->Arg(200);

void BM_GreenPotential(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const DiskGrid grid = make_grid(n, n, 1.0 - 0x1p-10);
  std::vector<double> density(grid.nodes.size(), 1.0);
  const Complex lambda(0.4, 0.1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(green_potential(density, 1.0, lambda, grid));
  }
}
BENCHMARK(BM_GreenPotential)->Arg(128)->Arg(256);

void BM_CurvatureDefect(benchmark::State& state) {
  const Frame f = one_z_frame(2);
  const Complex z(0.3, 0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(curvature_defect(f, z));
  }
}
BENCHMARK(BM_CurvatureDefect);

}  // namespace

BENCHMARK_MAIN();
