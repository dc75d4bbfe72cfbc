#include <benchmark/benchmark.h>

#include <map>

#include "iscat/localization.hpp"
#include "iscat/synthetic.hpp"

using namespace iscat;

namespace {

constexpr double kK = 5.0;

const TriangleMesh& mesh_for(int epw) {
  static std::map<int, TriangleMesh> cache;
  auto it = cache.find(epw);
  if (it == cache.end()) {
    MeshParams p;
    p.seed = 1;
    p.elements_per_wavelength = epw;
    it = cache.emplace(epw, build_disc_mesh(p)).first;
  }
  return it->second;
}

std::vector<cplx> index_on(const TriangleMesh& mesh) { return builtin_scenario("disc-in-disc").sample(mesh); }

void BM_Factorize(benchmark::State& state) {
  const auto& mesh = mesh_for(static_cast<int>(state.range(0)));
  const auto n = index_on(mesh);
  for (auto _ : state) {
    HelmholtzSolver solver(mesh, n, kK);
    benchmark::DoNotOptimize(&solver);
  }
  state.counters["elements"] = static_cast<double>(mesh.num_triangles());
}
BENCHMARK(BM_Factorize)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_Solve(benchmark::State& state) {
  const auto& mesh = mesh_for(static_cast<int>(state.range(0)));
  const HelmholtzSolver solver(mesh, index_on(mesh), kK);
  for (auto _ : state) benchmark::DoNotOptimize(solver.solve(Vec2(1.0, 0.0)));
}
BENCHMARK(BM_Solve)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_FarField30x30(benchmark::State& state) {
  const auto& mesh = mesh_for(20);
  const auto n = index_on(mesh);
  const auto g = DirectionGrid::full(30);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_F(mesh, n, kK, g, g));
}
BENCHMARK(BM_FarField30x30)->Unit(benchmark::kMillisecond);

void BM_Jacobian(benchmark::State& state) {
  const auto& mesh = mesh_for(20);
  const auto g = DirectionGrid::full(30);
  const ForwardState fs(mesh, index_on(mesh), kK, g, g);
  const auto zoning =
      state.range(0) == 0 ? per_element_zoning(mesh) : partition_zones(mesh, static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(fs.jacobian(zoning));
  state.counters["zones"] = static_cast<double>(zoning.size());
}
BENCHMARK(BM_Jacobian)->Arg(27)->Arg(0)->Unit(benchmark::kMillisecond);

void BM_WSharp(benchmark::State& state) {
  const auto m = static_cast<Eigen::Index>(state.range(0));
  const CMatrix w = CMatrix::Random(m, m);
  for (auto _ : state) benchmark::DoNotOptimize(w_sharp(w));
}
BENCHMARK(BM_WSharp)->Arg(30)->Arg(100);

}  // namespace

BENCHMARK_MAIN();
