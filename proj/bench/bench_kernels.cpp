// Parallel kernels against their serial references.

#include <benchmark/benchmark.h>

#include "qvor/bloch.hpp"
#include "qvor/seb.hpp"
#include "qvor/sites.hpp"
#include "qvor/voronoi.hpp"

namespace {

std::vector<Eigen::Vector3d> sphere_points(std::size_t n) {
  std::vector<Eigen::Vector3d> pts;
  for (const auto& b : qvor::sample_sphere(n)) pts.push_back(b.vec());
  return pts;
}

std::vector<qvor::DensityMatrix> image_states(std::size_t n) {
  std::vector<qvor::DensityMatrix> out;
  for (const auto& b : qvor::sample_sphere(n)) {
    out.push_back(qvor::bloch_to_density(qvor::BlochVector::from(0.8 * b.vec())));
  }
  return out;
}

void BM_AssignCells(benchmark::State& state) {
  const auto model = qvor::PureStateModel::section(5);
  const auto sites = qvor::example_sites(3);
  const auto pts = sphere_points(static_cast<std::size_t>(state.range(0)));
  const auto exec = state.range(1) ? qvor::Execution::kParallel : qvor::Execution::kSerial;
  for (auto _ : state) {
    auto cells = qvor::assign_cells(model, pts, sites, qvor::DistanceKind::divergence_limit(),
                                    1e-7, exec);
    benchmark::DoNotOptimize(cells.site.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_AssignCells)->ArgsProduct({{5000, 20000}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_AssignCellsReference(benchmark::State& state) {
  const auto model = qvor::PureStateModel::section(5);
  const auto sites = qvor::example_sites(3);
  const auto pts = sphere_points(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto cells = qvor::assign_cells_reference(model, pts, sites,
                                              qvor::DistanceKind::divergence_limit());
    benchmark::DoNotOptimize(cells.site.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_AssignCellsReference)->Arg(5000)->Unit(benchmark::kMillisecond);

void BM_DivergenceRow(benchmark::State& state) {
  const auto pts = image_states(static_cast<std::size_t>(state.range(0)));
  const auto center = qvor::bloch_to_density(qvor::BlochVector{0.1, -0.2, 0.05});
  const auto exec = state.range(1) ? qvor::Execution::kParallel : qvor::Execution::kSerial;
  for (auto _ : state) {
    auto row = qvor::divergences_to_center(pts, center.matrix(), exec);
    benchmark::DoNotOptimize(row.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DivergenceRow)->ArgsProduct({{2562}, {0, 1}})->Unit(benchmark::kMicrosecond);

void BM_DivergenceRowReference(benchmark::State& state) {
  const auto pts = image_states(static_cast<std::size_t>(state.range(0)));
  const auto center = qvor::bloch_to_density(qvor::BlochVector{0.1, -0.2, 0.05});
  for (auto _ : state) {
    auto row = qvor::divergences_to_center_reference(pts, center.matrix());
    benchmark::DoNotOptimize(row.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DivergenceRowReference)->Arg(2562)->Unit(benchmark::kMicrosecond);

void BM_GridCenter(benchmark::State& state) {
  std::vector<qvor::BlochVector> pts;
  for (const auto& b : qvor::sample_sphere(8, qvor::SphereScheme::kUniformRandom, 5)) {
    pts.push_back(qvor::BlochVector::from(0.9 * b.vec()));
  }
  qvor::GridSpec spec;
  spec.exec = state.range(0) ? qvor::Execution::kParallel : qvor::Execution::kSerial;
  for (auto _ : state) {
    auto c = qvor::brute_force_center(pts, spec);
    benchmark::DoNotOptimize(c.radius);
  }
}
BENCHMARK(BM_GridCenter)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_GridCenterReference(benchmark::State& state) {
  std::vector<qvor::BlochVector> pts;
  for (const auto& b : qvor::sample_sphere(8, qvor::SphereScheme::kUniformRandom, 5)) {
    pts.push_back(qvor::BlochVector::from(0.9 * b.vec()));
  }
  for (auto _ : state) {
    auto c = qvor::brute_force_center_reference(pts);
    benchmark::DoNotOptimize(c.radius);
  }
}
BENCHMARK(BM_GridCenterReference)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
