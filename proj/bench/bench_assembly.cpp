// Serial vs OpenMP timings of the per-row assembly kernels.
#include <benchmark/benchmark.h>

#include "nlc/cases.hpp"
#include "nlc/experiments.hpp"
#include "nlc/fem.hpp"
#include "nlc/nonlocal.hpp"
#include "nlc/transfer.hpp"

using namespace nlc;

namespace {

struct Fixture {
  ManufacturedCase c;
  double h, delta;
  PointCloud cloud;
  TriMesh mesh;
  Fixture(const char* id, double h_) : c(registry_case(id)), h(h_), delta(c.ratio * h_) {
    cloud = generate_point_cloud(c.domain, h, delta);
    mesh = generate_mesh(c.local, h);
  }
};

const Fixture& fixture(int which) {
  static const Fixture line("ltn-line", 0.025), cross("ltn-cross", 0.05);
  return which == 0 ? line : cross;
}

void BM_Nonlocal(benchmark::State& st) {
  const Fixture& f = fixture(static_cast<int>(st.range(0)));
  const bool par = st.range(1) != 0;
  for (auto _ : st) {
    auto sys = assemble_nonlocal(f.cloud, f.c.domain, {KernelFamily::J1_constant, f.delta}, 1.0, par);
    benchmark::DoNotOptimize(sys.K.nonZeros());
  }
  st.counters["points"] = static_cast<double>(f.cloud.size());
}

void BM_Fem(benchmark::State& st) {
  const Fixture& f = fixture(static_cast<int>(st.range(0)));
  const bool par = st.range(1) != 0;
  for (auto _ : st) {
    auto fem = assemble_fem(f.mesh, 1.0, par);
    benchmark::DoNotOptimize(fem.B.nonZeros());
  }
}

void BM_Transfer(benchmark::State& st) {
  const Fixture& f = fixture(static_cast<int>(st.range(0)));
  const bool par = st.range(1) != 0;
  auto nl = assemble_nonlocal(f.cloud, f.c.domain, {KernelFamily::J1_constant, f.delta}, 1.0, true);
  auto fem = assemble_fem(f.mesh, 1.0, true);
  for (auto _ : st) {
    auto tr = build_transfer(nl, fem, GradientMode::mls, par);
    benchmark::DoNotOptimize(tr.Gn.nonZeros());
  }
}

// args: {0 = line, 1 = cross} x {serial, parallel}
BENCHMARK(BM_Nonlocal)->ArgsProduct({{0, 1}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Fem)->ArgsProduct({{0, 1}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Transfer)->ArgsProduct({{0, 1}, {0, 1}})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
