#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "chflow/fd.hpp"
#include "chflow/linsolve.hpp"
#include "chflow/norms.hpp"
#include "chflow/picard.hpp"

namespace {

using namespace chflow;
constexpr double kPi = std::numbers::pi;

Params params_for(int n) {
  Params p;
  p.n = n;
  return p;
}

VectorField drive_field(Grid g, double amp) {
  return VectorField::sample(
      g, [=](double a, double b) { return amp * std::sin(kPi * a) * std::cos(kPi * b); },
      [=](double a, double b) { return amp * std::sin(kPi * a) * std::sin(kPi * b); });
}

LinearData linear_data(const Params& p) {
  const Grid g = p.grid();
  VectorField vb = drive_field(g, 0.02);
  LinearData data;
  data.params = p;
  data.v_bar = vb;
  data.map = build_flowmap(tilde_v(vb, p), p);
  data.f = ScalarField::sample(
      g, [](double a, double b) { return std::sin(kPi * a) * std::cos(kPi * b); });
  data.g = VectorField::sample(
      g, [](double a, double b) { return std::cos(kPi * a) * std::sin(2 * kPi * b); },
      [](double a, double b) { return 0.5 * std::sin(kPi * a) * b; });
  data.b_tilde_bottom = BoundaryProfile(p.n, 0.0);
  data.b_tilde_top = BoundaryProfile(p.n, 0.0);
  data.w_in = BoundaryProfile::sample(p.n, [](double t) { return 0.1 * std::sin(kPi * t); });
  return data;
}

void BM_BuildFlowmap(benchmark::State& state) {
  Params p = params_for(static_cast<int>(state.range(0)));
  TildeV tv = tilde_v(drive_field(p.grid(), 0.02), p);
  for (auto _ : state) benchmark::DoNotOptimize(build_flowmap(tv, p));
}
BENCHMARK(BM_BuildFlowmap)->Arg(32)->Arg(64)->Arg(128);

void BM_TransportS(benchmark::State& state) {
  Params p = params_for(static_cast<int>(state.range(0)));
  const Grid g = p.grid();
  TransportCoeff a = coeff_a(FlowMap::identity(g), VectorField(g), p);
  ScalarField rhs = ScalarField::sample(
      g, [](double z1, double z2) { return std::sin(kPi * z1) * std::cos(z2); });
  BoundaryProfile w_in = BoundaryProfile::sample(p.n, [](double t) { return t * (1 - t); });
  for (auto _ : state) benchmark::DoNotOptimize(transport_S(rhs, w_in, a));
}
BENCHMARK(BM_TransportS)->Arg(64)->Arg(128)->Arg(256);

void BM_MomentumAssembly(benchmark::State& state) {
  LinearData data = linear_data(params_for(static_cast<int>(state.range(0))));
  for (auto _ : state) {
    MomentumSystem sys(data);
    benchmark::DoNotOptimize(&sys);
  }
}
BENCHMARK(BM_MomentumAssembly)->Arg(32)->Arg(64);

void BM_LinearSolve(benchmark::State& state) {
  LinearData data = linear_data(params_for(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(solve_linear_system(data));
}
BENCHMARK(BM_LinearSolve)->Arg(32)->Arg(64);

void BM_NormW2p(benchmark::State& state) {
  const Grid g(static_cast<int>(state.range(0)));
  VectorField v = drive_field(g, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(norm(v, NormKind::W2pDiscrete, 4.0));
}
BENCHMARK(BM_NormW2p)->Arg(64)->Arg(128);

}  // namespace

BENCHMARK_MAIN();
