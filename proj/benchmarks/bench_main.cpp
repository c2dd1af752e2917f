#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include <sgls/extension.hpp>
#include <sgls/field.hpp>
#include <sgls/norms.hpp>
#include <sgls/quadrature.hpp>

using namespace sgls;

namespace {

const QuadratureSpec kQuad{4, 8, 1e-8, 10};

void BM_HestenesCoefficients(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(hestenes_coefficients(m));
}
BENCHMARK(BM_HestenesCoefficients)->DenseRange(0, 12, 4);

// Building the refinement levels: one integrand evaluation per node.
void BM_LpSamplerFirstNorm(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const Field f = gaussian_field(dim, 1.0);
  const HalfSpaceDomain domain{dim, Side::upper, {}, {}};
  const QuadratureSpec quad{4, 8, dim == 1 ? 1e-10 : 1e-6, 8};
  for (auto _ : state) {
    LpSampler s = make_derivative_sampler(f, MultiIndex::zero(dim), domain, quad);
    benchmark::DoNotOptimize(s.norm(2.0).value);
  }
}
BENCHMARK(BM_LpSamplerFirstNorm)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

// Re-evaluating cached levels at a new p, the inner loop of a sup-over-p search.
void BM_LpSamplerCachedSweep(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const Field f = gaussian_field(dim, 1.0);
  const HalfSpaceDomain domain{dim, Side::upper, {}, {}};
  const QuadratureSpec quad{4, 8, dim == 1 ? 1e-10 : 1e-6, 8};
  LpSampler s = make_derivative_sampler(f, MultiIndex::zero(dim), domain, quad);
  s.norm(2.0);
  double p = 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(s.norm(p).value);
    p = p < 60.0 ? p * 1.37 : 1.0;
  }
}
BENCHMARK(BM_LpSamplerCachedSweep)->Arg(1)->Arg(2)->Unit(benchmark::kMicrosecond);

void BM_SglsNorm(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const Field f = gaussian_field(1, 1.0);
  const HalfSpaceDomain domain{1, Side::upper, {}, {}};
  const PsiSpec psi = make_power_psi(0.5, 1.5, 8.0);
  for (auto _ : state) benchmark::DoNotOptimize(sgls_norm(f, m, psi, domain, {}, kQuad).value);
}
BENCHMARK(BM_SglsNorm)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

void BM_ExtendedDerivative(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const ExtendedField ext = extend(gaussian_field(2, 1.0), hestenes_coefficients(m));
  const MultiIndex alpha{0, m};
  std::vector<double> x{0.3, -0.4};
  for (auto _ : state) {
    benchmark::DoNotOptimize(ext.derivative(alpha, x));
    x[1] = x[1] < -2.0 ? -0.4 : x[1] - 1e-3;
  }
}
BENCHMARK(BM_ExtendedDerivative)->DenseRange(0, 4, 2);

}  // namespace

BENCHMARK_MAIN();
