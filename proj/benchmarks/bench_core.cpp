#include <benchmark/benchmark.h>

#include "dtlab/angles.hpp"
#include "dtlab/bigfactor.hpp"
#include "dtlab/divisor_stats.hpp"
#include "dtlab/lcm_sums.hpp"
#include "dtlab/newform.hpp"

using namespace dtlab;

namespace {

const FactorSieve& shared_sieve() {
  static FactorSieve s(2'000'000);
  return s;
}

void BM_SieveBuild(benchmark::State& state) {
  for (auto _ : state) {
    FactorSieve s(uint32_t(state.range(0)));
    benchmark::DoNotOptimize(s.primes().size());
  }
}
BENCHMARK(BM_SieveBuild)->Arg(100'000)->Arg(1'000'000);

void BM_DivisorSweep(benchmark::State& state) {
  const auto& s = shared_sieve();
  for (auto _ : state) {
    uint64_t acc = 0;
    for (uint64_t n = 1; n <= uint64_t(state.range(0)); ++n)
      acc += s.divisor_count_of(n);
    benchmark::DoNotOptimize(acc);
  }
}
BENCHMARK(BM_DivisorSweep)->Arg(100'000);

void BM_SeriesSquare(benchmark::State& state) {
  Series a = delta_series(size_t(state.range(0)));
  for (auto _ : state) {
    Series sq = square(a, a.size());
    benchmark::DoNotOptimize(sq.size());
  }
}
BENCHMARK(BM_SeriesSquare)->Arg(1024)->Arg(8192);

void BM_CoefficientExpansion(benchmark::State& state) {
  NewformSpec spec = make_newform_spec(12);
  for (auto _ : state) {
    CoeffTable t = expand_coefficients(spec, uint32_t(state.range(0)));
    benchmark::DoNotOptimize(t.a.size());
  }
}
BENCHMARK(BM_CoefficientExpansion)->Arg(10'000)->Arg(50'000);

void BM_AngleTable(benchmark::State& state) {
  static CoeffTable t = expand_coefficients(make_newform_spec(12), 10'000);
  for (auto _ : state) {
    AngleTable at = angle_table(t, shared_sieve(), 10'000);
    benchmark::DoNotOptimize(at.records.size());
  }
}
BENCHMARK(BM_AngleTable);

void BM_TupleSumExact(benchmark::State& state) {
  for (auto _ : state) {
    LcmSumValue v = lcm_sum(LcmKind::inv_phi_lcm, double(state.range(0)), 2,
                            shared_sieve(), SumMode::exact);
    benchmark::DoNotOptimize(v.value);
  }
}
BENCHMARK(BM_TupleSumExact)->Arg(300)->Arg(1000);

void BM_AcceleratedPairsFp(benchmark::State& state) {
  for (auto _ : state) {
    LcmSumValue v = lcm_sum(LcmKind::inv_lcm, double(state.range(0)), 2,
                            shared_sieve(), SumMode::fp);
    benchmark::DoNotOptimize(v.value);
  }
}
BENCHMARK(BM_AcceleratedPairsFp)->Arg(100'000)->Arg(1'000'000);

void BM_BigFactorCoefficients(benchmark::State& state) {
  static CoeffTable t = expand_coefficients(make_newform_spec(12), 10'000);
  static AngleTable at = angle_table(t, shared_sieve(), 10'000);
  BigFactorizer f(shared_sieve());
  // The last records carry the largest coefficients (~45 bits).
  size_t n = at.records.size();
  for (auto _ : state) {
    uint64_t acc = 0;
    for (size_t i = n - 100; i < n; ++i) {
      auto zf = f.factor(abs(at.records[i].a_p));
      acc += divisor_count(*zf);
    }
    benchmark::DoNotOptimize(acc);
  }
}
BENCHMARK(BM_BigFactorCoefficients);

}  // namespace

BENCHMARK_MAIN();
