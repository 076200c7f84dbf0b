#include <benchmark/benchmark.h>

#include "constel/density.hpp"
#include "constel/integer.hpp"
#include "constel/prime_search.hpp"
#include "constel/residue_witness.hpp"

namespace {

using namespace constel;

LinearSystem twins() {
  return LinearSystem({AffineForm{{Int(1)}, Int(0)}, AffineForm{{Int(1)}, Int(2)}});
}

void BM_SegmentedSieve(benchmark::State& state) {
  const std::uint64_t n = state.range(0);
  for (auto _ : state) {
    auto primes = primes_up_to(n);
    benchmark::DoNotOptimize(primes.data());
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_SegmentedSieve)->Arg(1000000)->Arg(10000000);

void BM_CertifyTwins(benchmark::State& state) {
  const std::uint64_t horizon = state.range(0);
  LinearSystem sys = twins();
  for (auto _ : state) {
    auto cert = certify_strong_admissibility(sys, horizon);
    benchmark::DoNotOptimize(cert.candidate_L);
  }
  state.SetItemsProcessed(state.iterations() * horizon);
}
BENCHMARK(BM_CertifyTwins)->Arg(10000)->Arg(100000);

void BM_PsiTwins(benchmark::State& state) {
  System sys(twins());
  const long beta = state.range(0);
  for (auto _ : state) {
    auto rep = psi_count(sys, {Int(beta)});
    benchmark::DoNotOptimize(rep.count);
  }
  state.SetItemsProcessed(state.iterations() * beta);
}
BENCHMARK(BM_PsiTwins)->Arg(100000)->Arg(1000000);

void BM_TwinSeries(benchmark::State& state) {
  System sys(twins());
  const std::uint64_t P = state.range(0);
  for (auto _ : state) {
    auto s = singular_series(sys, P);
    benchmark::DoNotOptimize(s.value);
  }
}
BENCHMARK(BM_TwinSeries)->Arg(100000)->Arg(1000000);

void BM_IsPrimeU64(benchmark::State& state) {
  std::uint64_t n = 0xffffffffffffffc5ull;  // largest prime below 2^64
  for (auto _ : state) benchmark::DoNotOptimize(is_prime_u64(n));
}
BENCHMARK(BM_IsPrimeU64);

}  // namespace

BENCHMARK_MAIN();
