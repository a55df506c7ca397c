// Copyright 2026 The pqseries Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <random>

#include "pqs/catalog.hpp"
#include "pqs/propagation.hpp"
#include "pqs/seed.hpp"
#include "pqs/series.hpp"

namespace
{

using namespace pqs;

LaurentSeries random_series(int dim, int lo, int hi, unsigned seed)
{
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  LaurentSeries s(dim, lo, hi);
  for (int i = lo; i <= hi; ++i)
  {
    for (int r = 0; r < dim; ++r)
    {
      for (int c = 0; c < dim; ++c)
      {
        s[i](r, c) = Complex(d(rng), d(rng));
      }
    }
  }
  return s;
}

void BM_SeriesMul(benchmark::State &state)
{
  const int dim = static_cast<int>(state.range(0));
  const int order = static_cast<int>(state.range(1));
  const LaurentSeries a = random_series(dim, -2, order, 1);
  const LaurentSeries b = random_series(dim, 0, order, 2);
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(series_mul(a, b));
  }
}
BENCHMARK(BM_SeriesMul)->Args({2, 8})->Args({2, 16})->Args({3, 16})->Args({4, 32});

void BM_IrregularSeed(benchmark::State &state)
{
  const CatalogEntry &entry = catalog_get("irregular_2x2");
  const int order = static_cast<int>(state.range(0));
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(solve_irregular_seed(entry.model, order));
  }
}
BENCHMARK(BM_IrregularSeed)->Arg(4)->Arg(10)->Arg(16);

void BM_RegularSeed(benchmark::State &state)
{
  const CatalogEntry &entry = catalog_get("resonant_regular");
  const int order = static_cast<int>(state.range(0));
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(solve_regular_seed(entry.model, order));
  }
}
BENCHMARK(BM_RegularSeed)->Arg(4)->Arg(8);

void BM_EvolveIrregular(benchmark::State &state)
{
  const CatalogEntry &entry = catalog_get("irregular_2x2");
  const IrregularSeed seed = solve_irregular_seed(entry.model, entry.order);
  const int steps = static_cast<int>(state.range(0));
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(evolve_expansion(seed, entry.model, entry.x_end, steps));
  }
}
BENCHMARK(BM_EvolveIrregular)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
