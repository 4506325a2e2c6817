#include <benchmark/benchmark.h>

#include <random>

#include "mpdag/kernels.hpp"
#include "mpdag/oracle.hpp"

namespace {

// A chain V1 -> ... -> Vn with binary variables: one CPT per node.
struct Chain {
  std::vector<mpdag::Node> vars;
  std::vector<int> cards;
  std::vector<mpdag::Table> tables;
};

Chain chain(std::size_t n) {
  Chain c;
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  for (std::size_t v = 0; v < n; ++v) {
    c.vars.push_back(v);
    c.cards.push_back(2);
    mpdag::Table t;
    t.scope = v == 0 ? std::vector<mpdag::Node>{0} : std::vector<mpdag::Node>{v, v - 1};
    t.cards.assign(t.scope.size(), 2);
    t.values.resize(t.configurations());
    for (auto& x : t.values) x = u(rng);
    c.tables.push_back(std::move(t));
  }
  return c;
}

void BM_ProductSerial(benchmark::State& state) {
  const Chain c = chain(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(mpdag::kernels::product_serial(c.vars, c.cards, c.tables));
  state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << state.range(0)));
}

void BM_ProductParallel(benchmark::State& state) {
  const Chain c = chain(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(mpdag::kernels::product_parallel(c.vars, c.cards, c.tables));
  state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << state.range(0)));
}

}  // namespace

BENCHMARK(BM_ProductSerial)->DenseRange(8, 20, 4);
BENCHMARK(BM_ProductParallel)->DenseRange(8, 20, 4);

BENCHMARK_MAIN();
