// Microbenchmarks for the hot paths: polynomial algebra, moment collapse,
// reduction, and annealing sweeps.

#include <benchmark/benchmark.h>

#include "qkan/objective.hpp"
#include "qkan/reduction.hpp"
#include "qkan/solver.hpp"

#include <random>

using namespace qkan;

namespace {

BinaryPolynomial random_poly(std::mt19937_64& rng, int n_vars, int n_terms, int max_deg) {
  std::uniform_real_distribution<double> coeff(-2.0, 2.0);
  BinaryPolynomial p;
  for (int t = 0; t < n_terms; ++t) {
    int deg = 1 + static_cast<int>(rng() % max_deg);
    std::vector<VarId> vars;
    while (static_cast<int>(vars.size()) < deg) {
      VarId v = static_cast<VarId>(rng() % n_vars);
      if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
    }
    p.add_term(Monomial(std::move(vars)), coeff(rng));
  }
  return p;
}

Dataset random_dataset(std::mt19937_64& rng, int d, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Dataset ds;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> row(d);
    for (double& x : row) x = u(rng);
    ds.inputs.push_back(row);
    ds.targets.push_back(u(rng));
  }
  return ds;
}

void bm_poly_multiply(benchmark::State& state) {
  std::mt19937_64 rng(7);
  BinaryPolynomial a = random_poly(rng, 24, static_cast<int>(state.range(0)), 3);
  BinaryPolynomial b = random_poly(rng, 24, static_cast<int>(state.range(0)), 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(a * b);
  }
}
BENCHMARK(bm_poly_multiply)->Arg(16)->Arg(64)->Arg(256);

void bm_collapse_moments(benchmark::State& state) {
  KanSpec spec = KanSpec::uniform({2, 1}, 2);
  EncodingSpec enc;
  VariableLayout layout = VariableLayout::build(spec, enc);
  std::mt19937_64 rng(11);
  Dataset data = random_dataset(rng, 2, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(collapse_moments(spec, layout, data));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bm_collapse_moments)->Arg(100)->Arg(1000)->Arg(10000);

void bm_assemble_from_moments(benchmark::State& state) {
  KanSpec spec = KanSpec::uniform({2, 1}, 2);
  EncodingSpec enc;
  VariableLayout layout = VariableLayout::build(spec, enc);
  ObjectiveTemplate tmpl = ObjectiveTemplate::build(spec, layout);
  std::mt19937_64 rng(13);
  MomentTable moments = tmpl.collapse(random_dataset(rng, 2, 1000));
  for (auto _ : state) {
    benchmark::DoNotOptimize(assemble_from_moments(tmpl, moments, nullptr, {}));
  }
}
BENCHMARK(bm_assemble_from_moments);

void bm_reduce(benchmark::State& state) {
  std::mt19937_64 rng(17);
  BinaryPolynomial h = random_poly(rng, 24, 200, 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(reduce(h, 20.0));
  }
}
BENCHMARK(bm_reduce);

void bm_anneal_sweeps(benchmark::State& state) {
  std::mt19937_64 rng(19);
  BinaryPolynomial h = random_poly(rng, static_cast<int>(state.range(0)), 300, 2);
  QuboProblem q = reduce(h, 20.0);
  AnnealSchedule sched;
  sched.reads = 1;
  sched.sweeps = 1000;
  for (auto _ : state) {
    sched.seed++;
    benchmark::DoNotOptimize(anneal(q, sched));
  }
  state.SetItemsProcessed(state.iterations() * sched.sweeps * state.range(0));
}
BENCHMARK(bm_anneal_sweeps)->Arg(32)->Arg(128);

}  // namespace

BENCHMARK_MAIN();
