// Compares every OpenMP-parallel kernel against its serial reference:
// same inputs, observably identical outputs, wall time side by side.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "edanet/benchmarks.hpp"
#include "edanet/genome.hpp"
#include "edanet/harness.hpp"
#include "edanet/search.hpp"

using namespace edanet;

namespace {

double time_ms(const std::function<void()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - t0)
      .count();
}

void report(const char* kernel, double serial_ms, double parallel_ms,
            bool identical) {
  std::printf("%-28s %12.2f %12.2f %10.2fx   %s\n", kernel, serial_ms,
              parallel_ms, serial_ms / parallel_ms,
              identical ? "outputs identical" : "OUTPUTS DIFFER");
}

Population fresh_population(const Objective& obj, std::size_t n,
                            std::uint64_t seed) {
  Rng rng(seed);
  return population_from_rows(
      pls_sample(uniform_network(obj.cardinalities), n, rng), 0);
}

bool bench_evaluation() {
  const Objective obj = make_sixpeaks_objective(
      SixPeaksSpec::with_default_threshold(100));
  Population serial_pop = fresh_population(obj, 40000, 7);
  Population parallel_pop = serial_pop;

  const double s =
      time_ms([&] { evaluate_population_serial(serial_pop, obj); });
  const double p = time_ms([&] { evaluate_population(parallel_pop, obj); });

  bool same = true;
  for (std::size_t i = 0; i < serial_pop.members.size(); ++i)
    if (*serial_pop.members[i].fitness != *parallel_pop.members[i].fitness)
      same = false;
  report("evaluate_population", s, p, same);
  return same;
}

Dataset correlated_data(std::size_t vars, std::size_t rows,
                        std::uint64_t seed) {
  Rng rng(seed);
  Dataset d(std::vector<Cardinality>(vars, 2));
  for (std::size_t r = 0; r < rows; ++r) {
    std::vector<Gene> row(vars);
    row[0] = static_cast<Gene>(rng.uniform_int(2));
    for (std::size_t v = 1; v < vars; ++v)
      row[v] = rng.uniform() < 0.8
                   ? row[v - 1]
                   : static_cast<Gene>(rng.uniform_int(2));
    d.append_row(row);
  }
  return d;
}

bool bench_greedy_search() {
  const Dataset d = correlated_data(28, 1500, 11);
  ScoringConfig cfg;
  SearchOptions serial_opt;
  serial_opt.parallel = false;
  SearchOptions parallel_opt;
  parallel_opt.parallel = true;

  DagStructure from_serial, from_parallel;
  const double s =
      time_ms([&] { from_serial = algorithm_b(d, cfg, serial_opt); });
  const double p =
      time_ms([&] { from_parallel = algorithm_b(d, cfg, parallel_opt); });
  const bool same = from_serial.parents == from_parallel.parents;
  report("algorithm_b", s, p, same);
  return same;
}

bool bench_local_search() {
  const Dataset d = correlated_data(24, 1200, 13);
  ScoringConfig cfg;
  SearchOptions serial_opt;
  serial_opt.parallel = false;
  SearchOptions parallel_opt;
  parallel_opt.parallel = true;
  const DagStructure start = algorithm_b(d, cfg, serial_opt);

  DagStructure from_serial, from_parallel;
  const double s = time_ms(
      [&] { from_serial = local_search(d, cfg, start, serial_opt); });
  const double p = time_ms(
      [&] { from_parallel = local_search(d, cfg, start, parallel_opt); });
  const bool same = from_serial.parents == from_parallel.parents;
  report("local_search", s, p, same);
  return same;
}

bool bench_experiment() {
  ExperimentConfig cfg;
  cfg.problems = {{"onemax", 32, 64, 2000}, {"checkerboard", 5, 64, 2000}};
  cfg.algorithms = {"umda", "mimic", "ebna-bic"};
  cfg.repetitions = 4;
  cfg.master_seed = 3;

  std::vector<RunRecord> serial_recs, parallel_recs;
  const double s =
      time_ms([&] { serial_recs = run_experiment_serial(cfg, nullptr); });
  const double p =
      time_ms([&] { parallel_recs = run_experiment(cfg, nullptr); });

  bool same = serial_recs.size() == parallel_recs.size();
  for (std::size_t i = 0; same && i < serial_recs.size(); ++i) {
    same = serial_recs[i].final_best == parallel_recs[i].final_best &&
           serial_recs[i].evaluations == parallel_recs[i].evaluations &&
           serial_recs[i].best_genes == parallel_recs[i].best_genes;
  }
  report("run_experiment", s, p, same);
  return same;
}

}  // namespace

int main() {
  std::printf("%-28s %12s %12s %11s\n", "kernel", "serial ms",
              "parallel ms", "speedup");
  bool ok = true;
  ok &= bench_evaluation();
  ok &= bench_greedy_search();
  ok &= bench_local_search();
  ok &= bench_experiment();
  if (!ok) {
    std::printf("\nFAILURE: a parallel kernel diverged from its serial "
                "reference\n");
    return 1;
  }
  return 0;
}
