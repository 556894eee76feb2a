#include <cmath>
#include <vector>

#include "doctest.h"
#include "edanet/benchmarks.hpp"
#include "edanet/ga.hpp"

using namespace edanet;

namespace {

StopSpec budget_stop(std::uint64_t evals) {
  StopSpec s;
  s.max_evaluations = evals;
  return s;
}

// Forward CDF of linear ranking over ranks [0,n): F(x) = (x/n)(b-(b-1)x/n).
double rank_cdf(double x, double n, double b) {
  return (x / n) * (b - (b - 1.0) * x / n);
}

}  // namespace

TEST_CASE("one-point crossover splices prefix and suffix") {
  const std::vector<Gene> a{1, 1, 1, 1, 1};
  const std::vector<Gene> b{0, 0, 0, 0, 0};
  CHECK(one_point_cross(a, b, 2) == std::vector<Gene>{1, 1, 0, 0, 0});
  CHECK(one_point_cross(b, a, 2) == std::vector<Gene>{0, 0, 1, 1, 1});
  CHECK(one_point_cross(a, b, 1) == std::vector<Gene>{1, 0, 0, 0, 0});
  CHECK(one_point_cross(a, b, 4) == std::vector<Gene>{1, 1, 1, 1, 0});
}

TEST_CASE("crossover of identical parents reproduces the parent") {
  const std::vector<Gene> x{2, 0, 1, 3, 1, 0};
  for (std::size_t cut = 0; cut <= x.size(); ++cut)
    CHECK(one_point_cross(x, x, cut) == x);
}

TEST_CASE("rank selection degenerates to uniform at the bias limit") {
  CHECK(rank_index(10, 1.0, 0.0) == 0);
  CHECK(rank_index(10, 1.0, 0.05) == 0);
  CHECK(rank_index(10, 1.0, 0.1) == 1);
  CHECK(rank_index(10, 1.0, 0.55) == 5);
  CHECK(rank_index(10, 1.0, 0.999) == 9);
}

TEST_CASE("two ranks at full bias favor the best three to one") {
  // P(rank 0) = F(1) - F(0) = 0.75 for n=2, b=2; the inverse CDF must
  // switch exactly at u = 0.75.
  CHECK(rank_index(2, 2.0, 0.0) == 0);
  CHECK(rank_index(2, 2.0, 0.749999) == 0);
  CHECK(rank_index(2, 2.0, 0.75) == 1);
  CHECK(rank_index(2, 2.0, 0.999999) == 1);

  Rng rng(71);
  int best = 0;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i)
    if (rank_index(2, 2.0, rng.uniform()) == 0) ++best;
  CHECK(std::abs(best / static_cast<double>(draws) - 0.75) < 0.01);
}

TEST_CASE("empirical rank frequencies match the ranking distribution") {
  const std::size_t n = 7;
  const double b = 1.5;
  std::vector<int> counts(n, 0);
  Rng rng(73);
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) ++counts[rank_index(n, b, rng.uniform())];
  double prev = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double expected = rank_cdf(static_cast<double>(i + 1),
                                     static_cast<double>(n), b) -
                            rank_cdf(static_cast<double>(i),
                                     static_cast<double>(n), b);
    const double freq = counts[i] / static_cast<double>(draws);
    CHECK(std::abs(freq - expected) < 0.01);
    CHECK(expected < prev + 1e-12);  // better ranks are likelier
    prev = expected;
  }
}

TEST_CASE("rank selection rejects an empty population") {
  CHECK_THROWS(rank_index(0, 1.5, 0.5));
}

TEST_CASE("an easy linear problem is solved in nearly every seed") {
  const Objective obj = make_onemax_objective(20);
  GaConfig cfg;
  cfg.population = 100;
  StopSpec stop = budget_stop(50000);
  stop.optimum = obj.known_optimum;
  int solved = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const RunRecord rec = ga_run(obj, cfg, stop, seed);
    if (rec.final_best == 20.0 && rec.stop_reason == "optimum") ++solved;
  }
  CHECK(solved >= 9);
}

TEST_CASE("every step costs exactly one evaluation") {
  const Objective obj = make_onemax_objective(12);
  GaConfig cfg;
  cfg.population = 25;
  const RunRecord rec = ga_run(obj, cfg, budget_stop(500), 5);
  // Trace rows sit on pseudo-generation boundaries of N steps each, so
  // the k-th row must account for exactly N + k*N evaluations.
  for (const auto& t : rec.trace)
    CHECK(t.evaluations == 25 * (t.generation + 1));
  CHECK(rec.evaluations == 500);  // per-step budget check is exact
  CHECK(rec.stop_reason == "budget");
  CHECK(rec.algorithm == "ga");
}

TEST_CASE("best fitness never degrades") {
  const Objective obj = make_checkerboard_objective(4);
  GaConfig cfg;
  cfg.population = 40;
  const RunRecord rec = ga_run(obj, cfg, budget_stop(4000), 9);
  REQUIRE(rec.trace.size() >= 2);
  for (std::size_t i = 1; i < rec.trace.size(); ++i)
    CHECK(rec.trace[i].best >= rec.trace[i - 1].best);
  CHECK(rec.final_best == rec.trace.back().best);
}

TEST_CASE("zero mutation closes the gene pool and ends in stagnation") {
  const Objective obj = make_onemax_objective(10);
  GaConfig cfg;
  cfg.population = 20;
  cfg.mutation_rate = 0.0;
  StopSpec stop = budget_stop(10000000);
  stop.stagnation_epsilon = 1e-9;
  const RunRecord rec = ga_run(obj, cfg, stop, 11);
  // Without mutation the population converges and freezes; the run must
  // terminate long before the huge budget.
  CHECK(rec.stop_reason == "stagnation");
  CHECK(rec.evaluations < 10000000);
}

TEST_CASE("equal seeds reproduce the run exactly") {
  const Objective obj = make_onemax_objective(15);
  GaConfig cfg;
  cfg.population = 30;
  const RunRecord a = ga_run(obj, cfg, budget_stop(900), 42);
  const RunRecord b = ga_run(obj, cfg, budget_stop(900), 42);
  CHECK(a.final_best == b.final_best);
  CHECK(a.best_genes == b.best_genes);
  CHECK(a.evaluations == b.evaluations);
  REQUIRE(a.trace.size() == b.trace.size());
  for (std::size_t i = 0; i < a.trace.size(); ++i)
    CHECK(a.trace[i].mean == b.trace[i].mean);
}

TEST_CASE("configuration errors are rejected up front") {
  const Objective obj = make_onemax_objective(6);
  const StopSpec stop = budget_stop(100);
  GaConfig cfg;
  cfg.population = 1;
  CHECK_THROWS(ga_run(obj, cfg, stop, 1));
  cfg.population = 10;
  cfg.rank_bias = 1.0;  // open at 1
  CHECK_THROWS(ga_run(obj, cfg, stop, 1));
  cfg.rank_bias = 2.5;
  CHECK_THROWS(ga_run(obj, cfg, stop, 1));
  cfg.rank_bias = 1.5;
  cfg.mutation_rate = 1.5;
  CHECK_THROWS(ga_run(obj, cfg, stop, 1));
  cfg.mutation_rate = -1.0;  // sentinel: use 1/n
  CHECK_NOTHROW(ga_run(obj, cfg, stop, 1));
}

TEST_CASE("parameters are echoed into the record") {
  const Objective obj = make_onemax_objective(8);
  GaConfig cfg;
  cfg.population = 16;
  cfg.mutation_rate = 0.25;
  cfg.rank_bias = 2.0;
  const RunRecord rec = ga_run(obj, cfg, budget_stop(64), 3);
  CHECK(rec.params == "mutation_rate=0.25 rank_bias=2");
  GaConfig def;
  def.population = 16;
  const RunRecord rec2 = ga_run(obj, def, budget_stop(64), 3);
  CHECK(rec2.params == "mutation_rate=0.125 rank_bias=1.5");
}
