#include "edanet/ga.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "edanet/bayesnet.hpp"

namespace edanet {

std::size_t rank_index(std::size_t n, double bias, double u) {
  if (n == 0) throw std::invalid_argument("rank_index: empty population");
  double pos;
  if (bias <= 1.0 + 1e-12) {
    pos = static_cast<double>(n) * u;  // uniform limit
  } else {
    pos = static_cast<double>(n) *
          (bias - std::sqrt(bias * bias - 4.0 * (bias - 1.0) * u)) /
          (2.0 * (bias - 1.0));
  }
  auto idx = static_cast<std::size_t>(pos);
  return idx >= n ? n - 1 : idx;
}

std::vector<Gene> one_point_cross(std::span<const Gene> a,
                                  std::span<const Gene> b, std::size_t cut) {
  std::vector<Gene> child(a.begin(), a.end());
  std::copy(b.begin() + static_cast<std::ptrdiff_t>(cut), b.end(),
            child.begin() + static_cast<std::ptrdiff_t>(cut));
  return child;
}

RunRecord ga_run(const Objective& obj, const GaConfig& cfg,
                 const StopSpec& stop, std::uint64_t seed) {
  stop.validate();
  if (cfg.population < 2)
    throw std::invalid_argument("ga_run: population must be at least 2");
  if (!(cfg.rank_bias > 1.0 && cfg.rank_bias <= 2.0))
    throw std::invalid_argument("ga_run: rank bias must lie in (1,2]");
  const std::size_t n = obj.dimension;
  const double mutation =
      cfg.mutation_rate < 0.0 ? 1.0 / static_cast<double>(n)
                              : cfg.mutation_rate;
  if (mutation < 0.0 || mutation > 1.0)
    throw std::invalid_argument("ga_run: mutation rate must lie in [0,1]");
  const auto t0 = std::chrono::steady_clock::now();

  RunRecord rec;
  rec.problem = obj.name;
  rec.algorithm = "ga";
  rec.seed = seed;
  rec.dimension = n;
  rec.population = cfg.population;
  rec.selection = 0;
  {
    char buf[96];
    std::snprintf(buf, sizeof buf, "mutation_rate=%g rank_bias=%g", mutation,
                  cfg.rank_bias);
    rec.params = buf;
  }

  Rng rng(seed);

  Population pop = population_from_rows(
      pls_sample(uniform_network(obj.cardinalities), cfg.population, rng), 0);
  rec.evaluations += evaluate_population(pop, obj);
  std::vector<Individual>& members = pop.members;
  std::stable_sort(members.begin(), members.end(),
                   [&](const Individual& a, const Individual& b) {
                     return obj.strictly_better(*a.fitness, *b.fitness);
                   });

  double best = *members.front().fitness;
  std::vector<Gene> best_genes = members.front().genes;
  auto mean_fitness = [&] {
    double sum = 0.0;
    for (const Individual& ind : members) sum += *ind.fitness;
    return sum / static_cast<double>(members.size());
  };

  rec.trace.push_back({0, best, mean_fitness(), rec.evaluations, 0, "ga"});

  std::string reason;
  std::uint64_t steps = 0;
  for (;;) {
    if (stop.optimum && obj.at_least_as_good(best, *stop.optimum)) {
      reason = "optimum";
      break;
    }
    if (stop.max_evaluations && rec.evaluations >= *stop.max_evaluations) {
      reason = "budget";
      break;
    }

    const Individual& p1 = members[rank_index(members.size(), cfg.rank_bias,
                                              rng.uniform())];
    const Individual& p2 = members[rank_index(members.size(), cfg.rank_bias,
                                              rng.uniform())];
    Individual child;
    if (n >= 2) {
      const std::size_t cut = 1 + rng.uniform_int(n - 1);
      child.genes = one_point_cross(p1.genes, p2.genes, cut);
    } else {
      child.genes = p1.genes;
    }
    for (std::size_t g = 0; g < n; ++g) {
      if (rng.uniform() < mutation) {
        const Cardinality r = obj.cardinalities[g];
        child.genes[g] = static_cast<Gene>(
            (child.genes[g] + 1 + rng.uniform_int(r - 1)) % r);
      }
    }
    child.fitness = obj.eval(child.genes);
    ++rec.evaluations;
    ++steps;

    if (obj.strictly_better(*child.fitness, *members.back().fitness)) {
      members.pop_back();
      auto at = std::find_if(members.begin(), members.end(),
                             [&](const Individual& m) {
                               return obj.strictly_better(*child.fitness,
                                                          *m.fitness);
                             });
      if (obj.strictly_better(*child.fitness, best)) {
        best = *child.fitness;
        best_genes = child.genes;
      }
      members.insert(at, std::move(child));
    }

    if (steps % cfg.population == 0) {
      const std::size_t gen = static_cast<std::size_t>(steps / cfg.population);
      rec.trace.push_back(
          {gen, best, mean_fitness(), rec.evaluations, 0, "ga"});
      if (stop.stagnation_epsilon) {
        const double cur = rec.trace[rec.trace.size() - 1].mean;
        const double prev = rec.trace[rec.trace.size() - 2].mean;
        if (std::abs(cur - prev) < *stop.stagnation_epsilon) {
          reason = "stagnation";
          break;
        }
      }
    }
  }

  rec.generations = rec.trace.back().generation;
  rec.final_best = best;
  rec.best_genes = std::move(best_genes);
  rec.stop_reason = reason;
  rec.wall_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
  return rec;
}

}  // namespace edanet
