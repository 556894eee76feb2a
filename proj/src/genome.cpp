#include "edanet/genome.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace edanet {

void validate_population(const Population& pop, const Objective& obj) {
  for (std::size_t m = 0; m < pop.members.size(); ++m) {
    const auto& genes = pop.members[m].genes;
    if (genes.size() != obj.dimension) {
      throw InvalidIndividualError("individual " + std::to_string(m) +
                                   " has wrong gene count");
    }
    for (std::size_t i = 0; i < genes.size(); ++i) {
      if (genes[i] >= obj.cardinalities[i]) {
        throw InvalidIndividualError(
            "individual " + std::to_string(m) + ": gene " + std::to_string(i) +
            " value " + std::to_string(genes[i]) + " out of range");
      }
    }
  }
}

std::size_t evaluate_population(Population& pop, const Objective& obj) {
  validate_population(pop, obj);
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(pop.members.size());
  std::size_t evaluated = 0;
#pragma omp parallel for schedule(static) reduction(+ : evaluated)
  for (std::ptrdiff_t m = 0; m < n; ++m) {
    Individual& ind = pop.members[m];
    if (!ind.fitness) {
      ind.fitness = obj.eval(std::span<const Gene>(ind.genes));
      ++evaluated;
    }
  }
  return evaluated;
}

std::size_t evaluate_population_serial(Population& pop, const Objective& obj) {
  validate_population(pop, obj);
  std::size_t evaluated = 0;
  for (Individual& ind : pop.members) {
    if (!ind.fitness) {
      ind.fitness = obj.eval(std::span<const Gene>(ind.genes));
      ++evaluated;
    }
  }
  return evaluated;
}

Dataset truncation_select(const Population& pop, std::size_t se,
                          const Objective& obj) {
  if (se == 0 || se > pop.members.size()) {
    throw std::invalid_argument("truncation_select: Se out of range");
  }
  for (const Individual& ind : pop.members) {
    if (!ind.fitness) {
      throw std::runtime_error("truncation_select: unevaluated member");
    }
  }
  std::vector<std::size_t> order(pop.members.size());
  std::iota(order.begin(), order.end(), 0);
  // stable_sort keeps position order among equal fitnesses.
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return obj.strictly_better(*pop.members[a].fitness,
                                                *pop.members[b].fitness);
                   });
  Dataset out(obj.cardinalities);
  out.cells.reserve(se * obj.dimension);
  for (std::size_t k = 0; k < se; ++k) {
    out.append_row(pop.members[order[k]].genes);
  }
  return out;
}

}  // namespace edanet
