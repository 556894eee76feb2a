#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "edanet/types.hpp"

namespace edanet {

/// Fixed-length string of discrete genes plus a cached fitness.
/// The fitness stays unset until the individual is evaluated; selection
/// refuses to run on unevaluated members.
struct Individual {
  std::vector<Gene> genes;
  std::optional<double> fitness;

  Individual() = default;
  explicit Individual(std::vector<Gene> g) : genes(std::move(g)) {}
};

struct Population {
  std::vector<Individual> members;
  std::size_t generation_index = 0;
};

/// Evaluation interface shared by all benchmarks: dimension, per-gene
/// cardinalities, optimization direction and (when known) the optimum.
struct Objective {
  std::string name;
  std::size_t dimension = 0;
  std::vector<Cardinality> cardinalities;
  Direction direction = Direction::maximize;
  std::optional<double> known_optimum;
  std::function<double(std::span<const Gene>)> eval;

  /// a is at least as good as b under this objective's direction.
  bool at_least_as_good(double a, double b) const {
    return direction == Direction::maximize ? a >= b : a <= b;
  }
  bool strictly_better(double a, double b) const {
    return direction == Direction::maximize ? a > b : a < b;
  }
  bool reaches_optimum(double v) const {
    return known_optimum && at_least_as_good(v, *known_optimum);
  }
};

/// N rows of gene values plus the per-variable cardinalities.
/// Row-major storage; rows are what selection hands to the model builders.
struct Dataset {
  std::vector<Cardinality> cardinalities;
  std::vector<Gene> cells;  // rows() * cols() values, row-major

  Dataset() = default;
  explicit Dataset(std::vector<Cardinality> cards)
      : cardinalities(std::move(cards)) {}

  std::size_t cols() const { return cardinalities.size(); }
  std::size_t rows() const {
    return cols() == 0 ? 0 : cells.size() / cols();
  }
  std::span<const Gene> row(std::size_t r) const {
    return {cells.data() + r * cols(), cols()};
  }
  void append_row(std::span<const Gene> genes) {
    cells.insert(cells.end(), genes.begin(), genes.end());
  }
};

/// Checks gene bounds for every member; throws InvalidIndividualError.
void validate_population(const Population& pop, const Objective& obj);

/// Evaluates every member that has no cached fitness. Returns the number
/// of objective calls spent (previously evaluated members cost nothing).
/// Evaluation fans out across members; objective functions must be pure.
std::size_t evaluate_population(Population& pop, const Objective& obj);

/// Single-threaded reference path, kept for tests and the benchmark
/// target. Must be observably identical to evaluate_population.
std::size_t evaluate_population_serial(Population& pop, const Objective& obj);

/// Returns the Se best members as a dataset of gene rows. Ties are broken
/// by position index (earlier member wins), so results are reproducible.
/// Throws if any member is unevaluated or Se is out of range.
Dataset truncation_select(const Population& pop, std::size_t se,
                          const Objective& obj);

}  // namespace edanet
