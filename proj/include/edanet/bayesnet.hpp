#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "edanet/genome.hpp"
#include "edanet/rng.hpp"
#include "edanet/types.hpp"

namespace edanet {

/// Directed acyclic graph over n discrete variables, stored as per-variable
/// parent sets. Parent lists are kept sorted ascending; that order is what
/// fixes the mixed-radix parent-configuration index used everywhere below.
struct DagStructure {
  std::vector<std::vector<std::size_t>> parents;

  DagStructure() = default;
  explicit DagStructure(std::size_t n) : parents(n) {}

  std::size_t size() const { return parents.size(); }

  bool has_arc(std::size_t from, std::size_t to) const;
  /// Inserts keeping the parent list sorted. No cycle check here; callers
  /// guard with would_create_cycle or validate afterwards.
  void add_arc(std::size_t from, std::size_t to);
  void remove_arc(std::size_t from, std::size_t to);
  std::size_t arc_count() const;

  /// True if a directed path to ~> from already exists, so adding
  /// from->to would close a cycle.
  bool would_create_cycle(std::size_t from, std::size_t to) const;
};

bool is_acyclic(const DagStructure& s);

/// Permutation placing every variable after all its parents. Deterministic:
/// among the ready nodes the lowest index goes first. Throws
/// InvalidStructureError on a cycle.
std::vector<std::size_t> ancestral_ordering(const DagStructure& s);

/// Number of joint parent configurations for the given parent set.
std::size_t config_count(std::span<const std::size_t> parents,
                         std::span<const Cardinality> cards);

/// Mixed-radix index (0-based, in [0, q)) of the parent values in `row`.
/// Parents are taken in ascending variable order, the last one varying
/// fastest; an empty parent set always maps to 0.
std::size_t parent_configuration_index(std::span<const std::size_t> parents,
                                       std::span<const Cardinality> cards,
                                       std::span<const Gene> row);

/// Counts N_ijk for one family: counts[j*r + k] = number of rows with
/// X_i = k and the parents in configuration j. marginals[j] = N_ij.
struct FamilyCounts {
  std::size_t variable = 0;
  std::vector<std::size_t> parents;
  std::size_t q = 1;       // parent configurations
  Cardinality r = 2;       // values of the variable
  std::vector<std::uint32_t> counts;     // q * r
  std::vector<std::uint32_t> marginals;  // q
};

FamilyCounts count_family(const Dataset& data, std::size_t variable,
                          std::span<const std::size_t> parents);

/// Per-variable family counts for a whole structure.
using SufficientStats = std::vector<FamilyCounts>;

SufficientStats count_stats(const DagStructure& s, const Dataset& data);

/// DAG plus conditional probability tables. theta[i][j*r_i + k] is the
/// probability of X_i taking value k given parent configuration j; every
/// row sums to 1 and every entry is strictly positive.
struct BayesianNetwork {
  DagStructure structure;
  std::vector<Cardinality> cardinalities;
  std::vector<std::vector<double>> theta;

  std::size_t size() const { return structure.size(); }
};

/// Parameters by Laplace-style expectation (N_ijk + 1)/(N_ij + r_i),
/// strictly positive even on empty data (uniform 1/r_i).
BayesianNetwork estimate_parameters(const DagStructure& s,
                                    const Dataset& data);

/// Arcless network with uniform tables; what generation 0 samples from.
BayesianNetwork uniform_network(std::vector<Cardinality> cards);

/// Probabilistic logic sampling: rows generated variable-by-variable in
/// ancestral order, each gene by inverse CDF over its conditional
/// distribution. Exactly one uniform draw per gene.
Dataset pls_sample(const BayesianNetwork& net, std::size_t n_rows, Rng& rng);

/// Log-probability of one complete row under the network.
double log_probability(const BayesianNetwork& net, std::span<const Gene> row);

/// Throws unless theta rows are normalized and positive.
void validate_network(const BayesianNetwork& net, double tol = 1e-9);

/// Text dump, one line per variable:
///   var <i> parents <p1 p2 ...|-> : <theta row j=0> | <theta row j=1> | ...
/// with fixed 6-decimal probabilities. Consumed by tests and --dump-model.
std::string dump_network(const BayesianNetwork& net);

}  // namespace edanet
