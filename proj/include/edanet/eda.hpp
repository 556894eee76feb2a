#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "edanet/bayesnet.hpp"
#include "edanet/genome.hpp"
#include "edanet/rng.hpp"
#include "edanet/scores.hpp"
#include "edanet/search.hpp"

namespace edanet {

/// Model family learned each generation from the selected individuals.
enum class Strategy { umda, mimic, ebna_pc, ebna_bic, ebna_k2pen };

const char* strategy_name(Strategy s);
std::optional<Strategy> strategy_from_name(std::string_view name);

/// Configuration of the per-generation model learning step.
struct ModelBuilder {
  Strategy strategy = Strategy::umda;
  /// Seed the hill climb with the previous generation's structure
  /// (score-based strategies only); the first generation always starts
  /// from scratch.
  bool carry_forward = true;
  /// Penalty weight f(N) of the penalized marginal-likelihood metric.
  PenaltySpec k2_penalty = PenaltySpec::aic();
  PcOptions pc;
  std::size_t hard_parent_limit = 10;
  /// Fan model learning and scoring across threads where profitable.
  bool parallel = true;
  /// Keep the best individual found so far in the next population.
  bool elitism = false;
};

/// Stop rules; at least one must be active.
struct StopSpec {
  std::optional<std::uint64_t> max_evaluations;
  /// Stop when the mean fitness of consecutive generations improves by
  /// less than this (direction-aware).
  std::optional<double> stagnation_epsilon;
  /// Stop once the best individual reaches this value.
  std::optional<double> optimum;

  void validate() const;
};

struct GenerationTrace {
  std::size_t generation = 0;
  double best = 0.0;
  double mean = 0.0;
  std::uint64_t evaluations = 0;  // cumulative, after this generation
  std::size_t model_arcs = 0;
  std::string learner;  // uniform | umda | mimic | pc | greedy-add | hill-climb | ga
};

struct RunRecord {
  std::string problem;
  std::string algorithm;
  std::uint64_t seed = 0;
  std::size_t dimension = 0;
  std::size_t population = 0;
  std::size_t selection = 0;
  /// Echo of the algorithm-specific settings the run used.
  std::string params;
  std::vector<GenerationTrace> trace;
  double final_best = 0.0;
  std::vector<Gene> best_genes;
  std::uint64_t evaluations = 0;
  std::size_t generations = 0;
  std::string stop_reason;  // optimum | budget | stagnation
  double wall_ms = 0.0;
  long ci_sparse_warnings = 0;
};

/// Plug-in entropy of one column, in nats.
double empirical_entropy(const Dataset& data, std::size_t var);

/// Plug-in conditional entropy H(var | given), in nats.
double empirical_conditional_entropy(const Dataset& data, std::size_t var,
                                     std::size_t given);

/// Greedy chain permutation (pi_1, ..., pi_n): pi_n has minimum entropy,
/// then walking backwards each variable minimizes the conditional entropy
/// given its successor; pi_{j+1} is the chain parent of pi_j. Ties go to
/// the lowest variable index.
std::vector<std::size_t> mimic_permutation(const Dataset& data);

/// Arcless product-of-marginals model.
BayesianNetwork build_umda(const Dataset& selected);

/// Chain model over mimic_permutation(selected).
BayesianNetwork build_mimic(const Dataset& selected);

struct LearnedModel {
  BayesianNetwork net;
  std::string learner;
  long sparse_warnings = 0;
};

/// Learns one generation's model from the selected rows. `previous` (may
/// be null) is last generation's structure, used to seed hill climbing.
LearnedModel build_model(const Dataset& selected, const ModelBuilder& mb,
                         const DagStructure* previous);

/// Rows sampled from a model, wrapped as a generation-`index` population.
Population population_from_rows(const Dataset& rows, std::size_t index);

/// The common loop: sample an initial population from the uniform model,
/// then repeat select -> learn -> sample until a stop rule fires.
RunRecord eda_run(const Objective& obj, const ModelBuilder& mb,
                  std::size_t population, std::size_t selection,
                  const StopSpec& stop, std::uint64_t seed);

}  // namespace edanet
