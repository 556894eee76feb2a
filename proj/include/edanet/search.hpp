#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "edanet/bayesnet.hpp"
#include "edanet/scores.hpp"

namespace edanet {

struct SearchOptions {
  /// Per-variable parent caps (empty = no per-variable caps). Used by the
  /// penalized-K2 search, where the parent bound applies.
  std::vector<std::size_t> parent_caps;
  /// Hard limit bounding CPT size for any metric.
  std::size_t hard_parent_limit = 10;
  /// Fan candidate-family scoring out across threads. The serial path is
  /// kept as the reference; both produce identical structures.
  bool parallel = true;
};

/// Greedy construction from the arcless structure: repeatedly add the arc
/// with the largest score increase, stop when no addition improves.
/// Deterministic: score ties go to the lowest (from,to) pair.
DagStructure algorithm_b(const Dataset& data, const ScoringConfig& cfg,
                         const SearchOptions& opt = {});

/// Hill climbing over single-arc additions and deletions from `initial`.
/// Returns a structure scoring at least as well as the initial one.
DagStructure local_search(const Dataset& data, const ScoringConfig& cfg,
                          DagStructure initial, const SearchOptions& opt = {});

struct CiTestResult {
  std::size_t i = 0, j = 0;
  std::vector<std::size_t> cond;
  double statistic = 0.0;
  std::size_t degrees_of_freedom = 0;
  double p_value = 1.0;
  bool independent = true;
  /// Some stratum had expected counts below 5 in more than 20% of its
  /// cells. The stratum still contributes; callers count these.
  bool sparse = false;
};

/// Pearson chi-square test of X_i vs X_j within every configuration of
/// the conditioning set. Strata with no rows are skipped and their
/// degrees of freedom removed.
CiTestResult chi_square_ci_test(const Dataset& data, std::size_t i,
                                std::size_t j,
                                std::span<const std::size_t> cond,
                                double alpha);

struct PcOptions {
  double alpha = 0.01;
  /// Conditioning sets beyond this size are too sparse to test at
  /// population scale.
  std::size_t max_cond_size = 3;
};

struct PcResult {
  DagStructure dag;
  /// Undirected skeleton before orientation; skeleton[i][j] == 1 iff an
  /// edge survived the independence tests.
  std::vector<std::vector<char>> skeleton;
  long tests_run = 0;
  long sparse_test_warnings = 0;
};

/// PC algorithm: thin the complete graph with CI tests of growing
/// conditioning order, orient v-structures from the recorded separating
/// sets, close under Meek's rules, then extend to a DAG deterministically
/// (sampling needs a DAG, not a CPDAG).
PcResult pc_learn(const Dataset& data, const PcOptions& opt = {});

}  // namespace edanet
