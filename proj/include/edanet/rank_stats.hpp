#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "edanet/types.hpp"

namespace edanet {

/// Final objective values of one algorithm, one per run.
struct SampleGroup {
  std::string label;
  std::vector<double> values;
};

struct KruskalWallisResult {
  double h = 0.0;
  double p = 1.0;
  bool reject = false;
};

/// Kruskal-Wallis one-way rank test:
///   H = [12/(N(N+1)) * sum_j R_j^2/n_j - 3(N+1)] / (1 - sum_t T/(N^3-N))
/// with midranks for ties. p is the chi-square upper tail at k-1 degrees
/// of freedom; reject means p < alpha. If every value is tied the tie
/// divisor vanishes and H is defined as 0 (no evidence of difference).
/// Throws std::invalid_argument on fewer than 2 groups, an empty group,
/// or fewer than 3 values in total.
KruskalWallisResult kruskal_wallis(const std::vector<SampleGroup>& groups,
                                   double alpha);

struct RankEntry {
  std::string label;
  double mean = 0.0;
  /// 1-based; algorithms sharing a number are not significantly
  /// separated from the chain above them.
  std::size_t group_number = 1;
};

/// Entries ordered best-first by mean value.
struct RankTable {
  std::vector<RankEntry> entries;
};

/// Ranks algorithms by mean value (best first under `direction`), tests
/// each adjacent pair with kruskal_wallis, and numbers the table: the
/// best algorithm gets 1; each next algorithm keeps its predecessor's
/// number when the adjacent test does not reject, otherwise it gets its
/// own 1-based rank position.
RankTable pairwise_rank_grouping(const std::vector<SampleGroup>& groups,
                                 double alpha, Direction direction);

}  // namespace edanet
