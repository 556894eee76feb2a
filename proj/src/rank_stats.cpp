#include "edanet/rank_stats.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "edanet/math_util.hpp"

namespace edanet {

KruskalWallisResult kruskal_wallis(const std::vector<SampleGroup>& groups,
                                   double alpha) {
  if (groups.size() < 2)
    throw std::invalid_argument("kruskal_wallis: need at least 2 groups");
  std::size_t total = 0;
  for (const SampleGroup& g : groups) {
    if (g.values.empty())
      throw std::invalid_argument("kruskal_wallis: empty group");
    total += g.values.size();
  }
  if (total < 3)
    throw std::invalid_argument("kruskal_wallis: need at least 3 values");

  struct Tagged {
    double value;
    std::size_t group;
  };
  std::vector<Tagged> pool;
  pool.reserve(total);
  for (std::size_t g = 0; g < groups.size(); ++g)
    for (double v : groups[g].values) pool.push_back({v, g});
  std::sort(pool.begin(), pool.end(),
            [](const Tagged& a, const Tagged& b) { return a.value < b.value; });

  // Midranks: every member of a tie run gets the average of the spanned
  // rank positions. T accumulates t^3 - t per run for the correction.
  std::vector<double> rank_sum(groups.size(), 0.0);
  double tie_sum = 0.0;
  for (std::size_t lo = 0; lo < total;) {
    std::size_t hi = lo + 1;
    while (hi < total && pool[hi].value == pool[lo].value) ++hi;
    const double t = static_cast<double>(hi - lo);
    const double midrank = (static_cast<double>(lo + 1) +
                            static_cast<double>(hi)) / 2.0;
    for (std::size_t k = lo; k < hi; ++k)
      rank_sum[pool[k].group] += midrank;
    tie_sum += t * t * t - t;
    lo = hi;
  }

  const double n = static_cast<double>(total);
  const double divisor = 1.0 - tie_sum / (n * n * n - n);
  KruskalWallisResult res;
  if (divisor <= 0.0) {
    // Every value identical: no rank information at all.
    res.h = 0.0;
    res.p = 1.0;
    res.reject = false;
    return res;
  }
  double h = 0.0;
  for (std::size_t g = 0; g < groups.size(); ++g)
    h += rank_sum[g] * rank_sum[g] /
         static_cast<double>(groups[g].values.size());
  h = 12.0 / (n * (n + 1.0)) * h - 3.0 * (n + 1.0);
  h /= divisor;
  if (h < 0.0) h = 0.0;  // guard tiny negative roundoff
  res.h = h;
  res.p = chi_square_upper_tail(h, groups.size() - 1);
  res.reject = res.p < alpha;
  return res;
}

RankTable pairwise_rank_grouping(const std::vector<SampleGroup>& groups,
                                 double alpha, Direction direction) {
  if (groups.size() < 2)
    throw std::invalid_argument("pairwise_rank_grouping: need 2+ groups");
  for (const SampleGroup& g : groups)
    if (g.values.empty())
      throw std::invalid_argument("pairwise_rank_grouping: empty group");

  std::vector<std::size_t> order(groups.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> means(groups.size());
  for (std::size_t g = 0; g < groups.size(); ++g)
    means[g] = std::accumulate(groups[g].values.begin(),
                               groups[g].values.end(), 0.0) /
               static_cast<double>(groups[g].values.size());
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return direction == Direction::maximize
                                ? means[a] > means[b]
                                : means[a] < means[b];
                   });

  RankTable table;
  table.entries.resize(groups.size());
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    RankEntry& e = table.entries[pos];
    e.label = groups[order[pos]].label;
    e.mean = means[order[pos]];
    if (pos == 0) {
      e.group_number = 1;
      continue;
    }
    const KruskalWallisResult adjacent = kruskal_wallis(
        {groups[order[pos - 1]], groups[order[pos]]}, alpha);
    e.group_number = adjacent.reject ? pos + 1
                                     : table.entries[pos - 1].group_number;
  }
  return table;
}

}  // namespace edanet
