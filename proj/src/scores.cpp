#include "edanet/scores.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace edanet {

double PenaltySpec::operator()(std::size_t n_rows) const {
  switch (kind) {
    case Kind::aic:
      return 1.0;
    case Kind::bic_style:
      return n_rows <= 1 ? 0.0 : std::log(static_cast<double>(n_rows)) / 2.0;
    case Kind::constant:
      return value;
  }
  return 1.0;
}

double bic_family(const FamilyCounts& fc, std::size_t n_rows) {
  double ll = 0.0;
  for (std::size_t j = 0; j < fc.q; ++j) {
    const double nij = fc.marginals[j];
    if (nij == 0.0) continue;
    for (Cardinality k = 0; k < fc.r; ++k) {
      const double nijk = fc.counts[j * fc.r + k];
      if (nijk > 0.0) ll += nijk * std::log(nijk / nij);
    }
  }
  const double log_n =
      n_rows <= 1 ? 0.0 : std::log(static_cast<double>(n_rows));
  const double penalty =
      (log_n / 2.0) * static_cast<double>(fc.r - 1) * static_cast<double>(fc.q);
  return ll - penalty;
}

double k2pen_family(const FamilyCounts& fc, std::size_t n_rows,
                    const PenaltySpec& penalty) {
  const double r = fc.r;
  double ml = 0.0;
  for (std::size_t j = 0; j < fc.q; ++j) {
    ml += std::lgamma(r) - std::lgamma(fc.marginals[j] + r);
    for (Cardinality k = 0; k < fc.r; ++k) {
      ml += std::lgamma(fc.counts[j * fc.r + k] + 1.0);
    }
  }
  const double dim = static_cast<double>(fc.r - 1) * static_cast<double>(fc.q);
  return ml - penalty(n_rows) * dim;
}

double family_score(const Dataset& data, std::size_t variable,
                    std::span<const std::size_t> parents,
                    const ScoringConfig& cfg) {
  const FamilyCounts fc = count_family(data, variable, parents);
  return cfg.metric == ScoreMetric::bic
             ? bic_family(fc, data.rows())
             : k2pen_family(fc, data.rows(), cfg.penalty);
}

double score_structure(const DagStructure& s, const Dataset& data,
                       const ScoringConfig& cfg) {
  if (!is_acyclic(s)) {
    throw InvalidStructureError("score_structure: cyclic structure");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    total += family_score(data, i, s.parents[i], cfg);
  }
  return total;
}

ParentBound parent_bound(std::size_t variable,
                         std::span<const Cardinality> cards,
                         std::size_t n_rows, const PenaltySpec& penalty) {
  const std::size_t n = cards.size();
  if (n < 2) throw std::invalid_argument("parent_bound: need n >= 2");
  const double f = penalty(n_rows);
  if (f <= 0.0) throw std::invalid_argument("parent_bound: f(N) must be > 0");

  const double ri = cards[variable];
  std::vector<double> others;
  others.reserve(n - 1);
  for (std::size_t v = 0; v < n; ++v) {
    if (v != variable) others.push_back(cards[v]);
  }
  std::sort(others.begin(), others.end());

  const double big_n = static_cast<double>(n_rows);
  const double m = std::floor(big_n / ri);
  const double l = big_n - m * ri;
  const double log_term = std::lgamma(big_n + 1.0) + std::lgamma(ri + l) -
                          std::lgamma(big_n + ri) +
                          m * (std::lgamma(2.0 * ri) - std::lgamma(ri));
  ParentBound out;
  out.rhs = log_term / ((ri - 1.0) * f);

  // Smallest pa where (product of the pa+1 smallest other cardinalities)
  // minus (product of the pa largest) clears the threshold.
  for (std::size_t pa = 0; pa + 1 < n; ++pa) {
    double low = 1.0, high = 1.0;
    for (std::size_t j = 0; j <= pa; ++j) low *= others[j];
    for (std::size_t j = 0; j < pa; ++j) high *= others[others.size() - 1 - j];
    if (low - high > out.rhs) {
      out.pa = pa;
      return out;
    }
  }
  out.pa = n - 1;  // inequality never satisfied: no restriction
  return out;
}

std::string ScoreCache::key(std::size_t variable,
                            std::span<const std::size_t> parents) {
  std::string k;
  k.reserve((parents.size() + 1) * sizeof(std::uint32_t));
  const auto push = [&k](std::size_t v) {
    const auto x = static_cast<std::uint32_t>(v);
    k.append(reinterpret_cast<const char*>(&x), sizeof x);
  };
  push(variable);
  for (std::size_t p : parents) push(p);
  return k;
}

std::optional<double> ScoreCache::find(
    std::size_t variable, std::span<const std::size_t> parents) const {
  const auto it = map_.find(key(variable, parents));
  if (it == map_.end()) return std::nullopt;
  return it->second;
}

void ScoreCache::insert(std::size_t variable,
                        std::span<const std::size_t> parents, double score) {
  map_.emplace(key(variable, parents), score);
}

}  // namespace edanet
