#pragma once

#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "edanet/bayesnet.hpp"
#include "edanet/genome.hpp"

namespace edanet {

enum class ScoreMetric { bic, k2pen };

/// Penalty weight f(N) multiplying the dimension term of the penalized
/// marginal-likelihood score. AIC is f(N) = 1; the BIC-style weight is
/// log(N)/2; `constant` uses the stored value as-is.
struct PenaltySpec {
  enum class Kind { aic, bic_style, constant };
  Kind kind = Kind::aic;
  double value = 1.0;

  double operator()(std::size_t n_rows) const;

  static PenaltySpec aic() { return {Kind::aic, 1.0}; }
  static PenaltySpec bic_style() { return {Kind::bic_style, 0.0}; }
  static PenaltySpec constant(double c) { return {Kind::constant, c}; }
};

struct ScoringConfig {
  ScoreMetric metric = ScoreMetric::bic;
  PenaltySpec penalty = PenaltySpec::aic();  // used by k2pen only
};

/// Log-likelihood family term of the BIC score minus its penalty:
///   sum_jk N_ijk log(N_ijk/N_ij) - (log N)/2 (r_i - 1) q_i
/// with 0 log 0 = 0 and empty parent configurations contributing nothing.
double bic_family(const FamilyCounts& fc, std::size_t n_rows);

/// Family term of the K2 log marginal likelihood minus the explicit
/// penalty f(N)(r_i - 1) q_i. Entirely log-domain via lgamma:
///   sum_j [ log (r_i-1)! - log (N_ij+r_i-1)! + sum_k log N_ijk! ]
double k2pen_family(const FamilyCounts& fc, std::size_t n_rows,
                    const PenaltySpec& penalty);

/// Scores one family from raw data (counts computed here).
double family_score(const Dataset& data, std::size_t variable,
                    std::span<const std::size_t> parents,
                    const ScoringConfig& cfg);

/// Total decomposable score: sum of family scores. Throws
/// InvalidStructureError on a cyclic input.
double score_structure(const DagStructure& s, const Dataset& data,
                       const ScoringConfig& cfg);

/// Upper bound on the parent-set size of `variable` in any structure
/// maximizing the penalized K2 score, and the log-domain threshold the
/// bound was computed against. pa = n-1 means no restriction.
struct ParentBound {
  std::size_t pa = 0;
  double rhs = 0.0;
};

ParentBound parent_bound(std::size_t variable,
                         std::span<const Cardinality> cards,
                         std::size_t n_rows, const PenaltySpec& penalty);

/// Memo of family scores keyed by (variable, parent set). One instance
/// per structure search; not thread safe — searches batch their misses,
/// compute them in parallel, then insert single-threaded.
class ScoreCache {
 public:
  std::optional<double> find(std::size_t variable,
                             std::span<const std::size_t> parents) const;
  void insert(std::size_t variable, std::span<const std::size_t> parents,
              double score);
  std::size_t size() const { return map_.size(); }
  void clear() { map_.clear(); }

 private:
  static std::string key(std::size_t variable,
                         std::span<const std::size_t> parents);
  std::unordered_map<std::string, double> map_;
};

}  // namespace edanet
