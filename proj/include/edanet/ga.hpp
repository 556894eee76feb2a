#pragma once

#include <cstdint>

#include "edanet/eda.hpp"
#include "edanet/genome.hpp"
#include "edanet/rng.hpp"

namespace edanet {

/// Steady-state GA settings. Defaults follow common practice for this
/// family of GA: one child per step, linear rank selection, replacement
/// of the worst individual only by a strictly better child.
struct GaConfig {
  std::size_t population = 0;
  /// Per-gene mutation probability; negative means "use 1/n".
  double mutation_rate = -1.0;
  /// Linear ranking bias b in (1,2]: the best individual is drawn b
  /// times as often as the median rank.
  double rank_bias = 1.5;
};

/// Index drawn by the linear-ranking inverse CDF over ranks 0 (best) to
/// n-1 (worst); u is a uniform [0,1) variate. bias at its lower limit
/// degenerates to uniform selection.
std::size_t rank_index(std::size_t n, double bias, double u);

/// One-point crossover: genes [0,cut) from a, [cut,n) from b.
std::vector<Gene> one_point_cross(std::span<const Gene> a,
                                  std::span<const Gene> b, std::size_t cut);

/// One steady-state optimization run: each step draws two parents by
/// rank, builds one child by one-point crossover plus per-gene mutation,
/// evaluates it (one objective call), and replaces the worst individual
/// if the child beats it. Stop rules are shared with eda_run; the
/// stagnation window and the trace use pseudo-generations of N steps.
RunRecord ga_run(const Objective& obj, const GaConfig& cfg,
                 const StopSpec& stop, std::uint64_t seed);

}  // namespace edanet
