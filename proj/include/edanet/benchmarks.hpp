#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "edanet/genome.hpp"
#include "edanet/types.hpp"

namespace edanet {

struct SixPeaksSpec {
  std::size_t n = 0;
  std::size_t t = 0;  // threshold, floor(0.30 * n) by default

  static SixPeaksSpec with_default_threshold(std::size_t n);
};

struct EqualProductsSpec {
  std::vector<double> weights;  // each in [0,4]
  std::uint64_t seed = 0;
};

double onemax(std::span<const Gene> x);

/// Checkerboard score on an s x s grid stored row-major in x.
/// Counts, for every interior cell, the four neighbours that differ from
/// it; corners and borders are scored only through their interior
/// neighbours. Maximum is 4*(s-2)^2.
double checkerboard(std::span<const Gene> x, std::size_t s);

double sixpeaks(std::span<const Gene> x, const SixPeaksSpec& spec);

/// |product of selected weights - product of unselected weights|,
/// empty products counting as 1.
double equal_products(std::span<const Gene> x, const EqualProductsSpec& spec);

/// Draws n weights uniformly from [0,4]; deterministic per seed.
EqualProductsSpec make_equal_products(std::size_t n, std::uint64_t seed);

Objective make_onemax_objective(std::size_t n);
Objective make_checkerboard_objective(std::size_t s);
Objective make_sixpeaks_objective(std::size_t n);
Objective make_sixpeaks_objective(SixPeaksSpec spec);
Objective make_equal_products_objective(std::size_t n, std::uint64_t seed);

/// Problem lookup by name: onemax | checkerboard | sixpeaks | equalproducts.
/// For onemax/sixpeaks/equalproducts `size` is the dimension n; for
/// checkerboard it is the grid side s. Throws on unknown names.
Objective make_objective(const std::string& name, std::size_t size,
                         std::uint64_t weights_seed);

}  // namespace edanet
