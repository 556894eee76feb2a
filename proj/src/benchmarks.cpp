#include "edanet/benchmarks.hpp"

#include <cmath>
#include <stdexcept>

#include "edanet/rng.hpp"

namespace edanet {

SixPeaksSpec SixPeaksSpec::with_default_threshold(std::size_t n) {
  // floor(0.30 * n) computed in integers; 0.30 * 50.0 rounds below 15.
  return SixPeaksSpec{n, (30 * n) / 100};
}

double onemax(std::span<const Gene> x) {
  double sum = 0;
  for (Gene g : x) sum += g;
  return sum;
}

double checkerboard(std::span<const Gene> x, std::size_t s) {
  if (x.size() != s * s) {
    throw std::invalid_argument("checkerboard: dimension is not s*s");
  }
  const auto cell = [&](std::size_t i, std::size_t j) { return x[i * s + j]; };
  std::size_t agreements = 0;
  for (std::size_t i = 1; i + 1 < s; ++i) {
    for (std::size_t j = 1; j + 1 < s; ++j) {
      const Gene c = cell(i, j);
      agreements += (c == cell(i - 1, j)) + (c == cell(i + 1, j)) +
                    (c == cell(i, j - 1)) + (c == cell(i, j + 1));
    }
  }
  const double interior = static_cast<double>((s - 2) * (s - 2));
  return 4.0 * interior - static_cast<double>(agreements);
}

namespace {

std::size_t head_run(Gene b, std::span<const Gene> x) {
  std::size_t k = 0;
  while (k < x.size() && x[k] == b) ++k;
  return k;
}

std::size_t tail_run(Gene b, std::span<const Gene> x) {
  std::size_t k = 0;
  while (k < x.size() && x[x.size() - 1 - k] == b) ++k;
  return k;
}

}  // namespace

double sixpeaks(std::span<const Gene> x, const SixPeaksSpec& spec) {
  const std::size_t t = spec.t;
  const std::size_t n = x.size();
  const std::size_t head0 = head_run(0, x);
  const std::size_t head1 = head_run(1, x);
  const std::size_t tail0 = tail_run(0, x);
  const std::size_t tail1 = tail_run(1, x);
  const std::size_t peak = std::max({tail0, head1, tail1, head0});
  const bool bonus = (tail0 > t && head1 > t) || (tail1 > t && head0 > t);
  return static_cast<double>(peak) + (bonus ? static_cast<double>(n) : 0.0);
}

double equal_products(std::span<const Gene> x, const EqualProductsSpec& spec) {
  if (x.size() != spec.weights.size()) {
    throw std::invalid_argument("equal_products: dimension mismatch");
  }
  double selected = 1.0, unselected = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    (x[i] != 0 ? selected : unselected) *= spec.weights[i];
  }
  return std::abs(selected - unselected);
}

EqualProductsSpec make_equal_products(std::size_t n, std::uint64_t seed) {
  EqualProductsSpec spec;
  spec.seed = seed;
  spec.weights.resize(n);
  Rng rng(seed);
  for (double& w : spec.weights) w = 4.0 * rng.uniform();
  return spec;
}

namespace {

std::vector<Cardinality> binary_cards(std::size_t n) {
  return std::vector<Cardinality>(n, 2);
}

}  // namespace

Objective make_onemax_objective(std::size_t n) {
  Objective obj;
  obj.name = "onemax";
  obj.dimension = n;
  obj.cardinalities = binary_cards(n);
  obj.direction = Direction::maximize;
  obj.known_optimum = static_cast<double>(n);
  obj.eval = [](std::span<const Gene> x) { return onemax(x); };
  return obj;
}

Objective make_checkerboard_objective(std::size_t s) {
  Objective obj;
  obj.name = "checkerboard";
  obj.dimension = s * s;
  obj.cardinalities = binary_cards(s * s);
  obj.direction = Direction::maximize;
  obj.known_optimum = 4.0 * static_cast<double>((s - 2) * (s - 2));
  obj.eval = [s](std::span<const Gene> x) { return checkerboard(x, s); };
  return obj;
}

Objective make_sixpeaks_objective(std::size_t n) {
  return make_sixpeaks_objective(SixPeaksSpec::with_default_threshold(n));
}

Objective make_sixpeaks_objective(SixPeaksSpec spec) {
  if (spec.t == 0 || 2 * spec.t >= spec.n) {
    throw std::invalid_argument("sixpeaks: need 0 < t < n/2");
  }
  Objective obj;
  obj.name = "sixpeaks";
  obj.dimension = spec.n;
  obj.cardinalities = binary_cards(spec.n);
  obj.direction = Direction::maximize;
  // Best string: t+1 leading ones, the rest zeros. The run of n-t-1
  // zeros is the max term and both thresholds are exceeded.
  obj.known_optimum = static_cast<double>(2 * spec.n - spec.t - 1);
  obj.eval = [spec](std::span<const Gene> x) { return sixpeaks(x, spec); };
  return obj;
}

Objective make_equal_products_objective(std::size_t n, std::uint64_t seed) {
  Objective obj;
  obj.name = "equalproducts";
  obj.dimension = n;
  obj.cardinalities = binary_cards(n);
  obj.direction = Direction::minimize;
  obj.known_optimum = std::nullopt;  // instance optimum unknown
  EqualProductsSpec spec = make_equal_products(n, seed);
  obj.eval = [spec = std::move(spec)](std::span<const Gene> x) {
    return equal_products(x, spec);
  };
  return obj;
}

Objective make_objective(const std::string& name, std::size_t size,
                         std::uint64_t weights_seed) {
  if (name == "onemax") return make_onemax_objective(size);
  if (name == "checkerboard") return make_checkerboard_objective(size);
  if (name == "sixpeaks") return make_sixpeaks_objective(size);
  if (name == "equalproducts")
    return make_equal_products_objective(size, weights_seed);
  throw std::invalid_argument("unknown problem: " + name);
}

}  // namespace edanet
