#include "edanet/bayesnet.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace edanet {

bool DagStructure::has_arc(std::size_t from, std::size_t to) const {
  const auto& pa = parents[to];
  return std::binary_search(pa.begin(), pa.end(), from);
}

void DagStructure::add_arc(std::size_t from, std::size_t to) {
  if (from == to) throw InvalidStructureError("self-parent arc");
  auto& pa = parents[to];
  const auto it = std::lower_bound(pa.begin(), pa.end(), from);
  if (it != pa.end() && *it == from) {
    throw InvalidStructureError("duplicate parent arc");
  }
  pa.insert(it, from);
}

void DagStructure::remove_arc(std::size_t from, std::size_t to) {
  auto& pa = parents[to];
  const auto it = std::lower_bound(pa.begin(), pa.end(), from);
  if (it == pa.end() || *it != from) {
    throw InvalidStructureError("removing a missing arc");
  }
  pa.erase(it);
}

std::size_t DagStructure::arc_count() const {
  std::size_t total = 0;
  for (const auto& pa : parents) total += pa.size();
  return total;
}

bool DagStructure::would_create_cycle(std::size_t from, std::size_t to) const {
  if (from == to) return true;
  // DFS over child arcs starting at `to`, looking for `from`.
  std::vector<char> seen(size(), 0);
  std::vector<std::size_t> stack{to};
  seen[to] = 1;
  while (!stack.empty()) {
    const std::size_t u = stack.back();
    stack.pop_back();
    if (u == from) return true;
    for (std::size_t v = 0; v < size(); ++v) {
      if (!seen[v] && has_arc(u, v)) {
        seen[v] = 1;
        stack.push_back(v);
      }
    }
  }
  return false;
}

std::vector<std::size_t> ancestral_ordering(const DagStructure& s) {
  const std::size_t n = s.size();
  std::vector<std::size_t> missing(n);
  for (std::size_t i = 0; i < n; ++i) missing[i] = s.parents[i].size();
  std::vector<char> placed(n, 0);
  std::vector<std::size_t> order;
  order.reserve(n);
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t pick = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (!placed[i] && missing[i] == 0) {
        pick = i;
        break;
      }
    }
    if (pick == n) throw InvalidStructureError("cycle detected");
    placed[pick] = 1;
    order.push_back(pick);
    for (std::size_t v = 0; v < n; ++v) {
      if (!placed[v] && s.has_arc(pick, v)) --missing[v];
    }
  }
  return order;
}

bool is_acyclic(const DagStructure& s) {
  try {
    ancestral_ordering(s);
    return true;
  } catch (const InvalidStructureError&) {
    return false;
  }
}

std::size_t config_count(std::span<const std::size_t> parents,
                         std::span<const Cardinality> cards) {
  std::size_t q = 1;
  for (std::size_t p : parents) {
    q *= cards[p];
    if (q > (1u << 24)) {
      throw std::runtime_error("parent configuration table too large");
    }
  }
  return q;
}

std::size_t parent_configuration_index(std::span<const std::size_t> parents,
                                       std::span<const Cardinality> cards,
                                       std::span<const Gene> row) {
  std::size_t j = 0;
  for (std::size_t p : parents) j = j * cards[p] + row[p];
  return j;
}

FamilyCounts count_family(const Dataset& data, std::size_t variable,
                          std::span<const std::size_t> parents) {
  FamilyCounts fc;
  fc.variable = variable;
  fc.parents.assign(parents.begin(), parents.end());
  fc.r = data.cardinalities[variable];
  fc.q = config_count(parents, data.cardinalities);
  fc.counts.assign(fc.q * fc.r, 0);
  fc.marginals.assign(fc.q, 0);
  const std::size_t rows = data.rows();
  for (std::size_t row_idx = 0; row_idx < rows; ++row_idx) {
    const auto row = data.row(row_idx);
    const std::size_t j =
        parent_configuration_index(parents, data.cardinalities, row);
    ++fc.counts[j * fc.r + row[variable]];
    ++fc.marginals[j];
  }
  return fc;
}

SufficientStats count_stats(const DagStructure& s, const Dataset& data) {
  SufficientStats stats;
  stats.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    stats.push_back(count_family(data, i, s.parents[i]));
  }
  return stats;
}

BayesianNetwork estimate_parameters(const DagStructure& s,
                                    const Dataset& data) {
  BayesianNetwork net;
  net.structure = s;
  net.cardinalities = data.cardinalities;
  net.theta.resize(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const FamilyCounts fc = count_family(data, i, s.parents[i]);
    auto& theta = net.theta[i];
    theta.resize(fc.q * fc.r);
    for (std::size_t j = 0; j < fc.q; ++j) {
      const double denom =
          static_cast<double>(fc.marginals[j]) + static_cast<double>(fc.r);
      for (Cardinality k = 0; k < fc.r; ++k) {
        theta[j * fc.r + k] =
            (static_cast<double>(fc.counts[j * fc.r + k]) + 1.0) / denom;
      }
    }
  }
  return net;
}

BayesianNetwork uniform_network(std::vector<Cardinality> cards) {
  Dataset empty(cards);
  return estimate_parameters(DagStructure(cards.size()), empty);
}

Dataset pls_sample(const BayesianNetwork& net, std::size_t n_rows, Rng& rng) {
  const std::size_t n = net.size();
  const std::vector<std::size_t> order = ancestral_ordering(net.structure);
  Dataset out(net.cardinalities);
  out.cells.reserve(n_rows * n);
  std::vector<Gene> row(n, 0);
  for (std::size_t sample = 0; sample < n_rows; ++sample) {
    for (std::size_t pos = 0; pos < n; ++pos) {
      const std::size_t i = order[pos];
      const Cardinality r = net.cardinalities[i];
      const std::size_t j = parent_configuration_index(
          net.structure.parents[i], net.cardinalities, row);
      const double* dist = net.theta[i].data() + j * r;
      const double u = rng.uniform();
      double acc = 0.0;
      Gene value = static_cast<Gene>(r - 1);  // guards roundoff at u ~ 1
      for (Cardinality k = 0; k < r; ++k) {
        acc += dist[k];
        if (u < acc) {
          value = static_cast<Gene>(k);
          break;
        }
      }
      row[i] = value;
    }
    out.append_row(row);
  }
  return out;
}

double log_probability(const BayesianNetwork& net, std::span<const Gene> row) {
  double lp = 0.0;
  for (std::size_t i = 0; i < net.size(); ++i) {
    const Cardinality r = net.cardinalities[i];
    const std::size_t j = parent_configuration_index(
        net.structure.parents[i], net.cardinalities, row);
    lp += std::log(net.theta[i][j * r + row[i]]);
  }
  return lp;
}

void validate_network(const BayesianNetwork& net, double tol) {
  if (!is_acyclic(net.structure)) {
    throw InvalidStructureError("network structure has a cycle");
  }
  for (std::size_t i = 0; i < net.size(); ++i) {
    const Cardinality r = net.cardinalities[i];
    const std::size_t q = net.theta[i].size() / r;
    for (std::size_t j = 0; j < q; ++j) {
      double sum = 0.0;
      for (Cardinality k = 0; k < r; ++k) {
        const double p = net.theta[i][j * r + k];
        if (p <= 0.0) throw std::runtime_error("theta entry not positive");
        sum += p;
      }
      if (std::abs(sum - 1.0) > tol) {
        throw std::runtime_error("theta row not normalized");
      }
    }
  }
}

std::string dump_network(const BayesianNetwork& net) {
  std::string out;
  char buf[32];
  for (std::size_t i = 0; i < net.size(); ++i) {
    out += "var " + std::to_string(i) + " parents";
    if (net.structure.parents[i].empty()) {
      out += " -";
    } else {
      for (std::size_t p : net.structure.parents[i]) {
        out += ' ';
        out += std::to_string(p);
      }
    }
    out += " :";
    const Cardinality r = net.cardinalities[i];
    const std::size_t q = net.theta[i].size() / r;
    for (std::size_t j = 0; j < q; ++j) {
      if (j > 0) out += " |";
      for (Cardinality k = 0; k < r; ++k) {
        std::snprintf(buf, sizeof buf, " %.6f", net.theta[i][j * r + k]);
        out += buf;
      }
    }
    out += '\n';
  }
  return out;
}

}  // namespace edanet
