#include "edanet/search.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "edanet/math_util.hpp"

namespace edanet {

namespace {

/// Families whose CPT would exceed this many cells are never proposed;
/// they would exhaust memory long before they could win on score.
constexpr std::size_t kMaxFamilyCells = std::size_t{1} << 22;

std::size_t effective_cap(const SearchOptions& opt, std::size_t var) {
  std::size_t cap = opt.hard_parent_limit;
  if (!opt.parent_caps.empty()) cap = std::min(cap, opt.parent_caps[var]);
  return cap;
}

struct Candidate {
  std::size_t from = 0, to = 0;
  bool is_delete = false;
  std::vector<std::size_t> parents_after;
  double score_after = 0.0;
};

class GreedySearch {
 public:
  GreedySearch(const Dataset& data, const ScoringConfig& cfg,
               const SearchOptions& opt, DagStructure initial,
               bool allow_delete)
      : data_(data),
        cfg_(cfg),
        opt_(opt),
        structure_(std::move(initial)),
        allow_delete_(allow_delete) {
    const std::size_t n = data_.cardinalities.size();
    if (structure_.size() != n)
      throw InvalidStructureError("search: structure/data size mismatch");
    if (!is_acyclic(structure_))
      throw InvalidStructureError("search: initial structure is cyclic");
    if (!opt_.parent_caps.empty() && opt_.parent_caps.size() != n)
      throw InvalidStructureError("search: parent_caps size mismatch");
    family_.resize(n);
    std::vector<Candidate> initial_families(n);
    for (std::size_t v = 0; v < n; ++v) {
      initial_families[v].to = v;
      initial_families[v].parents_after = structure_.parents[v];
    }
    score_batch(initial_families);
    for (std::size_t v = 0; v < n; ++v)
      family_[v] = initial_families[v].score_after;
  }

  DagStructure run() {
    for (;;) {
      std::vector<Candidate> cands = legal_moves();
      if (cands.empty()) break;
      score_batch(cands);
      const Candidate* best = nullptr;
      double best_delta = 0.0;
      for (const Candidate& c : cands) {
        const double delta = c.score_after - family_[c.to];
        // Strict improvement only; candidates come in (from,to) order, so
        // keeping the first of an exact tie picks the lowest pair.
        if (delta > best_delta) {
          best = &c;
          best_delta = delta;
        }
      }
      if (best == nullptr) break;
      if (best->is_delete)
        structure_.remove_arc(best->from, best->to);
      else
        structure_.add_arc(best->from, best->to);
      family_[best->to] = best->score_after;
    }
    return std::move(structure_);
  }

 private:
  /// reach[a][b]: a directed path a -> ... -> b exists (length >= 1).
  std::vector<std::vector<char>> reachability() const {
    const std::size_t n = structure_.size();
    std::vector<std::vector<std::size_t>> children(n);
    for (std::size_t v = 0; v < n; ++v)
      for (std::size_t p : structure_.parents[v]) children[p].push_back(v);
    std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
    std::vector<std::size_t> stack;
    for (std::size_t s = 0; s < n; ++s) {
      stack.assign(1, s);
      while (!stack.empty()) {
        const std::size_t cur = stack.back();
        stack.pop_back();
        for (std::size_t c : children[cur]) {
          if (!reach[s][c]) {
            reach[s][c] = 1;
            stack.push_back(c);
          }
        }
      }
    }
    return reach;
  }

  std::size_t family_cells(std::span<const std::size_t> parents,
                           std::size_t var) const {
    const auto& cards = data_.cardinalities;
    std::size_t cells = cards[var];
    for (std::size_t p : parents) {
      if (cells > kMaxFamilyCells / cards[p]) return kMaxFamilyCells + 1;
      cells *= cards[p];
    }
    return cells;
  }

  std::vector<Candidate> legal_moves() const {
    const std::size_t n = structure_.size();
    const auto reach = reachability();
    std::vector<Candidate> out;
    for (std::size_t from = 0; from < n; ++from) {
      for (std::size_t to = 0; to < n; ++to) {
        if (from == to) continue;
        const bool present = structure_.has_arc(from, to);
        if (!present) {
          if (structure_.parents[to].size() >= effective_cap(opt_, to))
            continue;
          if (reach[to][from]) continue;  // adding would close a cycle
          Candidate c;
          c.from = from;
          c.to = to;
          c.parents_after = structure_.parents[to];
          c.parents_after.insert(
              std::lower_bound(c.parents_after.begin(), c.parents_after.end(),
                               from),
              from);
          if (family_cells(c.parents_after, to) > kMaxFamilyCells) continue;
          out.push_back(std::move(c));
        } else if (allow_delete_) {
          Candidate c;
          c.from = from;
          c.to = to;
          c.is_delete = true;
          c.parents_after = structure_.parents[to];
          c.parents_after.erase(std::find(c.parents_after.begin(),
                                          c.parents_after.end(), from));
          out.push_back(std::move(c));
        }
      }
    }
    return out;
  }

  void score_batch(std::vector<Candidate>& cands) {
    std::vector<std::size_t> misses;
    for (std::size_t i = 0; i < cands.size(); ++i) {
      if (auto hit = cache_.find(cands[i].to, cands[i].parents_after)) {
        cands[i].score_after = *hit;
      } else {
        misses.push_back(i);
      }
    }
    std::vector<double> computed(misses.size());
    const std::int64_t m = static_cast<std::int64_t>(misses.size());
    if (opt_.parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
      for (std::int64_t k = 0; k < m; ++k) {
        const Candidate& c = cands[misses[static_cast<std::size_t>(k)]];
        computed[static_cast<std::size_t>(k)] =
            family_score(data_, c.to, c.parents_after, cfg_);
      }
    } else {
      for (std::int64_t k = 0; k < m; ++k) {
        const Candidate& c = cands[misses[static_cast<std::size_t>(k)]];
        computed[static_cast<std::size_t>(k)] =
            family_score(data_, c.to, c.parents_after, cfg_);
      }
    }
    for (std::size_t k = 0; k < misses.size(); ++k) {
      Candidate& c = cands[misses[k]];
      c.score_after = computed[k];
      cache_.insert(c.to, c.parents_after, computed[k]);
    }
  }

  const Dataset& data_;
  const ScoringConfig& cfg_;
  const SearchOptions& opt_;
  DagStructure structure_;
  bool allow_delete_ = false;
  std::vector<double> family_;
  ScoreCache cache_;
};

}  // namespace

DagStructure algorithm_b(const Dataset& data, const ScoringConfig& cfg,
                         const SearchOptions& opt) {
  GreedySearch search(data, cfg, opt,
                      DagStructure(data.cardinalities.size()),
                      /*allow_delete=*/false);
  return search.run();
}

DagStructure local_search(const Dataset& data, const ScoringConfig& cfg,
                          DagStructure initial, const SearchOptions& opt) {
  GreedySearch search(data, cfg, opt, std::move(initial),
                      /*allow_delete=*/true);
  return search.run();
}

CiTestResult chi_square_ci_test(const Dataset& data, std::size_t i,
                                std::size_t j,
                                std::span<const std::size_t> cond,
                                double alpha) {
  const auto& cards = data.cardinalities;
  const std::size_t n = cards.size();
  if (i >= n || j >= n || i == j)
    throw std::invalid_argument("chi_square_ci_test: bad variable pair");
  std::vector<std::size_t> cond_sorted(cond.begin(), cond.end());
  std::sort(cond_sorted.begin(), cond_sorted.end());
  if (std::adjacent_find(cond_sorted.begin(), cond_sorted.end()) !=
      cond_sorted.end())
    throw std::invalid_argument("chi_square_ci_test: duplicate conditioner");
  for (std::size_t c : cond_sorted)
    if (c >= n || c == i || c == j)
      throw std::invalid_argument("chi_square_ci_test: bad conditioner");

  CiTestResult res;
  res.i = i;
  res.j = j;
  res.cond = cond_sorted;

  const std::size_t ri = cards[i], rj = cards[j];
  const std::size_t q = config_count(cond_sorted, cards);
  const std::size_t cells = ri * rj;
  std::vector<std::uint32_t> counts(q * cells, 0);
  std::vector<std::uint32_t> stratum_n(q, 0);
  for (std::size_t row = 0; row < data.rows(); ++row) {
    const auto r = data.row(row);
    const std::size_t s = parent_configuration_index(cond_sorted, cards, r);
    counts[s * cells + static_cast<std::size_t>(r[i]) * rj +
           static_cast<std::size_t>(r[j])]++;
    stratum_n[s]++;
  }

  double statistic = 0.0;
  std::size_t df = 0;
  std::vector<double> row_marg(ri), col_marg(rj);
  for (std::size_t s = 0; s < q; ++s) {
    if (stratum_n[s] == 0) continue;  // empty stratum: df removed
    const std::uint32_t* tab = counts.data() + s * cells;
    std::fill(row_marg.begin(), row_marg.end(), 0.0);
    std::fill(col_marg.begin(), col_marg.end(), 0.0);
    for (std::size_t a = 0; a < ri; ++a)
      for (std::size_t b = 0; b < rj; ++b) {
        row_marg[a] += tab[a * rj + b];
        col_marg[b] += tab[a * rj + b];
      }
    const double ns = static_cast<double>(stratum_n[s]);
    std::size_t sparse_cells = 0;
    for (std::size_t a = 0; a < ri; ++a)
      for (std::size_t b = 0; b < rj; ++b) {
        const double expected = row_marg[a] * col_marg[b] / ns;
        if (expected < 5.0) ++sparse_cells;
        if (expected > 0.0) {
          const double diff = static_cast<double>(tab[a * rj + b]) - expected;
          statistic += diff * diff / expected;
        }
      }
    if (sparse_cells * 5 > cells) res.sparse = true;
    df += (ri - 1) * (rj - 1);
  }
  if (df == 0) {
    // No populated stratum (empty dataset): treat as independent.
    res.degrees_of_freedom = (ri - 1) * (rj - 1);
    res.p_value = 1.0;
    res.independent = true;
    return res;
  }
  res.statistic = statistic;
  res.degrees_of_freedom = df;
  res.p_value = chi_square_upper_tail(statistic, df);
  res.independent = res.p_value > alpha;
  return res;
}

namespace {

std::uint64_t pair_key(std::size_t a, std::size_t b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint64_t>(b);
}

bool directed_path(const std::vector<std::vector<char>>& dir, std::size_t from,
                   std::size_t to) {
  const std::size_t n = dir.size();
  std::vector<char> seen(n, 0);
  std::vector<std::size_t> stack{from};
  seen[from] = 1;
  while (!stack.empty()) {
    const std::size_t cur = stack.back();
    stack.pop_back();
    for (std::size_t next = 0; next < n; ++next) {
      if (!dir[cur][next] || seen[next]) continue;
      if (next == to) return true;
      seen[next] = 1;
      stack.push_back(next);
    }
  }
  return false;
}

/// Enumerate size-k subsets of `pool` (ascending) in lexicographic order,
/// invoking fn(subset); fn returns true to stop early.
template <typename Fn>
bool for_each_subset(const std::vector<std::size_t>& pool, std::size_t k,
                     Fn&& fn) {
  if (k > pool.size()) return false;
  std::vector<std::size_t> idx(k);
  for (std::size_t t = 0; t < k; ++t) idx[t] = t;
  std::vector<std::size_t> subset(k);
  for (;;) {
    for (std::size_t t = 0; t < k; ++t) subset[t] = pool[idx[t]];
    if (fn(subset)) return true;
    if (k == 0) return false;
    // advance the combination
    std::size_t t = k;
    while (t > 0) {
      --t;
      if (idx[t] != t + pool.size() - k) {
        ++idx[t];
        for (std::size_t u = t + 1; u < k; ++u) idx[u] = idx[u - 1] + 1;
        break;
      }
      if (t == 0) return false;
    }
  }
}

}  // namespace

PcResult pc_learn(const Dataset& data, const PcOptions& opt) {
  const std::size_t n = data.cardinalities.size();
  PcResult res;
  res.skeleton.assign(n, std::vector<char>(n, 0));
  std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (a != b) adj[a][b] = 1;
  std::map<std::uint64_t, std::vector<std::size_t>> sepset;

  auto neighbors_of = [&](std::size_t a, std::size_t skip) {
    std::vector<std::size_t> out;
    for (std::size_t b = 0; b < n; ++b)
      if (b != skip && adj[a][b]) out.push_back(b);
    return out;
  };

  // Skeleton: remove edges independent given some subset of a current
  // neighborhood, growing the conditioning order.
  for (std::size_t ord = 0; ord <= opt.max_cond_size; ++ord) {
    bool any_left = false;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (!adj[i][j]) continue;
        const std::vector<std::size_t> nbrs_i = neighbors_of(i, j);
        const std::vector<std::size_t> nbrs_j = neighbors_of(j, i);
        if (nbrs_i.size() > ord || nbrs_j.size() > ord) any_left = true;
        bool removed = false;
        auto try_sets = [&](const std::vector<std::size_t>& pool,
                            bool skip_seen) {
          return for_each_subset(
              pool, ord, [&](const std::vector<std::size_t>& s) {
                if (skip_seen) {
                  // already enumerated from the other side
                  bool seen = true;
                  for (std::size_t v : s)
                    if (!(v != j && adj[i][v])) { seen = false; break; }
                  if (seen) return false;
                }
                CiTestResult t = chi_square_ci_test(data, i, j, s, opt.alpha);
                ++res.tests_run;
                if (t.sparse) ++res.sparse_test_warnings;
                if (t.independent) {
                  adj[i][j] = adj[j][i] = 0;
                  sepset[pair_key(i, j)] = s;
                  return true;
                }
                return false;
              });
        };
        removed = try_sets(nbrs_i, false);
        if (!removed && ord > 0) removed = try_sets(nbrs_j, true);
        (void)removed;
      }
    }
    if (!any_left) break;
  }

  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) res.skeleton[a][b] = adj[a][b];

  // Orientation. dir[a][b] set means the edge is oriented a -> b; an edge
  // with neither direction set is still undirected.
  std::vector<std::vector<char>> dir(n, std::vector<char>(n, 0));
  auto undirected = [&](std::size_t a, std::size_t b) {
    return adj[a][b] && !dir[a][b] && !dir[b][a];
  };
  auto orient = [&](std::size_t a, std::size_t b) {
    if (!undirected(a, b)) return false;
    if (directed_path(dir, b, a)) return false;  // would close a cycle
    dir[a][b] = 1;
    return true;
  };

  // v-structures a -> c <- b for unshielded triples whose separating set
  // excludes the collider. Earlier orientations win on conflict.
  for (std::size_t a = 0; a + 1 < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      if (adj[a][b]) continue;
      const auto it = sepset.find(pair_key(a, b));
      if (it == sepset.end()) continue;
      for (std::size_t c = 0; c < n; ++c) {
        if (c == a || c == b || !adj[a][c] || !adj[b][c]) continue;
        if (std::find(it->second.begin(), it->second.end(), c) !=
            it->second.end())
          continue;
        if (dir[c][a] || dir[c][b]) continue;  // conflicting collider
        orient(a, c);
        orient(b, c);
      }
    }
  }

  // Meek's rules to a fixpoint: propagate orientations that every DAG in
  // the equivalence class must share.
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        if (!dir[a][b]) continue;
        // R1: a -> b, b - c, a and c non-adjacent  =>  b -> c
        for (std::size_t c = 0; c < n; ++c) {
          if (c == a || adj[a][c] || !undirected(b, c)) continue;
          changed |= orient(b, c);
        }
        // R2: a -> b -> c with a - c  =>  a -> c
        for (std::size_t c = 0; c < n; ++c) {
          if (!dir[b][c] || !undirected(a, c)) continue;
          changed |= orient(a, c);
        }
      }
    }
    // R3: a - b with two non-adjacent c, d, both a - c, a - d, c -> b,
    // d -> b  =>  a -> b
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        if (!undirected(a, b)) continue;
        bool fired = false;
        for (std::size_t c = 0; c < n && !fired; ++c) {
          if (!undirected(a, c) || !dir[c][b]) continue;
          for (std::size_t d = c + 1; d < n && !fired; ++d) {
            if (d == b || adj[c][d] || !undirected(a, d) || !dir[d][b])
              continue;
            fired = orient(a, b);
          }
        }
        changed |= fired;
      }
    }
  }

  // Deterministic extension: order the vertices by the directed part
  // (lowest index first among the ready ones) and orient what is left
  // along that order.
  std::vector<std::size_t> indeg(n, 0);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (dir[a][b]) ++indeg[b];
  std::vector<std::size_t> pos(n, 0), order;
  {
    std::vector<char> placed(n, 0);
    while (order.size() < n) {
      std::size_t pick = n;
      for (std::size_t v = 0; v < n; ++v)
        if (!placed[v] && indeg[v] == 0) { pick = v; break; }
      if (pick == n)
        throw InvalidStructureError("pc_learn: oriented graph has a cycle");
      placed[pick] = 1;
      pos[pick] = order.size();
      order.push_back(pick);
      for (std::size_t b = 0; b < n; ++b)
        if (dir[pick][b]) --indeg[b];
    }
  }

  res.dag = DagStructure(n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      if (!adj[a][b]) continue;
      std::size_t from = a, to = b;
      if (dir[b][a] || (!dir[a][b] && pos[b] < pos[a])) std::swap(from, to);
      res.dag.add_arc(from, to);
    }
  }
  if (!is_acyclic(res.dag))
    throw InvalidStructureError("pc_learn: extension produced a cycle");
  return res;
}

}  // namespace edanet
