#include "edanet/eda.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace edanet {

const char* strategy_name(Strategy s) {
  switch (s) {
    case Strategy::umda: return "umda";
    case Strategy::mimic: return "mimic";
    case Strategy::ebna_pc: return "ebna-pc";
    case Strategy::ebna_bic: return "ebna-bic";
    case Strategy::ebna_k2pen: return "ebna-k2pen";
  }
  return "?";
}

std::optional<Strategy> strategy_from_name(std::string_view name) {
  if (name == "umda") return Strategy::umda;
  if (name == "mimic") return Strategy::mimic;
  if (name == "ebna-pc") return Strategy::ebna_pc;
  if (name == "ebna-bic") return Strategy::ebna_bic;
  if (name == "ebna-k2pen") return Strategy::ebna_k2pen;
  return std::nullopt;
}

void StopSpec::validate() const {
  if (!max_evaluations && !stagnation_epsilon && !optimum)
    throw std::invalid_argument("StopSpec: no stop rule active");
  if (max_evaluations && *max_evaluations == 0)
    throw std::invalid_argument("StopSpec: zero evaluation budget");
}

double empirical_entropy(const Dataset& data, std::size_t var) {
  const std::size_t r = data.cardinalities[var];
  std::vector<std::size_t> count(r, 0);
  for (std::size_t i = 0; i < data.rows(); ++i)
    count[data.row(i)[var]]++;
  const double n = static_cast<double>(data.rows());
  if (n == 0) return 0.0;
  // -sum (c/n) log(c/n) = log n - (1/n) sum c log c
  double clogc = 0.0;
  for (std::size_t c : count)
    if (c > 0) clogc += static_cast<double>(c) * std::log(static_cast<double>(c));
  return std::log(n) - clogc / n;
}

double empirical_conditional_entropy(const Dataset& data, std::size_t var,
                                     std::size_t given) {
  const std::size_t rv = data.cardinalities[var];
  const std::size_t rg = data.cardinalities[given];
  std::vector<std::size_t> joint(rv * rg, 0), marg(rg, 0);
  for (std::size_t i = 0; i < data.rows(); ++i) {
    const auto row = data.row(i);
    joint[static_cast<std::size_t>(row[var]) * rg + row[given]]++;
    marg[row[given]]++;
  }
  const double n = static_cast<double>(data.rows());
  if (n == 0) return 0.0;
  // H(X|Y) = H(X,Y) - H(Y); both via log n - (1/n) sum c log c, the
  // log n terms cancel.
  double joint_clogc = 0.0, marg_clogc = 0.0;
  for (std::size_t c : joint)
    if (c > 0) joint_clogc += static_cast<double>(c) * std::log(static_cast<double>(c));
  for (std::size_t c : marg)
    if (c > 0) marg_clogc += static_cast<double>(c) * std::log(static_cast<double>(c));
  return (marg_clogc - joint_clogc) / n;
}

std::vector<std::size_t> mimic_permutation(const Dataset& data) {
  const std::size_t n = data.cols();
  if (n == 0) return {};
  std::vector<char> used(n, 0);
  std::vector<std::size_t> order(n);

  std::size_t tail = 0;
  double tail_h = 0.0;
  for (std::size_t v = 0; v < n; ++v) {
    const double h = empirical_entropy(data, v);
    if (v == 0 || h < tail_h) {
      tail = v;
      tail_h = h;
    }
  }
  order[n - 1] = tail;
  used[tail] = 1;

  std::size_t prev = tail;
  for (std::size_t pos = n - 1; pos-- > 0;) {
    std::size_t pick = n;
    double pick_h = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
      if (used[v]) continue;
      const double h = empirical_conditional_entropy(data, v, prev);
      if (pick == n || h < pick_h) {
        pick = v;
        pick_h = h;
      }
    }
    order[pos] = pick;
    used[pick] = 1;
    prev = pick;
  }
  return order;
}

BayesianNetwork build_umda(const Dataset& selected) {
  return estimate_parameters(DagStructure(selected.cols()), selected);
}

BayesianNetwork build_mimic(const Dataset& selected) {
  const std::vector<std::size_t> order = mimic_permutation(selected);
  DagStructure chain(selected.cols());
  for (std::size_t j = 0; j + 1 < order.size(); ++j)
    chain.add_arc(order[j + 1], order[j]);
  return estimate_parameters(chain, selected);
}

LearnedModel build_model(const Dataset& selected, const ModelBuilder& mb,
                         const DagStructure* previous) {
  LearnedModel out;
  switch (mb.strategy) {
    case Strategy::umda:
      out.net = build_umda(selected);
      out.learner = "umda";
      return out;
    case Strategy::mimic:
      out.net = build_mimic(selected);
      out.learner = "mimic";
      return out;
    case Strategy::ebna_pc: {
      PcResult pc = pc_learn(selected, mb.pc);
      out.net = estimate_parameters(pc.dag, selected);
      out.learner = "pc";
      out.sparse_warnings = pc.sparse_test_warnings;
      return out;
    }
    case Strategy::ebna_bic:
    case Strategy::ebna_k2pen: {
      ScoringConfig cfg;
      SearchOptions opt;
      opt.hard_parent_limit = mb.hard_parent_limit;
      opt.parallel = mb.parallel;
      if (mb.strategy == Strategy::ebna_bic) {
        cfg.metric = ScoreMetric::bic;
      } else {
        cfg.metric = ScoreMetric::k2pen;
        cfg.penalty = mb.k2_penalty;
        const std::size_t n = selected.cols();
        opt.parent_caps.resize(n);
        for (std::size_t v = 0; v < n; ++v)
          opt.parent_caps[v] =
              parent_bound(v, selected.cardinalities, selected.rows(),
                           mb.k2_penalty)
                  .pa;
      }
      DagStructure learned;
      if (previous != nullptr && mb.carry_forward) {
        learned = local_search(selected, cfg, *previous, opt);
        out.learner = "hill-climb";
      } else {
        learned = algorithm_b(selected, cfg, opt);
        out.learner = "greedy-add";
      }
      out.net = estimate_parameters(learned, selected);
      return out;
    }
  }
  throw std::logic_error("build_model: unknown strategy");
}

Population population_from_rows(const Dataset& rows, std::size_t index) {
  Population pop;
  pop.generation_index = index;
  pop.members.reserve(rows.rows());
  for (std::size_t i = 0; i < rows.rows(); ++i) {
    const auto r = rows.row(i);
    pop.members.emplace_back(std::vector<Gene>(r.begin(), r.end()));
  }
  return pop;
}

namespace {

double population_mean(const Population& pop) {
  double sum = 0.0;
  for (const Individual& ind : pop.members) sum += *ind.fitness;
  return sum / static_cast<double>(pop.members.size());
}

}  // namespace

RunRecord eda_run(const Objective& obj, const ModelBuilder& mb,
                  std::size_t population, std::size_t selection,
                  const StopSpec& stop, std::uint64_t seed) {
  stop.validate();
  if (population == 0 || selection == 0 || selection > population)
    throw std::invalid_argument("eda_run: need 0 < selection <= population");
  const auto t0 = std::chrono::steady_clock::now();

  RunRecord rec;
  rec.problem = obj.name;
  rec.algorithm = strategy_name(mb.strategy);
  rec.seed = seed;
  rec.dimension = obj.dimension;
  rec.population = population;
  rec.selection = selection;
  {
    char buf[160];
    switch (mb.strategy) {
      case Strategy::ebna_pc:
        std::snprintf(buf, sizeof buf, "alpha=%g max_cond=%zu", mb.pc.alpha,
                      mb.pc.max_cond_size);
        break;
      case Strategy::ebna_bic:
        std::snprintf(buf, sizeof buf, "carry_forward=%d hard_limit=%zu",
                      mb.carry_forward ? 1 : 0, mb.hard_parent_limit);
        break;
      case Strategy::ebna_k2pen: {
        const char* fdesc =
            mb.k2_penalty.kind == PenaltySpec::Kind::bic_style ? "logN/2"
                                                               : nullptr;
        if (fdesc != nullptr)
          std::snprintf(buf, sizeof buf, "carry_forward=%d hard_limit=%zu f=%s",
                        mb.carry_forward ? 1 : 0, mb.hard_parent_limit, fdesc);
        else
          std::snprintf(buf, sizeof buf, "carry_forward=%d hard_limit=%zu f=%g",
                        mb.carry_forward ? 1 : 0, mb.hard_parent_limit,
                        mb.k2_penalty(2));
        break;
      }
      default:
        buf[0] = '\0';
    }
    rec.params = buf;
    if (mb.elitism) rec.params += rec.params.empty() ? "elitism=1"
                                                     : " elitism=1";
  }

  Rng rng(seed);

  Population pop = population_from_rows(
      pls_sample(uniform_network(obj.cardinalities), population, rng), 0);
  rec.evaluations +=
      mb.parallel ? evaluate_population(pop, obj)
                  : evaluate_population_serial(pop, obj);

  double best = *pop.members[0].fitness;
  std::vector<Gene> best_genes = pop.members[0].genes;
  auto absorb_best = [&](const Population& p) {
    for (const Individual& ind : p.members) {
      if (obj.strictly_better(*ind.fitness, best)) {
        best = *ind.fitness;
        best_genes = ind.genes;
      }
    }
  };
  absorb_best(pop);

  rec.trace.push_back({0, best, population_mean(pop), rec.evaluations, 0,
                       "uniform"});

  std::string reason;
  std::optional<DagStructure> previous;
  for (std::size_t gen = 1;; ++gen) {
    if (stop.optimum && obj.at_least_as_good(best, *stop.optimum)) {
      reason = "optimum";
      break;
    }
    if (stop.max_evaluations && rec.evaluations >= *stop.max_evaluations) {
      reason = "budget";
      break;
    }
    if (stop.stagnation_epsilon && rec.trace.size() >= 2) {
      const double cur = rec.trace[rec.trace.size() - 1].mean;
      const double prev = rec.trace[rec.trace.size() - 2].mean;
      // Magnitude of the mean movement: noise on a plateau keeps a run
      // alive; a converged (fixated) population gives exactly zero and
      // stops it.
      if (std::abs(cur - prev) < *stop.stagnation_epsilon) {
        reason = "stagnation";
        break;
      }
    }

    const Dataset selected = truncation_select(pop, selection, obj);
    LearnedModel model =
        build_model(selected, mb, previous ? &*previous : nullptr);
    rec.ci_sparse_warnings += model.sparse_warnings;
    previous = model.net.structure;

    pop = population_from_rows(pls_sample(model.net, population, rng), gen);
    if (mb.elitism) {
      pop.members[0].genes = best_genes;
      pop.members[0].fitness = best;
    }
    rec.evaluations += mb.parallel ? evaluate_population(pop, obj)
                                   : evaluate_population_serial(pop, obj);
    absorb_best(pop);
    rec.trace.push_back({gen, best, population_mean(pop), rec.evaluations,
                         model.net.structure.arc_count(), model.learner});
  }

  rec.generations = rec.trace.back().generation;
  rec.final_best = best;
  rec.best_genes = std::move(best_genes);
  rec.stop_reason = reason;
  rec.wall_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
  return rec;
}

}  // namespace edanet
