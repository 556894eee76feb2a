#include "edanet/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <ctime>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "edanet/benchmarks.hpp"
#include "edanet/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace edanet {

namespace {

constexpr const char* kHeader =
    "run_id\tproblem\talgorithm\tseed\tfinal_best\tevaluations\tgenerations"
    "\tstop_reason\twall_ms";

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

std::vector<ProblemSpec> standard_problems() {
  return {
      {"onemax", 128, 512, 100000},
      {"checkerboard", 10, 1000, 100000},
      {"sixpeaks", 50, 1600, 300000},
      {"equalproducts", 50, 1600, 300000},
  };
}

const std::vector<std::string>& all_algorithms() {
  static const std::vector<std::string> names = {
      "umda", "mimic", "ebna-pc", "ebna-bic", "ebna-k2pen", "ga"};
  return names;
}

Direction problem_direction(const std::string& name) {
  if (name == "equalproducts") return Direction::minimize;
  if (name == "onemax" || name == "checkerboard" || name == "sixpeaks")
    return Direction::maximize;
  throw std::invalid_argument("unknown problem: " + name);
}

Objective make_problem(const ProblemSpec& p, std::uint64_t weights_seed) {
  return make_objective(p.name, p.size, weights_seed);
}

std::uint64_t run_seed(std::uint64_t master, const std::string& problem,
                       const std::string& algorithm, std::size_t rep) {
  return mix_seed(master, problem, algorithm, rep);
}

RunRecord run_cell(const ExperimentConfig& cfg, const ProblemSpec& p,
                   const std::string& algorithm, std::size_t rep) {
  if (p.population < 2)
    throw std::invalid_argument("run_cell: population must be at least 2");
  if (p.budget == 0)
    throw std::invalid_argument("run_cell: zero evaluation budget");
  const Objective obj = make_problem(p, cfg.weights_seed);
  StopSpec stop;
  stop.max_evaluations = p.budget;
  if (cfg.stagnation_epsilon > 0.0)
    stop.stagnation_epsilon = cfg.stagnation_epsilon;
  stop.optimum = obj.known_optimum;
  const std::uint64_t seed = run_seed(cfg.master_seed, p.name, algorithm, rep);

  if (algorithm == "ga") {
    GaConfig ga;
    ga.population = p.population;
    ga.mutation_rate = cfg.ga_mutation;
    ga.rank_bias = cfg.ga_bias;
    return ga_run(obj, ga, stop, seed);
  }
  const auto strategy = strategy_from_name(algorithm);
  if (!strategy)
    throw std::invalid_argument("unknown algorithm: " + algorithm);
  ModelBuilder mb;
  mb.strategy = *strategy;
  mb.carry_forward = cfg.carry_forward;
  mb.k2_penalty = PenaltySpec::constant(cfg.k2_f);
  mb.pc.alpha = cfg.pc_alpha;
  mb.pc.max_cond_size = cfg.pc_max_cond;
  mb.hard_parent_limit = cfg.hard_parent_limit;
  mb.elitism = cfg.elitism;
  return eda_run(obj, mb, p.population, p.population / 2, stop, seed);
}

namespace {

struct Cell {
  const ProblemSpec* problem;
  const std::string* algorithm;
  std::size_t rep;
};

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.problems.empty())
    throw std::invalid_argument("experiment: no problems configured");
  if (cfg.algorithms.empty())
    throw std::invalid_argument("experiment: no algorithms configured");
  if (cfg.repetitions == 0)
    throw std::invalid_argument("experiment: zero repetitions");
  for (const ProblemSpec& p : cfg.problems)
    problem_direction(p.name);  // throws on unknown names
  for (const std::string& a : cfg.algorithms)
    if (a != "ga" && !strategy_from_name(a))
      throw std::invalid_argument("unknown algorithm: " + a);
}

std::vector<RunRecord> run_all(const ExperimentConfig& cfg,
                               std::ostream* progress, bool parallel) {
  validate_config(cfg);
  std::vector<Cell> cells;
  for (const ProblemSpec& p : cfg.problems)
    for (const std::string& a : cfg.algorithms)
      for (std::size_t rep = 0; rep < cfg.repetitions; ++rep)
        cells.push_back({&p, &a, rep});

  std::vector<RunRecord> records(cells.size());
  const auto total = static_cast<std::int64_t>(cells.size());
  auto report_one = [&](std::size_t id) {
    if (progress == nullptr) return;
    const RunRecord& r = records[id];
    std::ostringstream line;
    line << "run " << (id + 1) << "/" << total << " " << r.problem << " "
         << r.algorithm << " rep " << cells[id].rep << ": best "
         << format_double(r.final_best) << ", " << r.evaluations
         << " evals, " << r.stop_reason << "\n";
    const std::string text = line.str();
#ifdef _OPENMP
#pragma omp critical(edanet_progress)
#endif
    { (*progress) << text << std::flush; }
  };

  if (parallel) {
#ifdef _OPENMP
    const int threads = cfg.jobs > 0 ? static_cast<int>(cfg.jobs)
                                     : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
#endif
    for (std::int64_t i = 0; i < total; ++i) {
      const auto id = static_cast<std::size_t>(i);
      records[id] =
          run_cell(cfg, *cells[id].problem, *cells[id].algorithm,
                   cells[id].rep);
      report_one(id);
    }
  } else {
    for (std::int64_t i = 0; i < total; ++i) {
      const auto id = static_cast<std::size_t>(i);
      records[id] =
          run_cell(cfg, *cells[id].problem, *cells[id].algorithm,
                   cells[id].rep);
      report_one(id);
    }
  }
  return records;
}

}  // namespace

std::vector<RunRecord> run_experiment(const ExperimentConfig& cfg,
                                      std::ostream* progress) {
  return run_all(cfg, progress, /*parallel=*/true);
}

std::vector<RunRecord> run_experiment_serial(const ExperimentConfig& cfg,
                                             std::ostream* progress) {
  return run_all(cfg, progress, /*parallel=*/false);
}

void write_results(std::ostream& out, const ExperimentConfig& cfg,
                   const std::vector<RunRecord>& records) {
  {
    char stamp[64] = "unknown";
    const std::time_t now = std::time(nullptr);
    std::tm tm_utc{};
#if defined(_WIN32)
    gmtime_s(&tm_utc, &now);
#else
    gmtime_r(&now, &tm_utc);
#endif
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    out << "# results " << stamp << "\n";
  }
  {
    std::ostringstream line;
    line << "# config master_seed=" << cfg.master_seed
         << " repetitions=" << cfg.repetitions
         << " stagnation_epsilon=" << format_double(cfg.stagnation_epsilon)
         << " weights_seed=" << cfg.weights_seed
         << " k2_f=" << format_double(cfg.k2_f)
         << " pc_alpha=" << format_double(cfg.pc_alpha)
         << " pc_max_cond=" << cfg.pc_max_cond
         << " hard_parent_limit=" << cfg.hard_parent_limit
         << " ga_mutation=" << format_double(cfg.ga_mutation)
         << " ga_bias=" << format_double(cfg.ga_bias)
         << " elitism=" << (cfg.elitism ? 1 : 0)
         << " carry_forward=" << (cfg.carry_forward ? 1 : 0) << "\n";
    out << line.str();
  }
  for (const ProblemSpec& p : cfg.problems)
    out << "# config problem " << p.name << " size=" << p.size
        << " population=" << p.population << " budget=" << p.budget << "\n";
  {
    out << "# config algorithms ";
    for (std::size_t i = 0; i < cfg.algorithms.size(); ++i)
      out << (i ? "," : "") << cfg.algorithms[i];
    out << "\n";
  }
  out << kHeader << "\n";
  for (std::size_t id = 0; id < records.size(); ++id) {
    const RunRecord& r = records[id];
    char wall[32];
    std::snprintf(wall, sizeof wall, "%.3f", r.wall_ms);
    out << id << "\t" << r.problem << "\t" << r.algorithm << "\t" << r.seed
        << "\t" << format_double(r.final_best) << "\t" << r.evaluations
        << "\t" << r.generations << "\t" << r.stop_reason << "\t" << wall
        << "\n";
  }
}

void write_traces(std::ostream& out, const std::vector<RunRecord>& records) {
  out << "run_id\tgeneration\tbest\tmean\tevaluations\tmodel_arcs\tlearner\n";
  for (std::size_t id = 0; id < records.size(); ++id) {
    for (const GenerationTrace& t : records[id].trace) {
      out << id << "\t" << t.generation << "\t" << format_double(t.best)
          << "\t" << format_double(t.mean) << "\t" << t.evaluations << "\t"
          << t.model_arcs << "\t" << t.learner << "\n";
    }
  }
}

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find('\t', start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

double parse_double(const std::string& s, const char* what) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0')
    throw std::runtime_error(std::string("results: bad ") + what + ": " + s);
  return v;
}

std::uint64_t parse_u64(const std::string& s, const char* what) {
  char* end = nullptr;
  const std::uint64_t v = std::strtoull(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0')
    throw std::runtime_error(std::string("results: bad ") + what + ": " + s);
  return v;
}

}  // namespace

ResultsFile read_results(std::istream& in) {
  ResultsFile out;
  std::string line;
  bool seen_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.rfind("# config ", 0) == 0) {
      out.config_lines.push_back(line.substr(9));
      continue;
    }
    if (line[0] == '#') continue;  // timestamp or free comment
    if (line == kHeader) {
      seen_header = true;
      continue;
    }
    if (!seen_header)
      throw std::runtime_error("results: data row before header");
    const std::vector<std::string> f = split_tabs(line);
    if (f.size() != 9)
      throw std::runtime_error("results: expected 9 columns, got " +
                               std::to_string(f.size()));
    ResultRow row;
    row.run_id = static_cast<std::size_t>(parse_u64(f[0], "run_id"));
    row.problem = f[1];
    row.algorithm = f[2];
    row.seed = parse_u64(f[3], "seed");
    row.final_best = parse_double(f[4], "final_best");
    row.evaluations = parse_u64(f[5], "evaluations");
    row.generations = static_cast<std::size_t>(parse_u64(f[6], "generations"));
    row.stop_reason = f[7];
    row.wall_ms = parse_double(f[8], "wall_ms");
    out.rows.push_back(std::move(row));
  }
  return out;
}

StatReport build_report(const ResultsFile& results, double alpha) {
  // Mixed-parameter detection: the same problem may not appear with two
  // different parameter sets in the config echo.
  std::map<std::string, std::string> problem_params;
  for (const std::string& cfg : results.config_lines) {
    if (cfg.rfind("problem ", 0) != 0) continue;
    std::istringstream is(cfg);
    std::string tag, name, rest;
    is >> tag >> name;
    std::getline(is, rest);
    auto [it, inserted] = problem_params.emplace(name, rest);
    if (!inserted && it->second != rest)
      throw std::runtime_error(
          "results: conflicting configurations for problem " + name);
  }

  std::vector<std::string> problems, algorithms;
  auto remember = [](std::vector<std::string>& seen, const std::string& s) {
    if (std::find(seen.begin(), seen.end(), s) == seen.end())
      seen.push_back(s);
  };
  for (const ResultRow& r : results.rows) {
    remember(problems, r.problem);
    remember(algorithms, r.algorithm);
  }

  StatReport rep;
  for (const std::string& prob : problems) {
    std::vector<SampleGroup> groups;
    for (const std::string& algo : algorithms) {
      SampleGroup g;
      g.label = algo;
      for (const ResultRow& r : results.rows)
        if (r.problem == prob && r.algorithm == algo)
          g.values.push_back(r.final_best);
      if (g.values.empty()) continue;

      CellStats cs;
      cs.problem = prob;
      cs.algorithm = algo;
      cs.runs = g.values.size();
      cs.mean = std::accumulate(g.values.begin(), g.values.end(), 0.0) /
                static_cast<double>(g.values.size());
      std::vector<double> sorted = g.values;
      std::sort(sorted.begin(), sorted.end());
      const std::size_t m = sorted.size();
      cs.median = m % 2 == 1 ? sorted[m / 2]
                             : (sorted[m / 2 - 1] + sorted[m / 2]) / 2.0;
      double ss = 0.0;
      for (double v : g.values) ss += (v - cs.mean) * (v - cs.mean);
      cs.stddev = m > 1 ? std::sqrt(ss / static_cast<double>(m - 1)) : 0.0;
      rep.cells.push_back(std::move(cs));
      groups.push_back(std::move(g));
    }
    if (groups.empty()) continue;
    RankTable table;
    if (groups.size() == 1) {
      table.entries.push_back(
          {groups[0].label,
           std::accumulate(groups[0].values.begin(), groups[0].values.end(),
                           0.0) /
               static_cast<double>(groups[0].values.size()),
           1});
    } else {
      table = pairwise_rank_grouping(groups, alpha, problem_direction(prob));
    }
    rep.rankings.emplace_back(prob, std::move(table));
  }
  return rep;
}

std::string render_report(const StatReport& report) {
  std::ostringstream out;
  std::vector<std::string> problems, algorithms;
  for (const CellStats& c : report.cells) {
    if (std::find(problems.begin(), problems.end(), c.problem) ==
        problems.end())
      problems.push_back(c.problem);
    if (std::find(algorithms.begin(), algorithms.end(), c.algorithm) ==
        algorithms.end())
      algorithms.push_back(c.algorithm);
  }
  auto cell = [&](const std::string& p,
                  const std::string& a) -> const CellStats* {
    for (const CellStats& c : report.cells)
      if (c.problem == p && c.algorithm == a) return &c;
    return nullptr;
  };
  auto pad = [](std::string s, std::size_t w) {
    if (s.size() < w) s.append(w - s.size(), ' ');
    return s;
  };
  auto num = [](double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return std::string(buf);
  };
  const std::size_t w = 15;

  out << "Mean final value per problem and algorithm\n\n";
  out << pad("algorithm", w);
  for (const std::string& p : problems) out << pad(p, w);
  out << "\n";
  for (const std::string& a : algorithms) {
    out << pad(a, w);
    for (const std::string& p : problems) {
      const CellStats* c = cell(p, a);
      out << pad(c != nullptr ? num(c->mean) : "-", w);
    }
    out << "\n";
  }

  out << "\nPer-cell detail (runs, mean, median, sample std)\n\n";
  out << pad("problem", w) << pad("algorithm", w) << pad("runs", 6)
      << pad("mean", w) << pad("median", w) << pad("std", w) << "\n";
  for (const CellStats& c : report.cells)
    out << pad(c.problem, w) << pad(c.algorithm, w)
        << pad(std::to_string(c.runs), 6) << pad(num(c.mean), w)
        << pad(num(c.median), w) << pad(num(c.stddev), w) << "\n";

  out << "\nRank groups per problem (adjacent-pair Kruskal-Wallis; a "
         "shared number means no significant separation)\n";
  for (const auto& [prob, table] : report.rankings) {
    out << "\n" << prob << " ("
        << (problem_direction(prob) == Direction::maximize ? "maximize"
                                                           : "minimize")
        << ")\n";
    for (const RankEntry& e : table.entries)
      out << "  " << e.group_number << "  " << pad(e.label, w)
          << "mean " << num(e.mean) << "\n";
  }
  return out.str();
}

}  // namespace edanet
