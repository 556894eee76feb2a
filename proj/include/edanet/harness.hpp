#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "edanet/eda.hpp"
#include "edanet/ga.hpp"
#include "edanet/rank_stats.hpp"

namespace edanet {

/// One benchmark cell: which function, at what size, with which
/// population and evaluation budget. The selection size is population/2.
struct ProblemSpec {
  std::string name;            // onemax | checkerboard | sixpeaks | equalproducts
  std::size_t size = 0;        // dimension n, or grid side s for checkerboard
  std::size_t population = 0;  // N
  std::uint64_t budget = 0;    // max objective evaluations per run
};

struct ExperimentConfig {
  std::vector<ProblemSpec> problems;
  /// Names among: umda, mimic, ebna-pc, ebna-bic, ebna-k2pen, ga.
  std::vector<std::string> algorithms;
  std::size_t repetitions = 10;
  std::uint64_t master_seed = 1;
  /// Mean-improvement stop threshold; zero or negative disables it.
  double stagnation_epsilon = 1e-6;
  /// Instance seed for the equalproducts weights.
  std::uint64_t weights_seed = 7;
  /// Constant penalty weight f(N) of the penalized-K2 metric.
  double k2_f = 1.0;
  double pc_alpha = 0.01;
  std::size_t pc_max_cond = 3;
  std::size_t hard_parent_limit = 10;
  double ga_mutation = -1.0;  // negative = 1/n
  double ga_bias = 1.5;
  bool elitism = false;
  bool carry_forward = true;
  /// Worker threads for independent runs; 0 = library default.
  std::size_t jobs = 0;
};

/// The four standard cells: onemax n=128 N=512 budget 1e5; checkerboard
/// s=10 N=1000 budget 1e5; sixpeaks n=50 N=1600 budget 3e5;
/// equalproducts n=50 N=1600 budget 3e5.
std::vector<ProblemSpec> standard_problems();

const std::vector<std::string>& all_algorithms();

/// Optimization direction of a named benchmark (equalproducts minimizes).
Direction problem_direction(const std::string& name);

Objective make_problem(const ProblemSpec& p, std::uint64_t weights_seed);

/// Derived per-run seed: collision-resistant mix of the master seed with
/// the cell coordinates, so cells are independent and reproducible.
std::uint64_t run_seed(std::uint64_t master, const std::string& problem,
                       const std::string& algorithm, std::size_t rep);

/// One run of one algorithm on one problem cell.
RunRecord run_cell(const ExperimentConfig& cfg, const ProblemSpec& p,
                   const std::string& algorithm, std::size_t rep);

/// All configured cells, repetitions included, fanned out across a
/// worker pool. Records return ordered by run id (problem-major, then
/// algorithm, then repetition) no matter the execution order. `progress`
/// (may be null) receives one line per finished run.
std::vector<RunRecord> run_experiment(const ExperimentConfig& cfg,
                                      std::ostream* progress);

/// Serial twin of run_experiment, kept as the reference for tests and
/// benchmarks; observably identical output.
std::vector<RunRecord> run_experiment_serial(const ExperimentConfig& cfg,
                                             std::ostream* progress);

/// Tab-separated results: a timestamp line, `# config` echo lines, a
/// header row, then one row per run.
void write_results(std::ostream& out, const ExperimentConfig& cfg,
                   const std::vector<RunRecord>& records);

/// Per-generation traces of every record, tab-separated.
void write_traces(std::ostream& out, const std::vector<RunRecord>& records);

struct ResultRow {
  std::size_t run_id = 0;
  std::string problem;
  std::string algorithm;
  std::uint64_t seed = 0;
  double final_best = 0.0;
  std::uint64_t evaluations = 0;
  std::size_t generations = 0;
  std::string stop_reason;
  double wall_ms = 0.0;
};

struct ResultsFile {
  std::vector<std::string> config_lines;  // `# config ...` payloads
  std::vector<ResultRow> rows;
};

/// Parses a results stream; tolerates several concatenated blocks (the
/// run command appends under --append). Throws std::runtime_error on a
/// malformed row or an unknown column set.
ResultsFile read_results(std::istream& in);

struct CellStats {
  std::string problem;
  std::string algorithm;
  std::size_t runs = 0;
  double mean = 0.0;
  double median = 0.0;
  double stddev = 0.0;  // sample standard deviation
};

struct StatReport {
  std::vector<CellStats> cells;  // problem-major, algorithm order as seen
  /// Per problem: adjacent-pair rank grouping of the algorithms.
  std::vector<std::pair<std::string, RankTable>> rankings;
};

/// Aggregates rows into per-cell statistics and per-problem rank tables.
/// Throws std::runtime_error when config echo lines disagree about the
/// same problem's parameters (mixed configurations must not aggregate).
StatReport build_report(const ResultsFile& results, double alpha);

std::string render_report(const StatReport& report);

}  // namespace edanet
