#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "edanet/benchmarks.hpp"
#include "edanet/eda.hpp"
#include "edanet/harness.hpp"
#include "edanet/scores.hpp"

namespace {

using namespace edanet;

constexpr const char* kConfigHelp =
    "Config file: flat key=value lines, '#' comments. Flags override file "
    "values. Keys: problems=<comma list>; problem.<name>.size (aliases .n, "
    ".s), problem.<name>.population, problem.<name>.budget; "
    "algorithms=<comma list or 'all'>; reps; master_seed; "
    "stagnation_epsilon; weights_seed; k2_f (alias algo.ebna_k2pen.f); "
    "pc.alpha; pc.max_cond; hard_parent_limit; ga.mutation; ga.bias; "
    "elitism; carry_forward; jobs; out; trace; append.";

std::map<std::string, std::string> parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::map<std::string, std::string> out;
  std::string line;
  auto trim = [](std::string s) {
    const char* ws = " \t\r";
    const std::size_t b = s.find_first_not_of(ws);
    if (b == std::string::npos) return std::string();
    const std::size_t e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
  };
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected key=value");
    out[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
  }
  return out;
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

double to_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("bad numeric value for " + what + ": " + s);
  }
}

std::uint64_t to_u64(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("bad integer value for " + what + ": " + s);
  }
}

std::string default_out_path() {
  const char* dir = std::getenv("EDANET_OUT_DIR");
  std::string d = (dir != nullptr && dir[0] != '\0') ? dir : ".";
  if (d.back() != '/') d += '/';
  return d + "results.tsv";
}

std::vector<Cardinality> parse_cards(const std::string& csv) {
  std::vector<Cardinality> cards;
  for (const std::string& tok : split_commas(csv)) {
    const std::uint64_t v = to_u64(tok, "--cards entry");
    if (v < 2 || v > 255)
      throw std::runtime_error("cardinalities must lie in [2,255]");
    cards.push_back(static_cast<Cardinality>(v));
  }
  if (cards.empty()) throw std::runtime_error("--cards list is empty");
  return cards;
}

// ---------------------------------------------------------------- run --

struct RunFlags {
  std::vector<std::string> problems;
  bool defaults = false;
  std::vector<std::string> algos;
  std::size_t size = 0, population = 0;
  std::uint64_t budget = 0;
  std::size_t reps = 10;
  std::uint64_t master_seed = 1;
  double eps = 1e-6;
  std::uint64_t weights_seed = 7;
  double k2_f = 1.0;
  double pc_alpha = 0.01;
  std::size_t pc_max_cond = 3;
  std::size_t parent_limit = 10;
  double ga_mutation = -1.0;
  double ga_bias = 1.5;
  bool elitism = false;
  bool no_carry = false;
  std::size_t jobs = 0;
  std::string out;
  std::string config_path;
  bool trace = false;
  bool append = false;
  bool quiet = false;
};

int cmd_run(CLI::App& sub, RunFlags& f) {
  std::map<std::string, std::string> file;
  if (!f.config_path.empty()) file = parse_config_file(f.config_path);
  auto file_value = [&](std::initializer_list<const char*> keys)
      -> std::optional<std::string> {
    for (const char* k : keys) {
      auto it = file.find(k);
      if (it != file.end()) return it->second;
    }
    return std::nullopt;
  };
  auto merge_u64 = [&](const char* flag,
                       std::initializer_list<const char*> keys,
                       std::uint64_t& slot) {
    if (sub.count(flag)) return;
    if (auto v = file_value(keys)) slot = to_u64(*v, flag);
  };
  auto merge_size = [&](const char* flag,
                        std::initializer_list<const char*> keys,
                        std::size_t& slot) {
    if (sub.count(flag)) return;
    if (auto v = file_value(keys))
      slot = static_cast<std::size_t>(to_u64(*v, flag));
  };
  auto merge_double = [&](const char* flag,
                          std::initializer_list<const char*> keys,
                          double& slot) {
    if (sub.count(flag)) return;
    if (auto v = file_value(keys)) slot = to_double(*v, flag);
  };
  auto merge_bool = [&](const char* flag,
                        std::initializer_list<const char*> keys, bool& slot) {
    if (sub.count(flag)) return;
    if (auto v = file_value(keys))
      slot = !(*v == "0" || *v == "false" || *v == "no");
  };

  merge_size("--reps", {"reps", "repetitions"}, f.reps);
  merge_u64("--seed", {"master_seed", "seed"}, f.master_seed);
  merge_double("--eps", {"stagnation_epsilon", "eps"}, f.eps);
  merge_u64("--weights-seed", {"weights_seed"}, f.weights_seed);
  merge_double("--k2-f", {"k2_f", "algo.ebna_k2pen.f"}, f.k2_f);
  merge_double("--pc-alpha", {"pc.alpha", "pc_alpha"}, f.pc_alpha);
  merge_size("--pc-max-cond", {"pc.max_cond", "pc_max_cond"}, f.pc_max_cond);
  merge_size("--parent-limit", {"hard_parent_limit", "parent_limit"},
             f.parent_limit);
  merge_double("--ga-mutation", {"ga.mutation", "ga_mutation"},
               f.ga_mutation);
  merge_double("--ga-bias", {"ga.bias", "ga_bias"}, f.ga_bias);
  merge_size("--jobs", {"jobs"}, f.jobs);
  if (!sub.count("--elitism")) {
    bool b = f.elitism;
    merge_bool("--elitism", {"elitism"}, b);
    f.elitism = b;
  }
  if (!sub.count("--no-carry-forward")) {
    bool carry = !f.no_carry;
    if (auto v = file_value({"carry_forward"}))
      carry = !(*v == "0" || *v == "false" || *v == "no");
    f.no_carry = !carry;
  }
  if (!sub.count("--out")) {
    if (auto v = file_value({"out"})) f.out = *v;
  }
  if (!sub.count("--trace")) {
    bool b = f.trace;
    merge_bool("--trace", {"trace"}, b);
    f.trace = b;
  }
  if (!sub.count("--append")) {
    bool b = f.append;
    merge_bool("--append", {"append"}, b);
    f.append = b;
  }

  std::vector<std::string> names = f.problems;
  if (names.empty() && !f.defaults) {
    if (auto v = file_value({"problems"})) names = split_commas(*v);
  }
  if (f.defaults) {
    if (!names.empty()) {
      std::cerr << "error: --defaults and --problem are mutually exclusive\n";
      return 2;
    }
    for (const ProblemSpec& p : standard_problems()) names.push_back(p.name);
  }
  if (names.empty()) {
    std::cerr << "error: no problem selected; use --problem <name> or "
                 "--defaults (see --help)\n";
    return 2;
  }

  ExperimentConfig cfg;
  cfg.repetitions = f.reps;
  cfg.master_seed = f.master_seed;
  cfg.stagnation_epsilon = f.eps;
  cfg.weights_seed = f.weights_seed;
  cfg.k2_f = f.k2_f;
  cfg.pc_alpha = f.pc_alpha;
  cfg.pc_max_cond = f.pc_max_cond;
  cfg.hard_parent_limit = f.parent_limit;
  cfg.ga_mutation = f.ga_mutation;
  cfg.ga_bias = f.ga_bias;
  cfg.elitism = f.elitism;
  cfg.carry_forward = !f.no_carry;
  cfg.jobs = f.jobs;

  const std::vector<ProblemSpec> standard = standard_problems();
  for (const std::string& name : names) {
    const ProblemSpec* base = nullptr;
    for (const ProblemSpec& p : standard)
      if (p.name == name) base = &p;
    if (base == nullptr) {
      std::cerr << "error: unknown problem: " << name << "\n";
      return 2;
    }
    ProblemSpec p = *base;
    auto file_override = [&](std::initializer_list<const char*> suffixes,
                             std::size_t& slot) {
      for (const char* s : suffixes) {
        auto it = file.find("problem." + name + "." + s);
        if (it != file.end())
          slot = static_cast<std::size_t>(to_u64(it->second, it->first));
      }
    };
    file_override({"size", "n", "s"}, p.size);
    file_override({"population", "N"}, p.population);
    std::size_t budget = static_cast<std::size_t>(p.budget);
    file_override({"budget"}, budget);
    p.budget = budget;
    cfg.problems.push_back(p);
  }
  if (sub.count("--size") || sub.count("--population") ||
      sub.count("--budget")) {
    if (cfg.problems.size() != 1) {
      std::cerr << "error: --size/--population/--budget require exactly one "
                   "--problem\n";
      return 2;
    }
    if (sub.count("--size")) cfg.problems[0].size = f.size;
    if (sub.count("--population")) cfg.problems[0].population = f.population;
    if (sub.count("--budget")) cfg.problems[0].budget = f.budget;
  }

  std::vector<std::string> algos = f.algos;
  if (algos.empty()) {
    if (auto v = file_value({"algorithms", "algos"}))
      algos = split_commas(*v);
  }
  if (algos.empty()) algos = {"all"};
  for (const std::string& a : algos) {
    if (a == "all") {
      cfg.algorithms = all_algorithms();
      break;
    }
    if (a != "ga" && !strategy_from_name(a)) {
      std::cerr << "error: unknown algorithm: " << a << "\n";
      return 2;
    }
    cfg.algorithms.push_back(a);
  }

  const std::string out_path = f.out.empty() ? default_out_path() : f.out;
  std::ofstream out(out_path, f.append ? std::ios::app : std::ios::trunc);
  if (!out) {
    std::cerr << "error: cannot open " << out_path << " for writing\n";
    return 1;
  }

  std::vector<RunRecord> records =
      run_experiment(cfg, f.quiet ? nullptr : &std::cerr);
  write_results(out, cfg, records);
  if (!out) {
    std::cerr << "error: write failed: " << out_path << "\n";
    return 1;
  }
  if (f.trace) {
    const std::string trace_path = out_path + ".trace";
    std::ofstream tout(trace_path,
                       f.append ? std::ios::app : std::ios::trunc);
    if (!tout) {
      std::cerr << "error: cannot open " << trace_path << " for writing\n";
      return 1;
    }
    write_traces(tout, records);
    if (!f.quiet) std::cerr << "traces: " << trace_path << "\n";
  }
  if (!f.quiet)
    std::cerr << records.size() << " runs -> " << out_path << "\n";
  return 0;
}

// ------------------------------------------------------------- report --

int cmd_report(const std::string& path, double alpha) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "error: cannot open " << path << "\n";
    return 1;
  }
  const ResultsFile results = read_results(in);
  if (results.rows.empty()) {
    std::cerr << "error: no result rows in " << path << "\n";
    return 1;
  }
  const StatReport rep = build_report(results, alpha);
  std::cout << render_report(rep);
  return 0;
}

// ------------------------------------------------------------- sample --

int cmd_sample(const std::string& input, const std::string& cards_csv,
               const std::string& learner, std::size_t samples,
               std::uint64_t seed, double k2_f, double pc_alpha,
               std::size_t pc_max_cond, std::size_t parent_limit) {
  std::ifstream in(input);
  if (!in) {
    std::cerr << "error: cannot open " << input << "\n";
    return 1;
  }
  std::vector<std::vector<std::uint64_t>> raw;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream is(line);
    std::vector<std::uint64_t> row;
    std::uint64_t v = 0;
    while (is >> v) row.push_back(v);
    if (!row.empty()) raw.push_back(std::move(row));
  }
  if (raw.empty()) {
    std::cerr << "error: no data rows in " << input << "\n";
    return 1;
  }
  const std::size_t n = raw[0].size();
  for (const auto& row : raw)
    if (row.size() != n) {
      std::cerr << "error: ragged rows in " << input << "\n";
      return 1;
    }

  std::vector<Cardinality> cards;
  if (!cards_csv.empty()) {
    cards = parse_cards(cards_csv);
    if (cards.size() != n) {
      std::cerr << "error: --cards lists " << cards.size()
                << " values, data has " << n << " columns\n";
      return 1;
    }
  } else {
    cards.assign(n, 2);
    for (const auto& row : raw)
      for (std::size_t c = 0; c < n; ++c)
        if (row[c] + 1 > cards[c])
          cards[c] = static_cast<Cardinality>(row[c] + 1);
  }
  Dataset data(cards);
  for (const auto& row : raw) {
    std::vector<Gene> genes(n);
    for (std::size_t c = 0; c < n; ++c) {
      if (row[c] >= cards[c]) {
        std::cerr << "error: value " << row[c] << " out of range for column "
                  << c << " (cardinality " << +cards[c] << ")\n";
        return 1;
      }
      genes[c] = static_cast<Gene>(row[c]);
    }
    data.append_row(genes);
  }

  ModelBuilder mb;
  if (learner == "ga") {
    std::cerr << "error: sample needs a model-based learner\n";
    return 2;
  }
  const auto strategy = strategy_from_name(learner);
  if (!strategy) {
    std::cerr << "error: unknown learner: " << learner << "\n";
    return 2;
  }
  mb.strategy = *strategy;
  mb.k2_penalty = PenaltySpec::constant(k2_f);
  mb.pc.alpha = pc_alpha;
  mb.pc.max_cond_size = pc_max_cond;
  mb.hard_parent_limit = parent_limit;

  const LearnedModel model = build_model(data, mb, nullptr);
  std::cout << "# learner " << model.learner << ", " << data.rows()
            << " rows, " << n << " variables, "
            << model.net.structure.arc_count() << " arcs\n";
  std::cout << dump_network(model.net);
  if (samples > 0) {
    Rng rng(seed);
    const Dataset drawn = pls_sample(model.net, samples, rng);
    std::cout << "# samples " << samples << " seed " << seed << "\n";
    for (std::size_t r = 0; r < drawn.rows(); ++r) {
      const auto row = drawn.row(r);
      for (std::size_t c = 0; c < row.size(); ++c)
        std::cout << (c ? " " : "") << +row[c];
      std::cout << "\n";
    }
  }
  return 0;
}

// -------------------------------------------------------------- bound --

int cmd_bound(const std::string& cards_csv, std::uint64_t rows, double fpen,
              std::size_t var_1based) {
  const std::vector<Cardinality> cards = parse_cards(cards_csv);
  if (rows == 0) {
    std::cerr << "error: --rows must be positive\n";
    return 2;
  }
  const PenaltySpec pen = PenaltySpec::constant(fpen);
  auto print_one = [&](std::size_t v) {
    const ParentBound b = parent_bound(v, cards, rows, pen);
    std::printf("variable %zu: cardinality %u, rhs %.4f, max parents %zu\n",
                v + 1, cards[v], b.rhs, b.pa);
  };
  if (var_1based > 0) {
    if (var_1based > cards.size()) {
      std::cerr << "error: --var out of range (1.." << cards.size() << ")\n";
      return 2;
    }
    print_one(var_1based - 1);
  } else {
    for (std::size_t v = 0; v < cards.size(); ++v) print_one(v);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Estimation-of-distribution optimizers over discrete Bayesian "
      "networks, with benchmark problems, a steady-state GA baseline, and "
      "a rank-test report."};
  app.require_subcommand(1);
  app.footer(kConfigHelp);

  RunFlags rf;
  CLI::App* run = app.add_subcommand(
      "run", "Execute seeded optimization runs and write a results file");
  run->add_option("--problem", rf.problems,
                  "Problem name (repeatable): onemax, checkerboard, "
                  "sixpeaks, equalproducts");
  run->add_flag("--defaults", rf.defaults,
                "All four problems at their standard sizes, populations "
                "and budgets");
  run->add_option("--algo", rf.algos,
                  "Algorithm (repeatable): umda, mimic, ebna-pc, ebna-bic, "
                  "ebna-k2pen, ga, or 'all' (default all)");
  run->add_option("--size", rf.size,
                  "Dimension n (grid side for checkerboard); single "
                  "--problem only");
  run->add_option("--population", rf.population,
                  "Population N; selection is N/2; single --problem only");
  run->add_option("--budget", rf.budget,
                  "Objective-evaluation budget; single --problem only");
  run->add_option("--reps", rf.reps, "Repetitions per cell (default 10)");
  run->add_option("--seed", rf.master_seed, "Master seed (default 1)");
  run->add_option("--eps", rf.eps,
                  "Stagnation threshold on mean improvement (default 1e-6; "
                  "0 disables)");
  run->add_option("--weights-seed", rf.weights_seed,
                  "Instance seed for the equalproducts weights (default 7)");
  run->add_option("--k2-f", rf.k2_f,
                  "Penalty weight f of the penalized-K2 metric (default 1)");
  run->add_option("--pc-alpha", rf.pc_alpha,
                  "Significance level of the CI tests (default 0.01)");
  run->add_option("--pc-max-cond", rf.pc_max_cond,
                  "Largest conditioning set tested (default 3)");
  run->add_option("--parent-limit", rf.parent_limit,
                  "Hard per-variable parent cap (default 10)");
  run->add_option("--ga-mutation", rf.ga_mutation,
                  "GA per-gene mutation rate (default 1/n)");
  run->add_option("--ga-bias", rf.ga_bias,
                  "GA linear ranking bias in (1,2] (default 1.5)");
  run->add_flag("--elitism", rf.elitism,
                "Keep the best-so-far individual in every new population");
  run->add_flag("--no-carry-forward", rf.no_carry,
                "Relearn score-based structures from scratch each "
                "generation");
  run->add_option("--jobs", rf.jobs,
                  "Worker threads for independent runs (default: cores)");
  run->add_option("--out", rf.out,
                  "Results file (default $EDANET_OUT_DIR/results.tsv or "
                  "./results.tsv)");
  run->add_option("--config", rf.config_path, "key=value config file");
  run->add_flag("--trace", rf.trace,
                "Also write per-generation traces to <out>.trace");
  run->add_flag("--append", rf.append,
                "Append a new block instead of truncating the results file");
  run->add_flag("--quiet", rf.quiet, "No progress output");

  std::string report_path;
  double report_alpha = 0.05;
  CLI::App* report =
      app.add_subcommand("report", "Aggregate a results file into mean and "
                                   "rank-group tables");
  report->add_option("path", report_path, "Results file")->required();
  report->add_option("--alpha", report_alpha,
                     "Significance level (default 0.05)");

  std::string sample_input, sample_cards, sample_learner = "umda";
  std::size_t sample_count = 10;
  std::uint64_t sample_seed = 1;
  double sample_k2f = 1.0, sample_pc_alpha = 0.01;
  std::size_t sample_pc_cond = 3, sample_parent_limit = 10;
  CLI::App* sample = app.add_subcommand(
      "sample",
      "Learn a model from a dataset file and dump it plus fresh samples");
  sample->add_option("--input", sample_input,
                     "Dataset: one row per line, whitespace-separated "
                     "values")
      ->required();
  sample->add_option("--cards", sample_cards,
                     "Comma-separated cardinalities (default: per-column "
                     "max+1, at least 2)");
  sample->add_option("--learner", sample_learner,
                     "umda, mimic, ebna-pc, ebna-bic or ebna-k2pen");
  sample->add_option("--samples", sample_count, "Rows to draw (default 10)");
  sample->add_option("--seed", sample_seed, "Sampling seed");
  sample->add_option("--k2-f", sample_k2f, "Penalized-K2 penalty weight");
  sample->add_option("--pc-alpha", sample_pc_alpha, "CI-test alpha");
  sample->add_option("--pc-max-cond", sample_pc_cond,
                     "Largest conditioning set");
  sample->add_option("--parent-limit", sample_parent_limit,
                     "Hard parent cap");

  std::string bound_cards;
  std::uint64_t bound_rows = 0;
  double bound_f = 1.0;
  std::size_t bound_var = 0;
  CLI::App* bound = app.add_subcommand(
      "bound",
      "Print the penalized-K2 parent-count bound per variable");
  bound->add_option("--cards", bound_cards,
                    "Comma-separated cardinalities of all variables")
      ->required();
  bound->add_option("--rows", bound_rows, "Dataset size N")->required();
  bound->add_option("--f", bound_f, "Penalty weight f (default 1)");
  bound->add_option("--var", bound_var,
                    "1-based variable index (default: all variables)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(*run, rf);
    if (*report) return cmd_report(report_path, report_alpha);
    if (*sample)
      return cmd_sample(sample_input, sample_cards, sample_learner,
                        sample_count, sample_seed, sample_k2f,
                        sample_pc_alpha, sample_pc_cond,
                        sample_parent_limit);
    if (*bound) return cmd_bound(bound_cards, bound_rows, bound_f, bound_var);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
