// Experiment suite runner: datasets, repeated searches, aggregate reports,
// and per-generation trace summaries.
#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "camid/metrics.hpp"
#include "camid/sade.hpp"
#include "camid/scenario.hpp"

namespace camid::suite {

// Root-mean-square estimation error normalized by the range of the true
// weights, in percent. Throws when the truth vector is constant (zero range).
double nrmse_percent(std::span<const double> estimate,
                     std::span<const double> truth);

struct RunStats {
  double best = 0.0;  // min over runs
  double mean = 0.0;
  double sd = 0.0;    // sample standard deviation (n-1), 0 for a single run
  double max = 0.0;
};

// Computed sequentially in run order; tests recompute these from the raw
// per-run files and must match exactly.
RunStats aggregate(std::span<const double> values);

struct ScenarioReport {
  std::string name;
  ScenarioSpec spec;
  int k = 0;
  int runs = 0;
  std::vector<std::uint64_t> run_seeds;
  RunStats nrmse;
  RunStats fitness;
  std::optional<double> oracle_objective;
  std::optional<double> oracle_nrmse;
};

struct SuiteReport {
  std::uint64_t master_seed = 0;
  int runs_per_scenario = 0;
  std::string suite_hash;  // FNV-1a of the suite file bytes, hex
  std::vector<ScenarioReport> scenarios;
};

struct SuiteOptions {
  std::filesystem::path suite_file;
  std::filesystem::path out_dir;
  int runs = 20;
  std::uint64_t master_seed = 1;
  bool run_oracle = false;
  // 0: use CAMID_THREADS, falling back to the hardware thread count.
  int threads = 0;
  sade::SadeConfig sade;  // seed is ignored; per-run seeds are derived
  WeightScheme weighting = WeightScheme::centered;
};

// Loads the suite file and fills in derived seeds: scenario j gets
// derive(master_seed, "scenario", j) unless the file pins one, and all
// scenarios share derive(master_seed, "init") as init_seed unless pinned.
std::vector<ScenarioSpec> load_suite(const std::filesystem::path& file,
                                     std::uint64_t master_seed);

// Runs every scenario x run job, writes per-run artifacts
// (<out>/<scenario>/run-NN/{result.json,traces.csv}), scenario manifests,
// and the aggregate report.{json,csv}. Returns the in-memory report.
// A failing job aborts the suite naming the (scenario, run) that failed.
SuiteReport run_suite(const SuiteOptions& options);

// Aggregates run-NN/traces.csv files of one scenario directory into
// convergence.csv, strategy_probabilities.csv, and
// constraint_violation_rate.csv under out_dir.
void emit_trace_summaries(const std::filesystem::path& scenario_dir,
                          const std::filesystem::path& out_dir);

// Pretty-prints report.json as estimation-error and fitness tables.
void print_report(const std::filesystem::path& report_json, std::ostream& out);

// Worker pool used for scenario x run jobs; exposed for the acceptance suite.
void parallel_for(int jobs, int threads, const std::function<void(int)>& body);

int resolve_threads(int requested);

}  // namespace camid::suite
