#include "camid/suite.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <exception>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "camid/fitness.hpp"
#include "camid/oracle.hpp"
#include "camid/rng.hpp"
#include "json.hpp"

namespace camid::suite {

namespace fs = std::filesystem;
using nlohmann::json;

double nrmse_percent(std::span<const double> estimate,
                     std::span<const double> truth) {
  if (estimate.size() != truth.size() || truth.empty())
    throw std::invalid_argument("estimate/truth length mismatch");
  double lo = truth[0], hi = truth[0];
  for (double t : truth) {
    lo = std::min(lo, t);
    hi = std::max(hi, t);
  }
  if (hi - lo == 0.0)
    throw std::invalid_argument("constant truth vector: NRMSE undefined");
  double mse = 0.0;
  for (std::size_t j = 0; j < truth.size(); ++j) {
    const double d = estimate[j] - truth[j];
    mse += d * d;
  }
  mse /= static_cast<double>(truth.size());
  return 100.0 * std::sqrt(mse) / (hi - lo);
}

RunStats aggregate(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("no values to aggregate");
  RunStats s;
  s.best = values[0];
  s.max = values[0];
  double sum = 0.0;
  for (double v : values) {
    s.best = std::min(s.best, v);
    s.max = std::max(s.max, v);
    sum += v;
  }
  const std::size_t n = values.size();
  s.mean = sum / static_cast<double>(n);
  if (n > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(n - 1));
  }
  return s;
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("CAMID_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

void parallel_for(int jobs, int threads, const std::function<void(int)>& body) {
  threads = std::min(std::max(threads, 1), jobs);
  if (threads <= 1) {
    for (int j = 0; j < jobs; ++j) body(j);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const int j = next.fetch_add(1);
      if (j >= jobs) return;
      try {
        body(j);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(jobs);  // drain remaining work
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

namespace {

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(
      std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json spec_json(const ScenarioSpec& s) {
  return json::parse(scenario_to_json(s));
}

json sade_config_json(const sade::SadeConfig& c) {
  return json{{"population", c.population},
              {"learning_period", c.learning_period},
              {"max_generations", c.max_generations},
              {"f_mean", c.f_mean},
              {"f_spread", c.f_spread},
              {"cr_init", c.cr_init},
              {"cr_spread", c.cr_spread}};
}

const char* weighting_name(WeightScheme w) {
  return w == WeightScheme::centered ? "centered" : "uniform";
}

std::string run_dir_name(int run) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "run-%02d", run);
  return buf;
}

std::string traces_csv(const sade::SadeRunResult& r) {
  std::string out =
      "generation,best_j,p_rand1,p_rand_to_best2,p_rand2,p_current_to_rand1,"
      "cvr_rand1,cvr_rand_to_best2,cvr_rand2,cvr_current_to_rand1\n";
  for (std::size_t g = 0; g < r.strategy_prob_trace.size(); ++g) {
    out += std::to_string(g + 1);
    out += ',';
    out += format_double(r.fitness_trace[g + 1]);
    for (double p : r.strategy_prob_trace[g]) {
      out += ',';
      out += format_double(p);
    }
    for (double c : r.cvr_trace[g]) {
      out += ',';
      out += format_double(c);
    }
    out += '\n';
  }
  return out;
}

json run_result_json(const ScenarioSpec& spec, const sade::SadeRunResult& r,
                     int run_index, double nrmse, const sade::SadeConfig& cfg,
                     WeightScheme weighting) {
  return json{{"schema", "camid-result/1"},
              {"solver", "sade"},
              {"scenario", spec_json(spec)},
              {"run_index", run_index},
              {"seed", r.seed},
              {"config", sade_config_json(cfg)},
              {"weighting", weighting_name(weighting)},
              {"k", r.best_theta.size()},
              {"best_theta", r.best_theta},
              {"best_fitness", r.best_fitness},
              {"nrmse_percent", nrmse},
              {"evaluations", r.evaluations},
              {"initial_best_fitness", r.fitness_trace.front()}};
}

struct RunOutcome {
  double nrmse = 0.0;
  double fitness = 0.0;
};

}  // namespace

std::vector<ScenarioSpec> load_suite(const fs::path& file,
                                     std::uint64_t master_seed) {
  const json doc = json::parse(read_text(file));
  if (!doc.is_array() || doc.empty())
    throw std::invalid_argument("suite file must be a non-empty JSON array");
  const std::uint64_t shared_init = seeds::derive(master_seed, "init");
  std::vector<ScenarioSpec> specs;
  specs.reserve(doc.size());
  for (std::size_t j = 0; j < doc.size(); ++j) {
    ScenarioSpec s;
    const json& e = doc[j];
    s.topology = topology_from_string(e.at("topology").get<std::string>());
    s.radius = e.at("radius").get<int>();
    s.theta_scheme =
        theta_scheme_from_string(e.at("theta_scheme").get<std::string>());
    s.height = e.value("height", 51);
    s.width = e.value("width", 51);
    s.steps = e.value("steps", 10);
    if (e.contains("snr_db") && e.at("snr_db").is_null())
      s.snr_db.reset();
    else if (e.contains("snr_db"))
      s.snr_db = e.at("snr_db").get<double>();
    s.seed = e.contains("seed") ? e.at("seed").get<std::uint64_t>()
                                : seeds::derive(master_seed, "scenario", j);
    s.init_seed = e.contains("init_seed")
                      ? e.at("init_seed").get<std::uint64_t>()
                      : shared_init;
    s.validate();
    specs.push_back(s);
  }
  return specs;
}

SuiteReport run_suite(const SuiteOptions& options) {
  const auto started = std::chrono::steady_clock::now();
  const std::string started_utc = utc_timestamp();
  const std::string suite_bytes = read_text(options.suite_file);
  const auto specs = load_suite(options.suite_file, options.master_seed);
  if (options.runs < 1) throw std::invalid_argument("runs must be >= 1");
  options.sade.validate();
  const int threads = resolve_threads(options.threads);
  fs::create_directories(options.out_dir);

  SuiteReport report;
  report.master_seed = options.master_seed;
  report.runs_per_scenario = options.runs;
  {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(seeds::fnv1a(suite_bytes)));
    report.suite_hash = buf;
  }

  for (const ScenarioSpec& spec : specs) {
    const std::string name = spec.name();
    const fs::path scenario_dir = options.out_dir / name;
    fs::create_directories(scenario_dir);

    const ObservedDataset data = build_dataset(spec);
    const FitnessEvaluator objective(data, options.weighting);

    ScenarioReport sr;
    sr.name = name;
    sr.spec = spec;
    sr.k = data.truth.size();
    sr.runs = options.runs;
    for (int run = 0; run < options.runs; ++run)
      sr.run_seeds.push_back(seeds::derive(spec.seed, "sade", run));

    json manifest{{"schema", "camid-scenario/1"},
                  {"name", name},
                  {"scenario", spec_json(spec)},
                  {"k", sr.k},
                  {"truth_theta", data.truth.weights()},
                  {"run_seeds", sr.run_seeds}};
    if (data.noise) {
      manifest["noise"] = {{"sigma", data.noise->sigma},
                           {"empirical_snr_db", data.noise->empirical_snr_db},
                           {"clamped_fraction", data.noise->clamped_fraction}};
    }
    write_text(scenario_dir / "manifest.json", manifest.dump(2) + "\n");

    std::vector<RunOutcome> outcomes(options.runs);
    parallel_for(options.runs, threads, [&](int run) {
      try {
        sade::SadeConfig cfg = options.sade;
        cfg.seed = sr.run_seeds[run];
        const sade::SadeRunResult result = sade::run(objective, cfg);
        const double nrmse =
            nrmse_percent(result.best_theta, data.truth.weights());
        const fs::path run_dir = scenario_dir / run_dir_name(run);
        fs::create_directories(run_dir);
        write_text(run_dir / "result.json",
                   run_result_json(spec, result, run, nrmse, cfg,
                                   options.weighting)
                           .dump(2) +
                       "\n");
        write_text(run_dir / "traces.csv", traces_csv(result));
        outcomes[run] = {nrmse, result.best_fitness};
      } catch (const std::exception& e) {
        throw std::runtime_error("scenario " + name + ", run " +
                                 std::to_string(run) + ": " + e.what());
      }
    });

    std::vector<double> nrmses, fitnesses;
    for (const RunOutcome& o : outcomes) {
      nrmses.push_back(o.nrmse);
      fitnesses.push_back(o.fitness);
    }
    sr.nrmse = aggregate(nrmses);
    sr.fitness = aggregate(fitnesses);

    if (options.run_oracle) {
      const auto solved = oracle::solve_projected_subgradient(objective);
      sr.oracle_objective = solved.objective;
      sr.oracle_nrmse = nrmse_percent(solved.theta, data.truth.weights());
      json oracle_json{{"schema", "camid-result/1"},
                       {"solver", "oracle"},
                       {"scenario", spec_json(spec)},
                       {"weighting", weighting_name(options.weighting)},
                       {"k", sr.k},
                       {"best_theta", solved.theta},
                       {"best_fitness", solved.objective},
                       {"nrmse_percent", *sr.oracle_nrmse},
                       {"evaluations", solved.iterations},
                       {"converged", solved.converged}};
      write_text(scenario_dir / "oracle.json", oracle_json.dump(2) + "\n");
    }

    report.scenarios.push_back(std::move(sr));
  }

  // report.csv carries no timestamps: reruns with one master seed must be
  // byte-identical.
  std::string csv =
      "scenario,topology,radius,scheme,k,runs,nrmse_best,nrmse_mean,nrmse_sd,"
      "nrmse_max,j_best,j_mean,j_sd,j_max\n";
  for (const ScenarioReport& sr : report.scenarios) {
    csv += sr.name;
    csv += ',';
    csv += to_string(sr.spec.topology);
    csv += ',';
    csv += std::to_string(sr.spec.radius);
    csv += ',';
    csv += to_string(sr.spec.theta_scheme);
    csv += ',';
    csv += std::to_string(sr.k);
    csv += ',';
    csv += std::to_string(sr.runs);
    for (double v : {sr.nrmse.best, sr.nrmse.mean, sr.nrmse.sd, sr.nrmse.max,
                     sr.fitness.best, sr.fitness.mean, sr.fitness.sd,
                     sr.fitness.max}) {
      csv += ',';
      csv += format_double(v);
    }
    csv += '\n';
  }
  write_text(options.out_dir / "report.csv", csv);

  json jreport{{"schema", "camid-report/1"},
               {"master_seed", report.master_seed},
               {"runs_per_scenario", report.runs_per_scenario},
               {"suite_hash", report.suite_hash},
               {"suite_file", options.suite_file.string()},
               {"weighting", weighting_name(options.weighting)},
               {"sade_config", sade_config_json(options.sade)},
               {"started_utc", started_utc},
               {"finished_utc", utc_timestamp()},
               {"elapsed_seconds",
                std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                              started)
                    .count()}};
  jreport["scenarios"] = json::array();
  for (const ScenarioReport& sr : report.scenarios) {
    json js{{"name", sr.name},
            {"scenario", spec_json(sr.spec)},
            {"k", sr.k},
            {"runs", sr.runs},
            {"run_seeds", sr.run_seeds},
            {"nrmse",
             {{"best", sr.nrmse.best},
              {"mean", sr.nrmse.mean},
              {"sd", sr.nrmse.sd},
              {"max", sr.nrmse.max}}},
            {"fitness",
             {{"best", sr.fitness.best},
              {"mean", sr.fitness.mean},
              {"sd", sr.fitness.sd},
              {"max", sr.fitness.max}}}};
    if (sr.oracle_objective) {
      js["oracle"] = {{"objective", *sr.oracle_objective},
                      {"nrmse_percent", *sr.oracle_nrmse}};
    }
    jreport["scenarios"].push_back(std::move(js));
  }
  write_text(options.out_dir / "report.json", jreport.dump(2) + "\n");

  return report;
}

namespace {

struct TraceTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

TraceTable parse_csv(const fs::path& path) {
  TraceTable t;
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty trace file");
  std::stringstream head(line);
  std::string field;
  while (std::getline(head, field, ',')) t.header.push_back(field);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) row.push_back(std::stod(field));
    if (row.size() != t.header.size())
      throw std::runtime_error("ragged trace row in " + path.string());
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace

void emit_trace_summaries(const fs::path& scenario_dir, const fs::path& out_dir) {
  std::vector<fs::path> trace_files;
  for (const auto& entry : fs::directory_iterator(scenario_dir)) {
    if (!entry.is_directory()) continue;
    const fs::path f = entry.path() / "traces.csv";
    if (fs::exists(f)) trace_files.push_back(f);
  }
  std::sort(trace_files.begin(), trace_files.end());
  if (trace_files.empty())
    throw std::runtime_error("no run traces found under " +
                             scenario_dir.string());

  std::vector<TraceTable> tables;
  tables.reserve(trace_files.size());
  for (const auto& f : trace_files) tables.push_back(parse_csv(f));
  const std::size_t generations = tables.front().rows.size();
  const std::size_t columns = tables.front().header.size();
  for (const auto& t : tables)
    if (t.rows.size() != generations || t.header.size() != columns)
      throw std::runtime_error("trace files disagree in shape");

  const double nruns = static_cast<double>(tables.size());
  fs::create_directories(out_dir);

  std::string convergence = "generation,best_j_mean,best_j_min,best_j_max\n";
  std::string probs =
      "generation,p_rand1,p_rand_to_best2,p_rand2,p_current_to_rand1\n";
  std::string cvr =
      "generation,cvr_rand1,cvr_rand_to_best2,cvr_rand2,cvr_current_to_rand1\n";

  for (std::size_t g = 0; g < generations; ++g) {
    double mean = 0.0, lo = tables[0].rows[g][1], hi = lo;
    for (const auto& t : tables) {
      const double v = t.rows[g][1];
      mean += v;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    mean /= nruns;
    convergence += std::to_string(g + 1) + ',' + format_double(mean) + ',' +
                   format_double(lo) + ',' + format_double(hi) + '\n';

    probs += std::to_string(g + 1);
    for (int c = 2; c < 6; ++c) {
      double m = 0.0;
      for (const auto& t : tables) m += t.rows[g][c];
      probs += ',' + format_double(m / nruns);
    }
    probs += '\n';

    cvr += std::to_string(g + 1);
    for (int c = 6; c < 10; ++c) {
      double m = 0.0;
      for (const auto& t : tables) m += t.rows[g][c];
      cvr += ',' + format_double(m / nruns);
    }
    cvr += '\n';
  }

  write_text(out_dir / "convergence.csv", convergence);
  write_text(out_dir / "strategy_probabilities.csv", probs);
  write_text(out_dir / "constraint_violation_rate.csv", cvr);
}

void print_report(const fs::path& report_json, std::ostream& out) {
  const json doc = json::parse(read_text(report_json));
  out << "suite report  (master seed " << doc.at("master_seed")
      << ", runs/scenario " << doc.at("runs_per_scenario") << ")\n\n";

  auto print_block = [&](const char* title, const char* key) {
    out << title << '\n';
    char line[160];
    std::snprintf(line, sizeof(line), "  %-26s %4s %10s %10s %12s %10s\n",
                  "scenario", "K", "best", "mean", "sd", "max");
    out << line;
    for (const auto& s : doc.at("scenarios")) {
      const auto& b = s.at(key);
      std::snprintf(line, sizeof(line),
                    "  %-26s %4d %10.4g %10.4g %12.4g %10.4g\n",
                    s.at("name").get<std::string>().c_str(),
                    s.at("k").get<int>(), b.at("best").get<double>(),
                    b.at("mean").get<double>(), b.at("sd").get<double>(),
                    b.at("max").get<double>());
      out << line;
    }
    out << '\n';
  };
  print_block("parameter estimation error, NRMSE %", "nrmse");
  print_block("fitness J at the returned optimum", "fitness");
}

}  // namespace camid::suite
