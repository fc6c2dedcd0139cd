// camid command-line tool: dataset generation, suite runs, trace summaries,
// and report display. See docs/file-formats.md for every file schema.
#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "camid/kernels.hpp"
#include "camid/scenario.hpp"
#include "camid/suite.hpp"

namespace {

struct ScenarioGenArgs {
  std::string topology = "manhattan";
  int radius = 1;
  std::string scheme = "random";
  int height = 51;
  int width = 51;
  int steps = 10;
  double snr_db = 40.0;
  bool no_noise = false;
  std::uint64_t seed = 1;
  std::string out;
};

int run_scenario_gen(const ScenarioGenArgs& a) {
  camid::ScenarioSpec spec;
  spec.topology = camid::topology_from_string(a.topology);
  spec.radius = a.radius;
  spec.theta_scheme = camid::theta_scheme_from_string(a.scheme);
  spec.height = a.height;
  spec.width = a.width;
  spec.steps = a.steps;
  if (a.no_noise)
    spec.snr_db.reset();
  else
    spec.snr_db = a.snr_db;
  spec.seed = a.seed;

  const camid::ObservedDataset data = camid::build_dataset(spec);
  camid::write_dataset_archive(data, a.out);
  std::cout << "wrote dataset " << spec.name() << " (K=" << data.truth.size()
            << ", " << spec.height << "x" << spec.width << ", T=" << spec.steps
            << ") to " << a.out << '\n';
  if (data.noise)
    std::cout << "noise sigma " << data.noise->sigma << ", empirical SNR "
              << data.noise->empirical_snr_db << " dB\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Identification experiments for measure-valued cellular automata"};
  app.require_subcommand(1);

  // scenario gen
  auto* scenario = app.add_subcommand("scenario", "dataset operations");
  scenario->require_subcommand(1);
  ScenarioGenArgs gen_args;
  auto* gen = scenario->add_subcommand("gen", "generate a dataset archive");
  gen->add_option("--topology", gen_args.topology, "manhattan | moore")
      ->capture_default_str();
  gen->add_option("--radius", gen_args.radius, "neighborhood radius (>= 1)")
      ->capture_default_str();
  gen->add_option("--scheme", gen_args.scheme, "random | distance")
      ->capture_default_str();
  gen->add_option("--height", gen_args.height)->capture_default_str();
  gen->add_option("--width", gen_args.width)->capture_default_str();
  gen->add_option("--steps", gen_args.steps, "trajectory length T")
      ->capture_default_str();
  gen->add_option("--snr-db", gen_args.snr_db, "observation noise SNR in dB")
      ->capture_default_str();
  gen->add_flag("--no-noise", gen_args.no_noise, "emit noiseless observations");
  gen->add_option("--seed", gen_args.seed)->capture_default_str();
  gen->add_option("--out", gen_args.out, "output directory")->required();

  // suite run
  auto* suite = app.add_subcommand("suite", "experiment suites");
  suite->require_subcommand(1);
  auto* run = suite->add_subcommand("run", "run every scenario x run job");
  std::string suite_file, suite_out;
  camid::suite::SuiteOptions opt;
  run->add_option("suite", suite_file, "suite JSON file")->required();
  run->add_option("--runs", opt.runs, "independent runs per scenario")
      ->capture_default_str();
  run->add_option("--out", suite_out, "output directory")->required();
  run->add_option("--master-seed", opt.master_seed)->capture_default_str();
  run->add_flag("--oracle", opt.run_oracle,
                "also solve each scenario with the convex oracle");
  run->add_option("--threads", opt.threads,
                  "worker threads (default: CAMID_THREADS or all cores)");
  std::string weighting = "centered";
  run->add_option("--weighting", weighting, "centered | uniform")
      ->capture_default_str();
  run->add_option("--generations", opt.sade.max_generations,
                  "search generations per run")
      ->capture_default_str();
  run->add_option("--population", opt.sade.population)->capture_default_str();

  // traces emit
  auto* traces = app.add_subcommand("traces", "trace post-processing");
  traces->require_subcommand(1);
  auto* emit = traces->add_subcommand(
      "emit", "aggregate run traces of one scenario directory");
  std::string traces_dir, traces_out;
  emit->add_option("scenario_dir", traces_dir,
                   "scenario directory containing run-NN/traces.csv")
      ->required();
  emit->add_option("--out", traces_out, "output directory")->required();

  // report show
  auto* report = app.add_subcommand("report", "report display");
  report->require_subcommand(1);
  auto* show = report->add_subcommand("show", "pretty-print report.json");
  std::string report_file;
  show->add_option("report_json", report_file)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return run_scenario_gen(gen_args);
    if (run->parsed()) {
      opt.suite_file = suite_file;
      opt.out_dir = suite_out;
      opt.weighting = weighting == "uniform" ? camid::WeightScheme::uniform
                                             : camid::WeightScheme::centered;
      std::cout << "kernel: " << camid::kernels::active().name << ", threads: "
                << camid::suite::resolve_threads(opt.threads) << '\n';
      camid::suite::run_suite(opt);
      camid::suite::print_report(opt.out_dir / "report.json", std::cout);
      return 0;
    }
    if (emit->parsed()) {
      camid::suite::emit_trace_summaries(traces_dir, traces_out);
      std::cout << "wrote trace summaries to " << traces_out << '\n';
      return 0;
    }
    if (show->parsed()) {
      camid::suite::print_report(report_file, std::cout);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
