// Benchmark driver.
//
//   adaagc_bench run <config.json> [--out results.csv] [--trace-dir DIR] [--jobs N]
//   adaagc_bench report <results.csv>... [--baseline NAME]

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "adaagc/experiment.hpp"

namespace {

int run_command(const std::string& config_path, const std::string& out_path,
                const std::string& trace_dir, int jobs) {
  const adaagc::ExperimentConfig config =
      adaagc::load_experiment_config(config_path);
  adaagc::RunOptions options;
  options.jobs = jobs;
  if (!trace_dir.empty()) options.trace_dir = trace_dir;
  const auto results = adaagc::run_experiment(config, options);

  if (out_path.empty() || out_path == "-") {
    adaagc::write_results_csv(std::cout, results);
  } else {
    std::ofstream out(out_path);
    if (!out) throw adaagc::Error("cannot write " + out_path);
    adaagc::write_results_csv(out, results);
  }

  bool all_converged = true;
  for (const auto& r : results) {
    if (r.status != adaagc::RunStatus::converged) {
      all_converged = false;
      std::cerr << r.solver << " " << r.loss << " eps="
                << adaagc::format_number(r.eps) << ": "
                << adaagc::to_string(r.status);
      if (!r.message.empty()) std::cerr << " (" << r.message << ")";
      std::cerr << '\n';
    }
  }
  const std::string scaling = adaagc::power_scaling_report(results);
  if (!scaling.empty()) std::cerr << scaling;
  return all_converged ? 0 : 1;
}

int report_command(const std::vector<std::string>& paths,
                   const std::string& baseline) {
  std::vector<adaagc::CellResult> rows;
  for (const auto& p : paths) {
    std::ifstream in(p);
    if (!in) throw adaagc::Error("cannot open " + p);
    auto part = adaagc::read_results_csv(in);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  std::cout << adaagc::compare_report(rows, baseline, std::cerr);
  const std::string scaling = adaagc::power_scaling_report(rows);
  if (!scaling.empty()) std::cout << '\n' << scaling;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Prox-call benchmarks for first-order composite solvers"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::string trace_dir;
  int jobs = 1;
  auto* run = app.add_subcommand("run", "Run every cell of an experiment config");
  run->add_option("config", config_path, "JSON experiment config")
      ->required()
      ->check(CLI::ExistingFile);
  run->add_option("--out,-o", out_path, "Results CSV (default: stdout)");
  run->add_option("--trace-dir", trace_dir, "Write one trace CSV per cell here");
  run->add_option("--jobs,-j", jobs, "Worker threads")
      ->check(CLI::Range(1, 1024));

  std::vector<std::string> csvs;
  std::string baseline;
  auto* report = app.add_subcommand("report", "Speedup factors against a baseline");
  report->add_option("csv", csvs, "Results CSV files")->required();
  report->add_option("--baseline", baseline,
                     "Baseline solver name (default: first solver seen)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return run_command(config_path, out_path, trace_dir, jobs);
    return report_command(csvs, baseline);
  } catch (const adaagc::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
