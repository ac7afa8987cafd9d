#include <fstream>
#include <sstream>

#include "adaagc/experiment.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace adaagc;
namespace fs = std::filesystem;

namespace {

const fs::path kData = ADAAGC_TEST_DATA_DIR;

std::string results_without_wall_time(const std::vector<CellResult>& rows) {
  std::vector<CellResult> copy = rows;
  for (auto& r : copy) r.wall_seconds = 0.0;
  std::ostringstream out;
  write_results_csv(out, copy);
  return out.str();
}

CellResult row(std::string solver, double eps, std::int64_t calls) {
  CellResult r;
  r.solver = std::move(solver);
  r.dataset = "bodyfat";
  r.loss = "square";
  r.regularizer = "l1";
  r.lambda = 1.0 / 252.0;
  r.eps = eps;
  r.prox_calls = calls;
  r.status = RunStatus::converged;
  return r;
}

ExperimentConfig parse(const std::string& text) { return parse_experiment_config(text, kData); }

const char* kMinimal = R"({
  "dataset": {"path": "tiny.libsvm"},
  "loss": "square",
  "regularizer": {"kind": "l1", "lambda": "1/n"},
  "eps": 1e-4,
  "solvers": [{"kind": "pg"}]
})";

}  // namespace

TEST_SUITE("experiment") {

TEST_CASE("minimal config") {
  const auto cfg = parse(kMinimal);
  CHECK(cfg.dataset_name == "tiny");
  CHECK(cfg.dataset_path == kData / "tiny.libsvm");
  REQUIRE(cfg.problems.size() == 1);
  CHECK(cfg.problems[0].lambda_is_inverse_n);
  CHECK(cfg.problems[0].resolved_theta() == 0.5);
  CHECK(cfg.eps == std::vector<double>{1e-4});
  REQUIRE(cfg.solvers.size() == 1);
  CHECK(cfg.solvers[0].name == "pg-II");
  CHECK(cfg.max_prox_calls == 10'000'000);
  CHECK(cfg.step_policy == StepPolicy::backtracking);
}

TEST_CASE("theta defaults by problem class") {
  const auto cfg = parse(R"({
    "dataset": {"path": "tiny.libsvm"},
    "problems": [
      {"loss": "power_4", "regularizer": {"kind": "l1_ball", "radius": 100}},
      {"loss": "square", "regularizer": {"kind": "l1", "lambda": 0.1}, "theta": 0.3}
    ],
    "eps": [1e-3],
    "solvers": [{"kind": "adaagc", "c0": 10, "gamma": 2}]
  })");
  CHECK(cfg.problems[0].resolved_theta() == 0.25);
  CHECK(cfg.problems[1].resolved_theta() == 0.3);
  CHECK(cfg.solvers[0].heb.c0 == 10.0);
}

TEST_CASE("config validation") {
  const std::vector<std::pair<const char*, const char*>> cases = {
      {R"({"dataset": {"path": "tiny.libsvm"}, "loss": "square",
           "regularizer": {"kind": "l1", "lambda": 1}, "eps": 1e-3, "solvers": []})",
       "no solvers listed"},
      {R"({"dataset": {"path": "tiny.libsvm"}, "loss": "square",
           "regularizer": {"kind": "l1", "lambda": 1}, "eps": -1, "solvers": [{"kind": "pg"}]})",
       "eps"},
      {R"({"dataset": {"path": "tiny.libsvm"}, "loss": "square", "colour": 1,
           "regularizer": {"kind": "l1", "lambda": 1}, "eps": 1e-3, "solvers": [{"kind": "pg"}]})",
       "unknown key"},
      {R"({"dataset": {"path": "tiny.libsvm"}, "loss": "cube",
           "regularizer": {"kind": "l1", "lambda": 1}, "eps": 1e-3, "solvers": [{"kind": "pg"}]})",
       "unknown loss"},
      {R"({"dataset": {"path": "tiny.libsvm"}, "loss": "square",
           "regularizer": {"kind": "l1", "lambda": 1}, "eps": 1e-3,
           "solvers": [{"kind": "pg"}, {"kind": "pg"}]})",
       "duplicate solver name"},
      {R"({"dataset": {"path": "tiny.libsvm"}, "loss": "square",
           "regularizer": {"kind": "l1", "lambda": 1}, "eps": 1e-3, "solvers": [{"kind": "rapg"}]})",
       "rapg needs"},
      {R"({"dataset": {"path": "tiny.libsvm"}, "loss": "square",
           "regularizer": {"kind": "l1", "lambda": 1}, "eps": 1e-3,
           "solvers": [{"kind": "adaagc", "gamma": 1}]})",
       "gamma"},
      {"{not json", "invalid JSON"},
  };
  for (const auto& [text, needle] : cases) {
    const std::string expected = needle;
    CAPTURE(expected);
    try {
      parse(text);
      FAIL("accepted an invalid config");
    } catch (const InvalidConfiguration& e) {
      const std::string message = e.what();
      CAPTURE(message);
      CHECK(message.find(expected) != std::string::npos);
    }
  }
}

TEST_CASE("missing dataset") {
  auto cfg = parse(kMinimal);
  cfg.dataset_path = kData / "absent.libsvm";
  CHECK_THROWS_WITH_AS(run_experiment(cfg), doctest::Contains("dataset not found"), Error);
}

TEST_CASE("tiny experiment runs every cell and is deterministic") {
  const auto cfg = load_experiment_config(kData / "tiny_experiment.json");
  const auto serial = run_experiment(cfg);
  REQUIRE(serial.size() == 2 * 3 * 2);
  for (const auto& r : serial) {
    CHECK(r.status == RunStatus::converged);
    CHECK(r.prox_calls > 0);
  }
  CHECK(serial[0].solver == "PG");
  CHECK(serial[0].loss == "square");
  CHECK(serial[0].lambda == doctest::Approx(0.2));
  CHECK(serial[0].eps == 1e-3);
  CHECK(serial[1].eps == 1e-5);
  CHECK(serial[6].regularizer == "linf");
  CHECK(serial[6].lambda == 0.1);

  const fs::path traces = fs::temp_directory_path() / "adaagc_trace_test";
  fs::remove_all(traces);
  fs::create_directories(traces);
  RunOptions opts;
  opts.jobs = 4;
  opts.trace_dir = traces;
  const auto parallel = run_experiment(cfg, opts);
  CHECK(results_without_wall_time(serial) == results_without_wall_time(parallel));
  CHECK(std::distance(fs::directory_iterator(traces), fs::directory_iterator{}) == 12);

  // the last line of every trace carries the terminal counter
  std::ifstream first(traces / "cell0000_PG_square_l1_eps0.001.csv");
  REQUIRE(first.good());
  std::string line;
  std::string last;
  std::getline(first, line);
  CHECK(line == "iteration,objective,prox_grad_norm,prox_calls");
  while (std::getline(first, line)) last = line;
  CHECK(last.substr(last.rfind(',') + 1) == std::to_string(parallel[0].prox_calls));
  fs::remove_all(traces);
}

TEST_CASE("results CSV round trip") {
  std::vector<CellResult> rows = {row("PG", 1e-6, 1871925), row("adaAGC", 1e-6, 40526)};
  rows[1].status = RunStatus::budget_exhausted;
  rows[1].wall_seconds = 1.25;
  std::ostringstream out;
  write_results_csv(out, rows);
  const std::string text = out.str();
  CHECK(text.starts_with(std::string(kResultsHeader) + "\n"));
  CHECK(text.find("adaAGC,bodyfat,square,l1,0.003968253968253968,1e-6,40526,1.250000,"
                  "budget_exhausted") != std::string::npos);
  std::istringstream in(text);
  const auto back = read_results_csv(in);
  REQUIRE(back.size() == 2);
  CHECK(back[1].prox_calls == 40526);
  CHECK(back[1].status == RunStatus::budget_exhausted);
  CHECK(back[0].eps == 1e-6);

  std::istringstream broken(std::string(kResultsHeader) + "\nPG,bodyfat\n");
  CHECK_THROWS_AS(read_results_csv(broken), ParseError);
}

TEST_CASE("compare report") {
  std::ostringstream warnings;
  const std::vector<CellResult> rows = {row("PG", 1e-6, 1871925), row("adaAGC", 1e-6, 40526)};
  const std::string report = compare_report(rows, "PG", warnings);
  CHECK(report.find("bodyfat,square,l1,1e-6,adaAGC,40526,1871925,46.19") != std::string::npos);
  CHECK(report.find("bodyfat,square,l1,1e-6,PG,1871925,1871925,1.00") != std::string::npos);
  CHECK(warnings.str().empty());

  // a single solver compares against itself
  const std::string self = compare_report({row("PG", 1e-4, 10), row("PG", 1e-5, 20)}, "", warnings);
  CHECK(self.find(",1.00\n") != std::string::npos);
  CHECK(self.find("1e-5,PG,20,20,1.00") != std::string::npos);

  const std::string partial =
      compare_report({row("PG", 1e-4, 10), row("adaAGC", 1e-5, 5)}, "PG", warnings);
  CHECK(warnings.str().find("skipping adaAGC") != std::string::npos);
  CHECK(partial.find("adaAGC") == std::string::npos);
}

TEST_CASE("power scaling report") {
  std::vector<CellResult> rows;
  for (auto [p, calls] : {std::pair{2, 100}, std::pair{4, 400}, std::pair{8, 1600}}) {
    CellResult r = row("PG", 1e-3, calls);
    r.loss = "power_" + std::to_string(p);
    r.regularizer = "l1_ball";
    r.lambda = 100;
    rows.push_back(r);
  }
  const std::string report = power_scaling_report(rows);
  CHECK(report.find("PG,bodyfat,l1_ball,0.001,power_8,1600,16.00") != std::string::npos);
  CHECK(report.find("power_2,100,1.00") != std::string::npos);
  CHECK(power_scaling_report({row("PG", 1e-3, 5)}).empty());
}

TEST_CASE("number formatting") {
  CHECK(format_number(1e-4) == "1e-4");
  CHECK(format_number(1e-10) == "1e-10");
  CHECK(format_number(0.5) == "0.5");
  CHECK(format_number(100) == "100");
  CHECK(format_number(1e20) == "1e+20");
  CHECK(format_number(1.5e-7) == "1.5e-7");
}

}
