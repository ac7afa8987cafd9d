#include "adaagc/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

#include "json.hpp"

namespace adaagc {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& what) {
  throw InvalidConfiguration("config: " + what);
}

void check_keys(const json& obj, const std::set<std::string>& allowed,
                const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.contains(it.key())) {
      bad("unknown key '" + it.key() + "' in " + where);
    }
  }
}

double number(const json& j, const std::string& what) {
  if (!j.is_number()) bad(what + " must be a number");
  return j.get<double>();
}

LossKind parse_loss(const json& j) {
  std::string kind;
  double delta = 1.0;
  int p = 2;
  if (j.is_string()) {
    kind = j.get<std::string>();
    if (kind.starts_with("power_")) {
      const std::string digits = kind.substr(6);
      const auto* end = digits.data() + digits.size();
      auto [ptr, ec] = std::from_chars(digits.data(), end, p);
      if (ec != std::errc() || ptr != end) bad("bad power loss '" + kind + "'");
      kind = "power";
    }
  } else if (j.is_object()) {
    check_keys(j, {"kind", "delta", "p"}, "loss");
    if (!j.contains("kind") || !j["kind"].is_string()) bad("loss needs a kind");
    kind = j["kind"].get<std::string>();
    if (j.contains("delta")) delta = number(j["delta"], "loss delta");
    if (j.contains("p")) {
      if (!j["p"].is_number_integer()) bad("power p must be an integer");
      p = j["p"].get<int>();
    }
  } else {
    bad("loss must be a string or an object");
  }
  if (kind == "square") return LossKind::square();
  if (kind == "squared_hinge") return LossKind::squared_hinge();
  if (kind == "logistic") return LossKind::logistic();
  if (kind == "huber") return LossKind::huber(delta);
  if (kind == "power") return LossKind::power(p);
  bad("unknown loss '" + kind + "'");
}

struct ParsedRegularizer {
  RegularizerKind kind;
  bool inverse_n = false;
};

ParsedRegularizer parse_regularizer(const json& j) {
  if (!j.is_object()) bad("regularizer must be an object");
  check_keys(j, {"kind", "lambda", "delta", "radius", "groups"},
             "regularizer");
  if (!j.contains("kind") || !j["kind"].is_string()) {
    bad("regularizer needs a kind");
  }
  const std::string kind = j["kind"].get<std::string>();
  ParsedRegularizer out;
  double lambda = 1.0;
  if (kind != "l1_ball") {
    if (!j.contains("lambda")) bad(kind + " needs lambda");
    const json& l = j["lambda"];
    if (l.is_string()) {
      if (l.get<std::string>() != "1/n") bad("lambda must be a number or \"1/n\"");
      out.inverse_n = true;
    } else {
      lambda = number(l, "lambda");
    }
  }
  if (kind == "l1") {
    out.kind = RegularizerKind::l1(lambda);
  } else if (kind == "linf") {
    out.kind = RegularizerKind::linf(lambda);
  } else if (kind == "huber_norm") {
    const double delta = j.contains("delta") ? number(j["delta"], "delta") : 1.0;
    out.kind = RegularizerKind::huber_norm(lambda, delta);
  } else if (kind == "l1inf_groups") {
    if (!j.contains("groups") || !j["groups"].is_array() || j["groups"].empty()) {
      bad("l1inf_groups needs a nonempty list of group sizes");
    }
    std::vector<Index> bounds{0};
    for (const auto& g : j["groups"]) {
      if (!g.is_number_integer() || g.get<long long>() <= 0) {
        bad("group sizes must be positive integers");
      }
      bounds.push_back(bounds.back() + g.get<Index>());
    }
    out.kind = RegularizerKind::l1inf_groups(lambda, std::move(bounds));
  } else if (kind == "l1_ball") {
    if (!j.contains("radius")) bad("l1_ball needs radius");
    out.kind = RegularizerKind::l1_ball(number(j["radius"], "radius"));
  } else {
    bad("unknown regularizer '" + kind + "'");
  }
  return out;
}

ProblemSpec parse_problem(const json& j) {
  if (!j.is_object()) bad("problem must be an object");
  check_keys(j, {"loss", "regularizer", "theta"}, "problem");
  if (!j.contains("loss") || !j.contains("regularizer")) {
    bad("problem needs loss and regularizer");
  }
  ProblemSpec p;
  p.loss = parse_loss(j["loss"]);
  ParsedRegularizer r = parse_regularizer(j["regularizer"]);
  p.regularizer = std::move(r.kind);
  p.lambda_is_inverse_n = r.inverse_n;
  if (j.contains("theta")) {
    const double theta = number(j["theta"], "theta");
    if (!(theta > 0.0 && theta <= 1.0)) bad("theta must lie in (0, 1]");
    p.theta = theta;
  }
  return p;
}

SolverSpec parse_solver(const json& j) {
  if (!j.is_object()) bad("solver must be an object");
  check_keys(j, {"name", "kind", "option", "c0", "gamma", "c"}, "solver");
  if (!j.contains("kind") || !j["kind"].is_string()) bad("solver needs a kind");
  const std::string kind = j["kind"].get<std::string>();
  SolverSpec s;
  if (kind == "pg") {
    s.kind = SolverSpec::Kind::pg;
  } else if (kind == "apg") {
    s.kind = SolverSpec::Kind::apg;
  } else if (kind == "rapg") {
    s.kind = SolverSpec::Kind::rapg;
  } else if (kind == "adaagc") {
    s.kind = SolverSpec::Kind::adaagc;
  } else {
    bad("unknown solver kind '" + kind + "'");
  }
  if (j.contains("option")) {
    if (s.kind != SolverSpec::Kind::pg) bad("option only applies to pg");
    const std::string opt = j["option"].is_string() ? j["option"].get<std::string>() : "";
    if (opt == "I") {
      s.option = PgOption::I;
    } else if (opt == "II") {
      s.option = PgOption::II;
    } else {
      bad("pg option must be \"I\" or \"II\"");
    }
  }
  if (j.contains("c0")) s.heb.c0 = number(j["c0"], "c0");
  if (j.contains("gamma")) s.heb.gamma = number(j["gamma"], "gamma");
  if (j.contains("c")) s.c = number(j["c"], "c");
  if (s.kind == SolverSpec::Kind::rapg && !s.c) bad("rapg needs the constant c");
  s.heb.validate();
  if (j.contains("name")) {
    if (!j["name"].is_string() || j["name"].get<std::string>().empty()) {
      bad("solver name must be a nonempty string");
    }
    s.name = j["name"].get<std::string>();
  } else {
    s.name = kind;
    if (s.kind == SolverSpec::Kind::pg) {
      s.name += s.option == PgOption::I ? "-I" : "-II";
    }
  }
  if (s.name.find_first_of(",\n\"") != std::string::npos) {
    bad("solver name may not contain commas, quotes or newlines");
  }
  return s;
}

std::string sanitize(std::string s) {
  for (char& ch : s) {
    const bool ok = std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' ||
                    ch == '_' || ch == '.';
    if (!ok) ch = '_';
  }
  return s;
}

void write_trace(const fs::path& file, const RunTrace& trace) {
  std::ofstream out(file);
  if (!out) throw Error("cannot write trace file " + file.string());
  out << "iteration,objective,prox_grad_norm,prox_calls\n";
  for (const auto& r : trace.iterations) {
    out << r.iteration << ',' << format_number(r.objective) << ','
        << format_number(r.prox_grad_norm) << ',' << r.prox_calls << '\n';
  }
}

struct Cell {
  std::size_t problem;
  std::size_t solver;
  std::size_t eps;
};

struct PreparedProblem {
  std::shared_ptr<const LabeledDataset> data;
  RegularizerKind regularizer;
  double theta;
};

RunTrace run_solver(const SolverSpec& s, const CompositeProblem& problem,
                    double theta, const SolverConfig& cfg) {
  const Vector x0 = Vector::Zero(problem.dimension());
  switch (s.kind) {
    case SolverSpec::Kind::pg:
      return pg(problem, x0, cfg, s.option);
    case SolverSpec::Kind::apg:
      return apg(problem, x0, cfg);
    case SolverSpec::Kind::rapg:
      // Losses and regularizers are nonnegative, so F(0) bounds F(0) - F*.
      return rapg(problem, x0, theta, *s.c,
                  std::max(problem.objective(x0), cfg.target_eps), cfg);
    case SolverSpec::Kind::adaagc: {
      HebParams heb = s.heb;
      heb.theta = theta;
      return adaagc_composite(problem, x0, heb, cfg);
    }
  }
  throw InvalidConfiguration("unknown solver kind");
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

RunStatus parse_status(const std::string& s) {
  if (s == "converged") return RunStatus::converged;
  if (s == "budget_exhausted") return RunStatus::budget_exhausted;
  if (s == "failed") return RunStatus::failed;
  throw InvalidConfiguration("unknown status '" + s + "'");
}

std::string fixed2(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(2) << v;
  return os.str();
}

}  // namespace

double ProblemSpec::resolved_theta() const {
  if (theta) return *theta;
  if (loss.tag == LossKind::Tag::power) return 1.0 / loss.p;
  return 0.5;
}

void ExperimentConfig::validate() const {
  if (solvers.empty()) throw InvalidConfiguration("config: no solvers listed");
  if (problems.empty()) throw InvalidConfiguration("config: no problems listed");
  if (eps.empty()) throw InvalidConfiguration("config: no eps values listed");
  for (double e : eps) {
    if (!(e > 0.0)) throw InvalidConfiguration("config: eps must be positive");
  }
  if (max_prox_calls <= 0) {
    throw InvalidConfiguration("config: max_prox_calls must be positive");
  }
  std::set<std::string> names;
  for (const auto& s : solvers) {
    if (!names.insert(s.name).second) {
      throw InvalidConfiguration("config: duplicate solver name " + s.name);
    }
  }
}

ExperimentConfig parse_experiment_config(std::string_view json_text,
                                         const fs::path& base_dir) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    bad(std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) bad("top level must be an object");
  check_keys(root,
             {"dataset", "problems", "loss", "regularizer", "theta", "eps",
              "max_prox_calls", "step_policy", "solvers"},
             "config");

  ExperimentConfig cfg;
  if (!root.contains("dataset") || !root["dataset"].is_object()) {
    bad("missing dataset object");
  }
  const json& ds = root["dataset"];
  check_keys(ds, {"name", "path", "scaling"}, "dataset");
  if (!ds.contains("path") || !ds["path"].is_string()) bad("dataset needs a path");
  fs::path path = ds["path"].get<std::string>();
  cfg.dataset_path = path.is_absolute() ? path : base_dir / path;
  cfg.dataset_name = ds.contains("name") && ds["name"].is_string()
                         ? ds["name"].get<std::string>()
                         : path.stem().string();
  if (ds.contains("scaling")) {
    if (!ds["scaling"].is_string()) bad("scaling must be a string");
    cfg.scaling = parse_scaling_mode(ds["scaling"].get<std::string>());
  }

  if (root.contains("problems")) {
    if (root.contains("loss") || root.contains("regularizer") ||
        root.contains("theta")) {
      bad("give either a problems list or a single loss/regularizer");
    }
    if (!root["problems"].is_array()) bad("problems must be a list");
    for (const auto& p : root["problems"]) {
      cfg.problems.push_back(parse_problem(p));
    }
  } else {
    json single = json::object();
    for (const char* key : {"loss", "regularizer", "theta"}) {
      if (root.contains(key)) single[key] = root[key];
    }
    cfg.problems.push_back(parse_problem(single));
  }

  if (!root.contains("eps")) bad("missing eps");
  if (root["eps"].is_array()) {
    for (const auto& e : root["eps"]) cfg.eps.push_back(number(e, "eps"));
  } else {
    cfg.eps.push_back(number(root["eps"], "eps"));
  }
  if (root.contains("max_prox_calls")) {
    if (!root["max_prox_calls"].is_number_integer()) {
      bad("max_prox_calls must be an integer");
    }
    cfg.max_prox_calls = root["max_prox_calls"].get<std::int64_t>();
  }
  if (root.contains("step_policy")) {
    const std::string sp =
        root["step_policy"].is_string() ? root["step_policy"].get<std::string>() : "";
    if (sp == "fixed") {
      cfg.step_policy = StepPolicy::fixed;
    } else if (sp == "backtracking") {
      cfg.step_policy = StepPolicy::backtracking;
    } else {
      bad("step_policy must be \"fixed\" or \"backtracking\"");
    }
  }
  if (!root.contains("solvers") || !root["solvers"].is_array()) {
    bad("missing solvers list");
  }
  for (const auto& s : root["solvers"]) cfg.solvers.push_back(parse_solver(s));
  cfg.validate();
  return cfg;
}

ExperimentConfig load_experiment_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_experiment_config(buf.str(), path.parent_path());
}

std::vector<CellResult> run_experiment(const ExperimentConfig& config,
                                       const RunOptions& options) {
  config.validate();
  if (!fs::exists(config.dataset_path)) {
    throw Error("dataset not found: " + config.dataset_path.string());
  }
  const LabeledDataset raw =
      scale_features(load_libsvm(config.dataset_path), config.scaling);
  if (raw.n() == 0) throw Error("dataset is empty: " + config.dataset_path.string());
  if (options.trace_dir) fs::create_directories(*options.trace_dir);

  auto regression = std::make_shared<const LabeledDataset>(raw);
  std::shared_ptr<const LabeledDataset> classification;
  std::vector<PreparedProblem> prepared;
  for (const auto& p : config.problems) {
    PreparedProblem pp;
    if (p.loss.is_classification()) {
      if (!classification) {
        classification = std::make_shared<const LabeledDataset>(as_classification(raw));
      }
      pp.data = classification;
    } else {
      pp.data = regression;
    }
    pp.regularizer = p.regularizer;
    if (p.lambda_is_inverse_n) {
      pp.regularizer.lambda = 1.0 / static_cast<double>(raw.n());
    }
    pp.theta = p.resolved_theta();
    prepared.push_back(std::move(pp));
  }

  std::vector<Cell> cells;
  for (std::size_t p = 0; p < config.problems.size(); ++p) {
    for (std::size_t s = 0; s < config.solvers.size(); ++s) {
      for (std::size_t e = 0; e < config.eps.size(); ++e) {
        cells.push_back({p, s, e});
      }
    }
  }
  std::vector<CellResult> results(cells.size());

  auto run_cell = [&](std::size_t idx) {
    const Cell& c = cells[idx];
    const ProblemSpec& spec = config.problems[c.problem];
    const PreparedProblem& pp = prepared[c.problem];
    const SolverSpec& solver = config.solvers[c.solver];
    CellResult& r = results[idx];
    r.solver = solver.name;
    r.dataset = config.dataset_name;
    r.loss = spec.loss.name();
    r.regularizer = pp.regularizer.name();
    r.lambda = pp.regularizer.tag == RegularizerKind::Tag::l1_ball
                   ? pp.regularizer.radius
                   : pp.regularizer.lambda;
    r.eps = config.eps[c.eps];

    SolverConfig cfg;
    cfg.target_eps = r.eps;
    cfg.max_prox_calls = config.max_prox_calls;
    cfg.step_policy = config.step_policy;
    cfg.record_iterations = options.trace_dir.has_value();
    const auto start = std::chrono::steady_clock::now();
    try {
      CompositeProblem problem(make_empirical_loss(spec.loss, pp.data),
                               make_regularizer(pp.regularizer, pp.data->d()),
                               pp.data->d());
      const RunTrace trace = run_solver(solver, problem, pp.theta, cfg);
      r.prox_calls = trace.prox_calls;
      r.status = trace.status;
      r.message = trace.message;
      if (options.trace_dir) {
        std::ostringstream name;
        name << "cell" << std::setw(4) << std::setfill('0') << idx << '_'
             << sanitize(r.solver) << '_' << sanitize(r.loss) << '_'
             << sanitize(r.regularizer) << "_eps" << sanitize(format_number(r.eps))
             << ".csv";
        write_trace(*options.trace_dir / name.str(), trace);
      }
    } catch (const Error& e) {
      r.status = RunStatus::failed;
      r.message = e.what();
    }
    r.wall_seconds = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - start)
                         .count();
  };

  const std::size_t workers = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::max(options.jobs, 1)), 1, cells.size());
  if (workers == 1) {
    for (std::size_t i = 0; i < cells.size(); ++i) run_cell(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) run_cell(i);
      });
    }
  }
  return results;
}

std::string format_number(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  std::string s(buf, ptr);
  // "1e-04" -> "1e-4"
  if (const auto e = s.find('e'); e != std::string::npos) {
    std::size_t digits = e + 1;
    if (digits < s.size() && (s[digits] == '-' || s[digits] == '+')) ++digits;
    std::size_t nz = digits;
    while (nz + 1 < s.size() && s[nz] == '0') ++nz;
    s.erase(digits, nz - digits);
  }
  return s;
}

void write_results_csv(std::ostream& out,
                       const std::vector<CellResult>& results) {
  out << kResultsHeader << '\n';
  for (const auto& r : results) {
    std::ostringstream wall;
    wall << std::fixed << std::setprecision(6) << r.wall_seconds;
    out << r.solver << ',' << r.dataset << ',' << r.loss << ',' << r.regularizer
        << ',' << format_number(r.lambda) << ',' << format_number(r.eps) << ','
        << r.prox_calls << ',' << wall.str() << ',' << to_string(r.status)
        << '\n';
  }
}

std::vector<CellResult> read_results_csv(std::istream& in) {
  std::vector<CellResult> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line == kResultsHeader) continue;
    const auto f = split_csv(line);
    if (f.size() != 9) {
      throw ParseError(lineno, "expected 9 CSV fields, got " +
                                   std::to_string(f.size()));
    }
    CellResult r;
    r.solver = f[0];
    r.dataset = f[1];
    r.loss = f[2];
    r.regularizer = f[3];
    try {
      r.lambda = std::stod(f[4]);
      r.eps = std::stod(f[5]);
      r.prox_calls = std::stoll(f[6]);
      r.wall_seconds = std::stod(f[7]);
      r.status = parse_status(f[8]);
    } catch (const std::exception& e) {
      throw ParseError(lineno, std::string("bad field: ") + e.what());
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string compare_report(const std::vector<CellResult>& rows,
                           std::string baseline, std::ostream& warnings) {
  if (baseline.empty() && !rows.empty()) baseline = rows.front().solver;
  using Key = std::tuple<std::string, std::string, std::string, std::string>;
  auto key_of = [](const CellResult& r) {
    return Key{r.dataset, r.loss, r.regularizer, format_number(r.eps)};
  };
  std::map<Key, std::int64_t> base;
  for (const auto& r : rows) {
    if (r.solver == baseline) base.emplace(key_of(r), r.prox_calls);
  }
  std::ostringstream out;
  out << "dataset,loss,regularizer,eps,solver,prox_calls,baseline_calls,"
         "speedup\n";
  for (const auto& r : rows) {
    const auto it = base.find(key_of(r));
    if (it == base.end()) {
      warnings << "warning: no " << baseline << " row for " << r.dataset << '/'
               << r.loss << '/' << r.regularizer << " eps="
               << format_number(r.eps) << "; skipping " << r.solver << '\n';
      continue;
    }
    out << r.dataset << ',' << r.loss << ',' << r.regularizer << ','
        << format_number(r.eps) << ',' << r.solver << ',' << r.prox_calls << ','
        << it->second << ','
        << (r.prox_calls > 0
                ? fixed2(static_cast<double>(it->second) /
                         static_cast<double>(r.prox_calls))
                : std::string("n/a"))
        << '\n';
  }
  return out.str();
}

std::string power_scaling_report(const std::vector<CellResult>& rows) {
  using Key = std::tuple<std::string, std::string, std::string, std::string,
                         std::string>;
  auto key_of = [](const CellResult& r) {
    return Key{r.solver, r.dataset, r.regularizer, format_number(r.lambda),
               format_number(r.eps)};
  };
  std::map<Key, std::int64_t> p2;
  for (const auto& r : rows) {
    if (r.loss == "power_2") p2.emplace(key_of(r), r.prox_calls);
  }
  if (p2.empty()) return {};
  std::ostringstream out;
  out << "solver,dataset,regularizer,eps,loss,prox_calls,ratio_to_p2\n";
  for (const auto& r : rows) {
    if (!r.loss.starts_with("power_")) continue;
    const auto it = p2.find(key_of(r));
    if (it == p2.end() || it->second <= 0) continue;
    out << r.solver << ',' << r.dataset << ',' << r.regularizer << ','
        << format_number(r.eps) << ',' << r.loss << ',' << r.prox_calls << ','
        << fixed2(static_cast<double>(r.prox_calls) /
                  static_cast<double>(it->second))
        << '\n';
  }
  return out.str();
}

}  // namespace adaagc
