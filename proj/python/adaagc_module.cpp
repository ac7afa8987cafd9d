#include <memory>
#include <sstream>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "adaagc/data.hpp"
#include "adaagc/experiment.hpp"
#include "adaagc/losses.hpp"
#include "adaagc/regularizers.hpp"
#include "adaagc/solvers.hpp"

namespace py = pybind11;
using namespace adaagc;

namespace {

struct Problem {
  std::shared_ptr<const LabeledDataset> data;
  LossKind loss;
  RegularizerKind regularizer;
  CompositeProblem composite;

  Problem(const LabeledDataset& d, const LossKind& l, const RegularizerKind& r)
      : data(std::make_shared<const LabeledDataset>(l.is_classification() ? as_classification(d) : d)),
        loss(l),
        regularizer(r),
        composite(make_empirical_loss(l, data), make_regularizer(r, data->d()), data->d()) {}
};

LabeledDataset from_dense(const Eigen::MatrixXd& A, const Vector& b) {
  if (A.rows() != b.size()) throw DimensionMismatch("A and b disagree on the number of rows");
  LabeledDataset data;
  data.rows = A.sparseView();
  data.rows.makeCompressed();
  data.labels = b;
  return data;
}

SolverConfig make_config(double eps, std::int64_t max_prox_calls, std::optional<double> lipschitz,
                         const std::string& step, bool record) {
  SolverConfig cfg;
  cfg.target_eps = eps;
  cfg.max_prox_calls = max_prox_calls;
  cfg.lipschitz = lipschitz;
  if (step == "fixed") {
    cfg.step_policy = StepPolicy::fixed;
  } else if (step == "backtracking") {
    cfg.step_policy = StepPolicy::backtracking;
  } else {
    throw InvalidConfiguration("step must be 'fixed' or 'backtracking'");
  }
  cfg.record_iterations = record;
  return cfg;
}

Vector start_point(const Problem& p, const std::optional<Vector>& x0) {
  return x0 ? *x0 : Vector::Zero(p.composite.dimension());
}

Eigen::MatrixXd iteration_table(const RunTrace& tr) {
  Eigen::MatrixXd out(static_cast<Index>(tr.iterations.size()), 4);
  for (std::size_t i = 0; i < tr.iterations.size(); ++i) {
    const auto& r = tr.iterations[i];
    out.row(static_cast<Index>(i)) << static_cast<double>(r.iteration), r.objective,
        r.prox_grad_norm, static_cast<double>(r.prox_calls);
  }
  return out;
}

py::dict stage_dict(const StageEvent& ev) {
  py::dict d;
  d["kind"] = ev.kind == StageEventKind::advance ? "advance" : "restart";
  d["stage"] = ev.stage;
  d["cycle"] = ev.cycle;
  d["inner_iterations"] = ev.inner_iterations;
  d["delta"] = ev.delta;
  d["c_e"] = ev.c_e;
  d["eps_prev"] = ev.eps_prev;
  d["eps"] = ev.eps;
  d["prox_grad_norm"] = ev.prox_grad_norm;
  d["objective"] = ev.objective;
  d["anchor_objective"] = ev.anchor_objective;
  d["prox_calls"] = ev.prox_calls;
  return d;
}

py::dict cell_dict(const CellResult& r) {
  py::dict d;
  d["solver"] = r.solver;
  d["dataset"] = r.dataset;
  d["loss"] = r.loss;
  d["regularizer"] = r.regularizer;
  d["lambda"] = r.lambda;
  d["eps"] = r.eps;
  d["prox_calls"] = r.prox_calls;
  d["wall_seconds"] = r.wall_seconds;
  d["status"] = to_string(r.status);
  d["message"] = r.message;
  return d;
}

}  // namespace

PYBIND11_MODULE(_adaagc, m) {
  m.doc() = "Adaptive accelerated gradient methods under Hoelderian error bounds";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<OracleFailure>(m, "OracleFailure", error.ptr());
  py::register_exception<LipschitzSearchFailure>(m, "LipschitzSearchFailure", error.ptr());
  py::register_exception<InvalidConfiguration>(m, "InvalidConfiguration", error.ptr());
  py::register_exception<DimensionMismatch>(m, "DimensionMismatch", error.ptr());
  py::register_exception<ParseError>(m, "ParseError", error.ptr());

  m.def("prox_l1", &prox_l1, py::arg("v"), py::arg("t"));
  m.def("project_l1_ball", &project_l1_ball, py::arg("v"), py::arg("radius"));
  m.def("prox_linf", &prox_linf, py::arg("v"), py::arg("t"));
  m.def("prox_l1inf_groups", &prox_l1inf_groups, py::arg("v"), py::arg("t"),
        py::arg("group_bounds"));
  m.def("prox_huber_norm", &prox_huber_norm, py::arg("v"), py::arg("t"), py::arg("delta"));

  py::class_<LossKind>(m, "Loss")
      .def_static("square", &LossKind::square)
      .def_static("squared_hinge", &LossKind::squared_hinge)
      .def_static("huber", &LossKind::huber, py::arg("delta"))
      .def_static("logistic", &LossKind::logistic)
      .def_static("power", &LossKind::power, py::arg("p"))
      .def_property_readonly("name", &LossKind::name)
      .def("__repr__", [](const LossKind& k) { return "Loss(" + k.name() + ")"; });

  py::class_<RegularizerKind>(m, "Regularizer")
      .def_static("l1", &RegularizerKind::l1, py::arg("lam"))
      .def_static("linf", &RegularizerKind::linf, py::arg("lam"))
      .def_static("l1inf_groups", &RegularizerKind::l1inf_groups, py::arg("lam"),
                  py::arg("group_bounds"))
      .def_static("huber_norm", &RegularizerKind::huber_norm, py::arg("lam"), py::arg("delta"))
      .def_static("l1_ball", &RegularizerKind::l1_ball, py::arg("radius"))
      .def_property_readonly("name", &RegularizerKind::name)
      .def("__repr__", [](const RegularizerKind& k) { return "Regularizer(" + k.name() + ")"; });

  py::class_<LabeledDataset>(m, "Dataset")
      .def_static("from_dense", &from_dense, py::arg("A"), py::arg("b"))
      .def_property_readonly("n", &LabeledDataset::n)
      .def_property_readonly("d", &LabeledDataset::d)
      .def_property_readonly("nnz", [](const LabeledDataset& d) { return d.rows.nonZeros(); })
      .def_property_readonly("labels", [](const LabeledDataset& d) { return d.labels; })
      .def("to_dense", [](const LabeledDataset& d) { return Eigen::MatrixXd(d.rows); })
      .def("to_libsvm", [](const LabeledDataset& d) {
        std::ostringstream out;
        write_libsvm(out, d);
        return out.str();
      });

  m.def("parse_libsvm", py::overload_cast<std::string_view, Index>(&parse_libsvm),
        py::arg("text"), py::arg("min_dimension") = 0);
  m.def("load_libsvm", &load_libsvm, py::arg("path"), py::arg("min_dimension") = 0);
  m.def(
      "scale_features",
      [](const LabeledDataset& d, const std::string& mode) {
        return scale_features(d, parse_scaling_mode(mode));
      },
      py::arg("data"), py::arg("mode"));

  py::class_<Problem>(m, "Problem")
      .def(py::init<const LabeledDataset&, const LossKind&, const RegularizerKind&>(),
           py::arg("data"), py::arg("loss"), py::arg("regularizer"))
      .def_property_readonly("dimension", [](const Problem& p) { return p.composite.dimension(); })
      .def("objective", [](const Problem& p, const Vector& x) { return p.composite.objective(x); })
      .def("gradient",
           [](const Problem& p, const Vector& x) { return checked_gradient(p.composite.f(), x); })
      .def("prox_gradient_norm",
           [](const Problem& p, const Vector& x, double eta) {
             return prox_gradient_norm(p.composite, x, eta);
           },
           py::arg("x"), py::arg("eta"));

  py::class_<RunTrace>(m, "Trace")
      .def_property_readonly("status", [](const RunTrace& t) { return to_string(t.status); })
      .def_readonly("message", &RunTrace::message)
      .def_readonly("solution", &RunTrace::solution)
      .def_readonly("prox_grad_norm", &RunTrace::solution_prox_grad_norm)
      .def_readonly("eps0", &RunTrace::eps0)
      .def_readonly("prox_calls", &RunTrace::prox_calls)
      .def_readonly("iterations", &RunTrace::total_iterations)
      .def_readonly("final_L", &RunTrace::final_L)
      .def_readonly("final_c_e", &RunTrace::final_c_e)
      .def_readonly("restarts", &RunTrace::restarts)
      .def_property_readonly("records", &iteration_table,
                             "rows of (iteration, objective, prox_grad_norm, prox_calls)")
      .def_property_readonly("stages", [](const RunTrace& t) {
        py::list out;
        for (const auto& ev : t.stages) out.append(stage_dict(ev));
        return out;
      });

  m.def(
      "pg",
      [](const Problem& p, std::optional<Vector> x0, double eps, const std::string& option,
         std::int64_t max_prox_calls, std::optional<double> lipschitz, const std::string& step,
         bool record) {
        if (option != "I" && option != "II") throw InvalidConfiguration("option must be 'I' or 'II'");
        const auto cfg = make_config(eps, max_prox_calls, lipschitz, step, record);
        py::gil_scoped_release release;
        return pg(p.composite, start_point(p, x0), cfg, option == "I" ? PgOption::I : PgOption::II);
      },
      py::arg("problem"), py::arg("x0") = py::none(), py::arg("eps") = 1e-6,
      py::arg("option") = "II", py::arg("max_prox_calls") = 10'000'000,
      py::arg("lipschitz") = py::none(), py::arg("step") = "backtracking",
      py::arg("record") = true);

  m.def(
      "apg",
      [](const Problem& p, std::optional<Vector> x0, double eps, std::int64_t max_prox_calls,
         std::optional<double> lipschitz, const std::string& step, bool record) {
        const auto cfg = make_config(eps, max_prox_calls, lipschitz, step, record);
        py::gil_scoped_release release;
        return apg(p.composite, start_point(p, x0), cfg);
      },
      py::arg("problem"), py::arg("x0") = py::none(), py::arg("eps") = 1e-6,
      py::arg("max_prox_calls") = 10'000'000, py::arg("lipschitz") = py::none(),
      py::arg("step") = "backtracking", py::arg("record") = true);

  m.def(
      "rapg",
      [](const Problem& p, double theta, double c, double eps0, std::optional<Vector> x0,
         double eps, std::int64_t max_prox_calls, std::optional<double> lipschitz,
         const std::string& step, bool record) {
        const auto cfg = make_config(eps, max_prox_calls, lipschitz, step, record);
        py::gil_scoped_release release;
        return rapg(p.composite, start_point(p, x0), theta, c, eps0, cfg);
      },
      py::arg("problem"), py::arg("theta"), py::arg("c"), py::arg("eps0"),
      py::arg("x0") = py::none(), py::arg("eps") = 1e-6, py::arg("max_prox_calls") = 10'000'000,
      py::arg("lipschitz") = py::none(), py::arg("step") = "backtracking",
      py::arg("record") = true);

  m.def(
      "adaagc",
      [](const Problem& p, double theta, double c0, double gamma, std::optional<Vector> x0,
         double eps, std::int64_t max_prox_calls, std::optional<double> lipschitz,
         const std::string& step, bool record) {
        const auto cfg = make_config(eps, max_prox_calls, lipschitz, step, record);
        HebParams heb{theta, c0, gamma};
        py::gil_scoped_release release;
        return adaagc_composite(p.composite, start_point(p, x0), heb, cfg);
      },
      py::arg("problem"), py::arg("theta") = 0.5, py::arg("c0") = 10.0, py::arg("gamma") = 2.0,
      py::arg("x0") = py::none(), py::arg("eps") = 1e-6, py::arg("max_prox_calls") = 10'000'000,
      py::arg("lipschitz") = py::none(), py::arg("step") = "backtracking",
      py::arg("record") = true);

  m.def(
      "run_experiment",
      [](const std::filesystem::path& config, int jobs) {
        const auto cfg = load_experiment_config(config);
        RunOptions opts;
        opts.jobs = jobs;
        std::vector<CellResult> rows;
        {
          py::gil_scoped_release release;
          rows = run_experiment(cfg, opts);
        }
        py::list out;
        for (const auto& r : rows) out.append(cell_dict(r));
        return out;
      },
      py::arg("config"), py::arg("jobs") = 1);

  m.def("format_number", &format_number, py::arg("value"));
}
