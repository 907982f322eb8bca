// Python bindings for the core operations: smoothing primitives, the
// box-budget projection, instance building and the three solvers.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sapg/checks.hpp"
#include "sapg/feasible_set.hpp"
#include "sapg/linalg.hpp"
#include "sapg/smoothing.hpp"
#include "sapg/solvers.hpp"
#include "sapg/truss.hpp"

namespace py = pybind11;

namespace {

sapg::SupportPattern support_from_string(const std::string& name) {
  if (name == "left") return sapg::SupportPattern::LeftEdge;
  if (name == "right") return sapg::SupportPattern::RightEdge;
  if (name == "bottom") return sapg::SupportPattern::BottomEdge;
  if (name == "top") return sapg::SupportPattern::TopEdge;
  throw sapg::InvalidArgument("unknown support pattern: " + name);
}

std::string support_to_string(sapg::SupportPattern pattern) {
  switch (pattern) {
    case sapg::SupportPattern::LeftEdge: return "left";
    case sapg::SupportPattern::RightEdge: return "right";
    case sapg::SupportPattern::BottomEdge: return "bottom";
    case sapg::SupportPattern::TopEdge: return "top";
  }
  return "left";
}

struct TraceArrays {
  std::vector<int> k;
  std::vector<double> f_x, f_mu_x, mu_k, l_k, a_k;
  std::vector<double> residual_box, residual_budget, step_norm;
  Eigen::VectorXd best_x;
  double best_f = 0.0;
  bool breakdown = false;
  std::string breakdown_message;
  std::vector<std::string> warnings;
};

TraceArrays to_arrays(const sapg::IterateTrace& trace) {
  TraceArrays out;
  out.k.reserve(trace.rows.size());
  for (const sapg::TraceRow& row : trace.rows) {
    out.k.push_back(row.k);
    out.f_x.push_back(row.f_x);
    out.f_mu_x.push_back(row.f_mu_x);
    out.mu_k.push_back(row.mu_k);
    out.l_k.push_back(row.L_k);
    out.a_k.push_back(row.a_k);
    out.residual_box.push_back(row.feas_residual_box);
    out.residual_budget.push_back(row.feas_residual_budget);
    out.step_norm.push_back(row.step_norm);
  }
  out.best_x = trace.best_x;
  out.best_f = trace.best_f;
  out.breakdown = trace.breakdown;
  out.breakdown_message = trace.breakdown_message;
  out.warnings = trace.warnings;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Feasible smoothing methods for minimizing the worst-case "
            "compliance of truss designs";

  py::register_exception<sapg::InvalidArgument>(m, "InvalidArgumentError",
                                                PyExc_ValueError);
  py::register_exception<sapg::EmptySet>(m, "EmptySetError", PyExc_ValueError);
  py::register_exception<sapg::EmptyInput>(m, "EmptyInputError", PyExc_ValueError);
  py::register_exception<sapg::InfeasibleVolumeBudget>(m, "InfeasibleVolumeBudgetError",
                                                       PyExc_ValueError);
  py::register_exception<sapg::InvalidGeometry>(m, "InvalidGeometryError",
                                                PyExc_ValueError);
  py::register_exception<sapg::NotPositiveDefinite>(m, "NotPositiveDefiniteError",
                                                    PyExc_ArithmeticError);

  m.def("log_sum_exp", &sapg::log_sum_exp, py::arg("values"), py::arg("mu"),
        "mu * log(sum_i exp(values_i / mu)) with overflow-safe shifting");
  m.def("softmax_weights", &sapg::softmax_weights, py::arg("values"), py::arg("mu"));
  m.def(
      "sym_eig",
      [](const Eigen::MatrixXd& a) {
        const sapg::EigenDecomposition d = sapg::sym_eig(sapg::SymMatrix::from_full(a));
        return py::make_tuple(d.eigenvalues, d.eigenvectors);
      },
      py::arg("a"),
      "Eigenvalues (descending) and orthonormal eigenvectors of a symmetric "
      "matrix; the input is symmetrized as (a + a^T) / 2 first");

  py::class_<sapg::BoxBudgetSet>(m, "BoxBudgetSet",
                                 "The feasible set { x : l^T x <= v0, x >= x_min }")
      .def(py::init<Eigen::VectorXd, double, double>(), py::arg("lengths"),
           py::arg("volume_budget"), py::arg("x_min"))
      .def_property_readonly("dimension", &sapg::BoxBudgetSet::dimension)
      .def_property_readonly("lengths", &sapg::BoxBudgetSet::lengths)
      .def_property_readonly("volume_budget", &sapg::BoxBudgetSet::volume_budget)
      .def_property_readonly("x_min", &sapg::BoxBudgetSet::lower_bound)
      .def("project", &sapg::BoxBudgetSet::project, py::arg("y"))
      .def(
          "project_with_multiplier",
          [](const sapg::BoxBudgetSet& set, const Eigen::VectorXd& y) {
            const sapg::BudgetProjection p = set.project_with_multiplier(y);
            return py::make_tuple(p.x, p.theta);
          },
          py::arg("y"))
      .def(
          "residuals",
          [](const sapg::BoxBudgetSet& set, const Eigen::VectorXd& x) {
            const sapg::Residuals r = set.residuals(x);
            return py::make_tuple(r.box, r.budget);
          },
          py::arg("x"), "Signed (box, budget) residuals; <= 0 means satisfied")
      .def("contains", &sapg::BoxBudgetSet::contains, py::arg("x"),
           py::arg("tol") = 0.0);

  m.def("project_box_budget",
        [](const Eigen::VectorXd& lengths, double v0, double x_min,
           const Eigen::VectorXd& y) {
          return sapg::BoxBudgetSet(lengths, v0, x_min).project(y);
        },
        py::arg("lengths"), py::arg("volume_budget"), py::arg("x_min"), py::arg("y"));

  py::class_<sapg::InstanceConfig>(m, "InstanceConfig")
      .def(py::init<>())
      .def_readwrite("cols", &sapg::InstanceConfig::cols)
      .def_readwrite("rows", &sapg::InstanceConfig::rows)
      .def_readwrite("spacing", &sapg::InstanceConfig::spacing)
      .def_readwrite("connectivity", &sapg::InstanceConfig::connectivity)
      .def_property(
          "support",
          [](const sapg::InstanceConfig& c) { return support_to_string(c.support); },
          [](sapg::InstanceConfig& c, const std::string& name) {
            c.support = support_from_string(name);
          })
      .def_readwrite("young_modulus", &sapg::InstanceConfig::young_modulus)
      .def_readwrite("loaded_nodes", &sapg::InstanceConfig::loaded_nodes)
      .def_readwrite("ellipse_horizontal", &sapg::InstanceConfig::ellipse_horizontal)
      .def_readwrite("ellipse_vertical", &sapg::InstanceConfig::ellipse_vertical)
      .def_readwrite("ellipse_full_axis", &sapg::InstanceConfig::ellipse_full_axis)
      .def_readwrite("volume_budget", &sapg::InstanceConfig::volume_budget)
      .def_readwrite("x_min", &sapg::InstanceConfig::x_min)
      .def_readwrite("l_estimate", &sapg::InstanceConfig::l_estimate)
      .def_readwrite("lprime_estimate", &sapg::InstanceConfig::lprime_estimate);

  py::class_<sapg::RobustComplianceProblem>(m, "Problem",
                                            "One robust-compliance instance")
      .def_property_readonly("bar_count", &sapg::RobustComplianceProblem::bar_count)
      .def_property_readonly("scenario_count",
                             &sapg::RobustComplianceProblem::scenario_count)
      .def_property_readonly(
          "free_dof_count",
          [](const sapg::RobustComplianceProblem& p) {
            return p.structure.free_dof_count;
          })
      .def_property_readonly(
          "bar_lengths",
          [](const sapg::RobustComplianceProblem& p) { return p.structure.bar_lengths; })
      .def_property_readonly(
          "feasible_set",
          [](const sapg::RobustComplianceProblem& p) { return *p.feasible; })
      .def("uniform_design", &sapg::RobustComplianceProblem::uniform_design)
      .def(
          "eval",
          [](const sapg::RobustComplianceProblem& p, const Eigen::VectorXd& x,
             double mu) { return p.objective->eval_smoothed(x, mu); },
          py::arg("x"), py::arg("mu") = 0.0,
          "f_mu(x); mu = 0 gives the nonsmooth worst-case compliance")
      .def(
          "grad",
          [](const sapg::RobustComplianceProblem& p, const Eigen::VectorXd& x,
             double mu) { return p.objective->grad_smoothed(x, mu); },
          py::arg("x"), py::arg("mu"))
      .def(
          "subgradient",
          [](const sapg::RobustComplianceProblem& p, const Eigen::VectorXd& x) {
            return p.objective->subgradient(x);
          },
          py::arg("x"))
      .def(
          "constants",
          [](const sapg::RobustComplianceProblem& p) {
            const sapg::SmoothingConstants c = p.objective->constants();
            return py::make_tuple(c.L, c.Lprime, c.beta);
          },
          "The smoothing constants (L, Lprime, beta)");

  m.def("build_instance", &sapg::build_instance, py::arg("config"));

  py::class_<TraceArrays>(m, "Trace", "Recorded per-iteration solver history")
      .def_readonly("k", &TraceArrays::k)
      .def_readonly("f_x", &TraceArrays::f_x)
      .def_readonly("f_mu_x", &TraceArrays::f_mu_x)
      .def_readonly("mu_k", &TraceArrays::mu_k)
      .def_readonly("L_k", &TraceArrays::l_k)
      .def_readonly("a_k", &TraceArrays::a_k)
      .def_readonly("residual_box", &TraceArrays::residual_box)
      .def_readonly("residual_budget", &TraceArrays::residual_budget)
      .def_readonly("step_norm", &TraceArrays::step_norm)
      .def_readonly("best_x", &TraceArrays::best_x)
      .def_readonly("best_f", &TraceArrays::best_f)
      .def_readonly("breakdown", &TraceArrays::breakdown)
      .def_readonly("breakdown_message", &TraceArrays::breakdown_message)
      .def_readonly("warnings", &TraceArrays::warnings)
      .def("__len__", [](const TraceArrays& t) { return t.k.size(); });

  m.def(
      "solve",
      [](const sapg::RobustComplianceProblem& problem, const std::string& algo,
         int iters, double mu0, std::optional<double> L, std::optional<double> Lprime,
         int stride, double spg_mu_exponent, double subgrad_step_c,
         std::optional<double> fixed_mu, std::optional<Eigen::VectorXd> x0) {
        sapg::SolverConfig cfg;
        cfg.algorithm = sapg::algorithm_from_string(algo);
        cfg.max_iters = iters;
        cfg.mu0 = mu0;
        const sapg::SmoothingConstants c = problem.objective->constants();
        cfg.L = L.value_or(c.L);
        cfg.Lprime = Lprime.value_or(c.Lprime);
        cfg.trace_every = stride;
        cfg.spg_mu_exponent = spg_mu_exponent;
        cfg.subgrad_step_c = subgrad_step_c;
        cfg.fixed_mu = fixed_mu;
        const Eigen::VectorXd start = x0 ? *x0 : problem.uniform_design();
        return to_arrays(
            sapg::run(cfg, *problem.objective, *problem.feasible, start));
      },
      py::arg("problem"), py::arg("algo") = "sapg", py::arg("iters") = 4000,
      py::arg("mu0") = 1.0, py::arg("L") = std::nullopt,
      py::arg("Lprime") = std::nullopt, py::arg("stride") = 1,
      py::arg("spg_mu_exponent") = -0.5, py::arg("subgrad_step_c") = 1e-6,
      py::arg("fixed_mu") = std::nullopt, py::arg("x0") = std::nullopt,
      "Runs sapg / spg / subgrad from x0 (uniform design by default)");

  m.def(
      "rate_bound",
      [](int k, double mu0, double L, double Lprime, double beta, double distance) {
        sapg::SolverConfig cfg;
        cfg.algorithm = sapg::Algorithm::Sapg;
        cfg.mu0 = mu0;
        cfg.L = L;
        cfg.Lprime = Lprime;
        return sapg::theorem_bound(k, cfg, beta, distance);
      },
      py::arg("k"), py::arg("mu0"), py::arg("L"), py::arg("Lprime"), py::arg("beta"),
      py::arg("distance"),
      "Objective-gap guarantee for S-APG after k iterations");

  m.def(
      "check_suite",
      [](const std::string& name, const sapg::RobustComplianceProblem& problem,
         std::uint64_t seed, double scale) {
        const sapg::CheckReport report = sapg::run_suite(name, problem, seed, scale);
        py::list items;
        for (const sapg::CheckItem& item : report.items) {
          items.append(py::make_tuple(item.name, item.pass, item.worst, item.detail));
        }
        return py::make_tuple(report.passed(), items);
      },
      py::arg("name"), py::arg("problem"), py::arg("seed") = 42,
      py::arg("scale") = 0.25,
      "Runs one oracle suite; returns (passed, [(name, pass, worst, detail)])");

  m.attr("suites") = sapg::known_suites();
}
