// Python bindings for the main operations: fields and their operators, circle
// statistics, expansion reports, the iterative Dirichlet solver, and the
// non-asymptotic counterexample quantities.

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "pstat/asymptotics.hpp"
#include "pstat/circle_stats.hpp"
#include "pstat/counterexample.hpp"
#include "pstat/fields.hpp"
#include "pstat/operators.hpp"
#include "pstat/solver.hpp"

namespace py = pybind11;
using namespace pstat;

namespace {

Point2 as_point(const std::pair<double, double>& xy) { return {xy.first, xy.second}; }

std::vector<Point2> as_points(const std::vector<std::pair<double, double>>& xs) {
  std::vector<Point2> out;
  out.reserve(xs.size());
  for (const auto& xy : xs) out.push_back(as_point(xy));
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "statistical (mean/median/midrange) characterizations of p-harmonic "
            "functions of two variables";
  m.attr("__version__") = "0.1.0";

  py::register_exception<DegenerateGradientError>(m, "DegenerateGradientError");
  py::register_exception<InadmissiblePointError>(m, "InadmissiblePointError");
  py::register_exception<AntipodalBracketError>(m, "AntipodalBracketError");
  py::register_exception<QuadratureBudgetError>(m, "QuadratureBudgetError");

  py::class_<ScalarField2D>(m, "ScalarField2D")
      .def_readonly("id", &ScalarField2D::id)
      .def("value",
           [](const ScalarField2D& f, double x1, double x2) {
             return f.checked_value({x1, x2});
           })
      .def("gradient",
           [](const ScalarField2D& f, double x1, double x2) {
             const Vec2 g = f.gradient({x1, x2});
             return std::make_pair(g.x1, g.x2);
           })
      .def("hessian",
           [](const ScalarField2D& f, double x1, double x2) {
             const SymMat2 h = f.hessian({x1, x2});
             return std::make_tuple(h.a11, h.a12, h.a22);
           })
      .def("admissible",
           [](const ScalarField2D& f, double x1, double x2) {
             return f.admissible({x1, x2});
           })
      .def("__repr__", [](const ScalarField2D& f) {
        return "<ScalarField2D '" + f.id + "'>";
      });

  m.def("field", [](const std::string& id) { return field_by_id(id); },
        py::arg("id"), "resolve a battery field or a parametric id");
  m.def("fundamental_solution", &fundamental_solution, py::arg("p"),
        py::arg("origin_margin") = 1e-8);
  m.def("battery_ids", [] {
    std::vector<std::string> ids;
    for (const auto& f : battery()) ids.push_back(f.id);
    return ids;
  });

  py::class_<OperatorValues>(m, "OperatorValues")
      .def_readonly("laplacian", &OperatorValues::laplacian)
      .def_readonly("one_laplacian", &OperatorValues::one_laplacian)
      .def_readonly("infty_laplacian", &OperatorValues::infty_laplacian)
      .def_readonly("p_laplacian", &OperatorValues::p_laplacian)
      .def_readonly("grad_norm", &OperatorValues::grad_norm)
      .def("__repr__", [](const OperatorValues& v) {
        std::ostringstream os;
        os << "OperatorValues(laplacian=" << v.laplacian
           << ", one_laplacian=" << v.one_laplacian
           << ", infty_laplacian=" << v.infty_laplacian
           << ", p_laplacian=" << v.p_laplacian << ", grad_norm=" << v.grad_norm
           << ")";
        return os.str();
      });

  m.def(
      "evaluate_operators",
      [](const ScalarField2D& f, std::pair<double, double> x, double p,
         double gradient_floor) {
        return evaluate_operators(f, as_point(x), p, gradient_floor);
      },
      py::arg("field"), py::arg("x"), py::arg("p"),
      py::arg("gradient_floor") = kGradientFloor);
  m.def(
      "check_decompositions",
      [](const ScalarField2D& f, std::pair<double, double> x, double p) {
        const auto r = check_decompositions(f, as_point(x), p);
        return std::make_tuple(r.grad_infty_form, r.lap_one_form, r.one_infty_form);
      },
      py::arg("field"), py::arg("x"), py::arg("p"));
  m.def(
      "verify_p_harmonic",
      [](const ScalarField2D& f, const std::vector<std::pair<double, double>>& pts,
         double p, double tol) {
        const auto pts2 = as_points(pts);
        const auto check = verify_p_harmonic_pointwise(f, pts2, p, tol);
        return std::make_pair(check.p_harmonic, check.max_abs_p_laplacian);
      },
      py::arg("field"), py::arg("points"), py::arg("p"), py::arg("tol") = 1e-9);

  py::class_<CircleStats>(m, "CircleStats")
      .def_readonly("boundary_mean", &CircleStats::boundary_mean)
      .def_readonly("ball_mean", &CircleStats::ball_mean)
      .def_readonly("median", &CircleStats::median)
      .def_readonly("max_ball", &CircleStats::max_ball)
      .def_readonly("min_ball", &CircleStats::min_ball)
      .def_readonly("midrange", &CircleStats::midrange);

  m.def(
      "circle_stats",
      [](const ScalarField2D& f, std::pair<double, double> center, double eps,
         int samples, int rings) {
        return compute_stats(f, {as_point(center), eps, samples}, rings);
      },
      py::arg("field"), py::arg("center"), py::arg("eps"), py::arg("samples") = 256,
      py::arg("rings") = 64);
  m.def(
      "boundary_mean",
      [](const ScalarField2D& f, std::pair<double, double> c, double eps, int M) {
        return boundary_mean(f, {as_point(c), eps, M});
      },
      py::arg("field"), py::arg("center"), py::arg("eps"), py::arg("samples") = 256);
  m.def(
      "ball_mean",
      [](const ScalarField2D& f, std::pair<double, double> c, double eps, int M,
         int rings) { return ball_mean(f, {as_point(c), eps, M}, rings); },
      py::arg("field"), py::arg("center"), py::arg("eps"), py::arg("samples") = 256,
      py::arg("rings") = 64);
  m.def(
      "median_sampled",
      [](const ScalarField2D& f, std::pair<double, double> c, double eps, int M) {
        return median_sampled(f, {as_point(c), eps, M});
      },
      py::arg("field"), py::arg("center"), py::arg("eps"), py::arg("samples") = 4096);
  m.def(
      "median_antipodal",
      [](const ScalarField2D& f, std::pair<double, double> c, double eps) {
        const auto med = median_antipodal(f, {as_point(c), eps, 64});
        return std::make_pair(med.angle, med.value);
      },
      py::arg("field"), py::arg("center"), py::arg("eps"),
      "returns (angle in [0, pi), value)");
  m.def(
      "ball_extrema",
      [](const ScalarField2D& f, std::pair<double, double> c, double eps, int M,
         int rings) { return ball_extrema(f, {as_point(c), eps, M}, rings); },
      py::arg("field"), py::arg("center"), py::arg("eps"), py::arg("samples") = 256,
      py::arg("rings") = 16);

  py::enum_<ExpansionKind>(m, "ExpansionKind")
      .value("BOUNDARY_MEAN", ExpansionKind::BoundaryMeanLaplacian)
      .value("BALL_MEAN", ExpansionKind::BallMeanLaplacian)
      .value("MEDIAN", ExpansionKind::MedianOneLaplacian)
      .value("MIDRANGE", ExpansionKind::MidrangeInftyLaplacian)
      .value("SCHEME_FE1", ExpansionKind::SchemeFe1)
      .value("SCHEME_FE2", ExpansionKind::SchemeFe2)
      .value("SCHEME_MANFREDI", ExpansionKind::SchemeManfredi);

  py::class_<ExpansionReport>(m, "ExpansionReport")
      .def_readonly("radii", &ExpansionReport::radii)
      .def_readonly("residuals", &ExpansionReport::residuals)
      .def_readonly("normalized", &ExpansionReport::normalized)
      .def_readonly("fitted_slope", &ExpansionReport::fitted_slope)
      .def_readonly("slope_valid", &ExpansionReport::slope_valid)
      .def_readonly("all_below_floor", &ExpansionReport::all_below_floor);

  m.def(
      "residual",
      [](const ScalarField2D& f, std::pair<double, double> x, double eps,
         ExpansionKind kind, double p) {
        return residual(f, as_point(x), eps, kind, p);
      },
      py::arg("field"), py::arg("x"), py::arg("eps"), py::arg("kind"), py::arg("p"));
  m.def(
      "expansion_report",
      [](const ScalarField2D& f, std::pair<double, double> x, ExpansionKind kind,
         double p, std::vector<double> radii) {
        if (radii.empty()) radii = default_radius_ladder();
        return expansion_report(f, as_point(x), kind, p, radii);
      },
      py::arg("field"), py::arg("x"), py::arg("kind"), py::arg("p"),
      py::arg("radii") = std::vector<double>{});
  m.def("default_radius_ladder", &default_radius_ladder);
  m.def(
      "verify_theorem1_consistency",
      [](const ScalarField2D& f, const std::vector<std::pair<double, double>>& pts,
         double p, std::vector<double> radii, double slope_margin) {
        if (radii.empty()) radii = default_radius_ladder();
        const auto pts2 = as_points(pts);
        const auto rep = verify_theorem1_consistency(f, pts2, p, radii, slope_margin);
        return std::make_pair(rep.consistent, rep.max_abs_p_laplacian);
      },
      py::arg("field"), py::arg("points"), py::arg("p"),
      py::arg("radii") = std::vector<double>{}, py::arg("slope_margin") = 0.3,
      "returns (consistent, max |D_p f| over the points)");

  py::enum_<Scheme>(m, "Scheme")
      .value("FE1", Scheme::Fe1)
      .value("FE2", Scheme::Fe2)
      .value("MANFREDI", Scheme::Manfredi);

  m.def(
      "scheme_weights",
      [](Scheme s, double p) {
        const SchemeWeights w = scheme_weights(s, p);
        py::dict d;
        d["median"] = w.median;
        d["boundary_mean"] = w.boundary_mean;
        d["ball_mean"] = w.ball_mean;
        d["extreme"] = w.extreme;
        return d;
      },
      py::arg("scheme"), py::arg("p"));

  py::class_<SolverResult>(m, "SolverResult")
      .def_readonly("values", &SolverResult::values)
      .def_readonly("iterations", &SolverResult::iterations)
      .def_readonly("final_change", &SolverResult::final_change)
      .def_readonly("converged", &SolverResult::converged)
      .def_readonly("residual_profile", &SolverResult::residual_profile)
      .def_readonly("max_range_violation", &SolverResult::max_range_violation);

  py::class_<GridDomain>(m, "GridDomain")
      .def_readonly("nx", &GridDomain::nx)
      .def_readonly("ny", &GridDomain::ny)
      .def_readonly("h", &GridDomain::h)
      .def("node",
           [](const GridDomain& g, int ix, int iy) {
             const Point2 q = g.node(ix, iy);
             return std::make_pair(q.x1, q.x2);
           })
      .def("node_kind", [](const GridDomain& g, int ix, int iy) {
        switch (g.kinds[iy * g.nx + ix]) {
          case NodeKind::Interior: return "interior";
          case NodeKind::Collar: return "collar";
          default: return "inactive";
        }
      });

  const auto make_problem =
      [](const py::dict& cfg) {
        SolverProblem pb;
        const std::string shape = cfg["shape"].cast<std::string>();
        if (shape == "rectangle") {
          const auto corners = cfg["corners"].cast<std::vector<double>>();
          pb.domain =
              DomainSpec::rectangle(corners[0], corners[1], corners[2], corners[3]);
        } else if (shape == "annulus") {
          pb.domain = DomainSpec::annulus(cfg["r0"].cast<double>(),
                                          cfg["r1"].cast<double>());
        } else {
          throw std::invalid_argument("shape must be rectangle or annulus");
        }
        pb.h = cfg["h"].cast<double>();
        pb.eps = cfg["eps"].cast<double>();
        pb.p = cfg["p"].cast<double>();
        if (cfg.contains("scheme")) pb.scheme = cfg["scheme"].cast<Scheme>();
        if (cfg.contains("samples")) pb.samples = cfg["samples"].cast<int>();
        if (cfg.contains("rings")) pb.rings = cfg["rings"].cast<int>();
        pb.boundary_data = field_by_id(cfg["boundary_field"].cast<std::string>());
        if (cfg.contains("damping")) pb.damping = cfg["damping"].cast<double>();
        if (cfg.contains("tol")) pb.tol = cfg["tol"].cast<double>();
        if (cfg.contains("max_iters")) pb.max_iters = cfg["max_iters"].cast<int>();
        if (cfg.contains("initial_guess")) {
          const std::string init = cfg["initial_guess"].cast<std::string>();
          if (init == "collar-mean") pb.init = InitialGuess::CollarMean;
          else if (init == "boundary-field") pb.init = InitialGuess::BoundaryField;
          else throw std::invalid_argument("initial_guess: " + init);
        }
        return pb;
      };

  m.def(
      "solve",
      [make_problem](const py::dict& cfg) {
        const SolverProblem pb = make_problem(cfg);
        py::gil_scoped_release release;  // sweeps are thread-parallel
        return solve(pb);
      },
      py::arg("config"),
      "config keys: shape ('rectangle' corners=[x0,y0,x1,y1] | 'annulus' r0 r1), "
      "h, eps, p, boundary_field, and optionally scheme, samples, rings, "
      "damping, tol, max_iters, initial_guess");
  m.def(
      "build_grid",
      [make_problem](const py::dict& cfg) {
        const SolverProblem pb = make_problem(cfg);
        return build_grid(pb.domain, pb.h, pb.eps);
      },
      py::arg("config"));
  m.def(
      "sup_error_vs_field",
      [](const GridDomain& grid, const std::vector<double>& values,
         const ScalarField2D& f) { return sup_error_vs_field(grid, values, f); },
      py::arg("grid"), py::arg("values"), py::arg("field"));

  m.def("fundsol_median",
        [](double p, double x1, double eps) { return fundsol_median({p, x1, eps}); },
        py::arg("p"), py::arg("x1"), py::arg("eps"));
  m.def(
      "fundsol_mean",
      [](double p, double x1, double eps, int nodes) {
        return fundsol_mean({p, x1, eps}, nodes);
      },
      py::arg("p"), py::arg("x1"), py::arg("eps"), py::arg("quadrature_nodes") = 64);
  m.def("residual_fe1_nonasymptotic",
        [](double p, double x1, double eps) {
          return residual_fe1_nonasymptotic({p, x1, eps});
        },
        py::arg("p"), py::arg("x1"), py::arg("eps"));
  m.def("derivative_identity_deviation", &derivative_identity_deviation,
        py::arg("eps"));
  m.def("residual_fe2_nonasymptotic", &residual_fe2_nonasymptotic, py::arg("eps"));
}
