#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "iwaves/cohomology.hpp"
#include "iwaves/dynamics.hpp"
#include "iwaves/errors.hpp"
#include "iwaves/geometry.hpp"
#include "iwaves/io.hpp"
#include "iwaves/solver.hpp"
#include "iwaves/spectra.hpp"

namespace py = pybind11;
using namespace iwaves;

namespace {

py::int_ to_py(const BigInt& n) { return py::int_(py::str(n.str())); }

py::list to_py(const std::vector<BigInt>& v) {
  py::list out;
  for (const auto& n : v) out.append(to_py(n));
  return out;
}

py::dict rotation_dict(const RotationNumberEstimate& e) {
  py::dict d;
  d["value"] = e.value;
  d["error_bound"] = e.error_bound;
  d["iterations"] = e.iterations;
  d["locked"] = e.locked();
  d["p"] = e.p;
  d["q"] = e.q;
  return d;
}

BoundaryCurve curve_from(const std::string& domain) {
  if (domain == "disk") return BoundaryCurve::circle();
  return load_boundary(domain);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Internal-wave numerics: chess billiards, cohomological equations, spectra";

  auto base = py::register_exception<Error>(m, "Error");
  auto input = py::register_exception<InputError>(m, "InputError", base.ptr());
  auto numerical = py::register_exception<NumericalError>(m, "NumericalError", base.ptr());
  py::register_exception<NotSimpleError>(m, "NotSimpleError", numerical.ptr());
  py::register_exception<ResonanceError>(m, "ResonanceError", numerical.ptr());
  py::register_exception<RationalRotationError>(m, "RationalRotationError", numerical.ptr());
  py::register_exception<QuadratureError>(m, "QuadratureError", numerical.ptr());
  (void)input;

  m.def("version", [] { return std::string(version()); });

  m.def(
      "ell",
      [](double x1, double x2, double lambda, int sign) {
        return ell({x1, x2}, LambdaContext(lambda), sign >= 0 ? Sign::plus : Sign::minus);
      },
      py::arg("x1"), py::arg("x2"), py::arg("lam"), py::arg("sign") = 1);

  m.def(
      "is_simple",
      [](double lambda, const std::string& domain) {
        return critical_points(curve_from(domain), LambdaContext(lambda)).is_simple;
      },
      py::arg("lam"), py::arg("domain") = "disk",
      "Whether the curve ('disk' or a boundary JSON string) is lambda-simple.");

  m.def(
      "rotation_number",
      [](double lambda, const std::string& domain, long orbit, long q_max) {
        const ChessBilliardMap map(curve_from(domain), LambdaContext(lambda));
        return rotation_dict(rotation_number(map, orbit, q_max));
      },
      py::arg("lam"), py::arg("domain") = "disk", py::arg("orbit") = 1'000'000,
      py::arg("q_max") = 10'000);

  m.def("chess_billiard", [](double lambda, double s) {
    return ChessBilliardMap(BoundaryCurve::circle(), LambdaContext(lambda)).chess_billiard(s);
  });

  m.def(
      "continued_fraction",
      [](double alpha, int depth) {
        const auto cf = continued_fraction(alpha, depth);
        py::dict d;
        d["a0"] = to_py(cf.a0);
        d["quotients"] = to_py(cf.quotients);
        d["p"] = to_py(cf.p);
        d["q"] = to_py(cf.q);
        d["diophantine_score"] = cf.diophantine_score;
        d["rational"] = cf.rational;
        d["liouville_suspect"] = cf.liouville_suspect;
        d["precision_exhausted"] = cf.precision_exhausted;
        return d;
      },
      py::arg("alpha"), py::arg("depth") = 40);

  m.def(
      "solve_cohomological",
      [](py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast> coeffs,
         double alpha, double mean) {
        if (coeffs.ndim() != 1 || coeffs.shape(0) % 2 == 0) {
          throw InputError("coefficients must be a 1D array of odd length indexed from -K");
        }
        std::vector<std::complex<double>> c(coeffs.data(), coeffs.data() + coeffs.shape(0));
        const auto sol = solve_cohomological(FourierSeries(std::move(c)), alpha, mean);
        const auto v = sol.v.coefficients();
        py::array_t<std::complex<double>> out(static_cast<py::ssize_t>(v.size()));
        std::copy(v.begin(), v.end(), out.mutable_data());
        return py::make_tuple(out, sol.residual);
      },
      py::arg("coefficients"), py::arg("alpha"), py::arg("mean") = 0.0,
      "Coefficients of v with v - v(. + alpha) = g, plus the residual.");

  m.def("small_divisor", &small_divisor, py::arg("alpha"), py::arg("k"));
  m.def("small_divisor_exponent", [](double alpha, long K) {
    const auto r = small_divisor_report(alpha, K);
    return py::make_tuple(r.fitted_exponent, r.worst_exponent);
  });

  m.def("square_eigenvalues", [](int k_max) {
    py::list out;
    for (const auto& mode : square_modes(k_max)) out.append(py::make_tuple(mode.i, mode.j, mode.eigenvalue));
    return out;
  });

  m.def(
      "square_spectral_measure",
      [](const std::function<double(double, double)>& f, int k_max) {
        const auto modes = square_modes(k_max);
        const auto mu = spectral_measure([&](Point2 x) { return f(x.x1, x.x2); }, modes);
        py::list out;
        for (const auto& a : mu.atoms) out.append(py::make_tuple(a.position, a.mass));
        return out;
      },
      py::arg("f"), py::arg("k_max") = 32, "List of (eigenvalue, mass) atoms.");

  m.def(
      "evolve_square_mode",
      [](int k1, int k2, double lambda, std::vector<double> times) {
        if (k1 < 1 || k2 < 1) throw InputError("mode indices must be positive");
        const auto all = square_modes(std::max(k1, k2));
        const auto it = std::find_if(all.begin(), all.end(),
                                     [&](const EigenMode& mm) { return mm.i == k1 && mm.j == k2; });
        const double one = 1.0;
        const auto trace = evolve_modal(std::span(&one, 1), lambda, std::span(&*it, 1), times);
        return py::make_tuple(trace.energy_h10, trace.growth);
      },
      py::arg("k1"), py::arg("k2"), py::arg("lam"), py::arg("times"));

  m.def(
      "right_inverse_disk",
      [](const std::function<double(double, double)>& f, double lambda, int grid) {
        const auto curve = BoundaryCurve::circle();
        const GridFunction::Evaluator ff = [&](Point2 x) { return f(x.x1, x.x2); };
        const auto result = right_inverse(curve, LambdaContext(lambda), GridFunction(curve, grid, ff));
        py::dict d;
        d["residual"] = result.report.residual;
        d["boundary_norm"] = result.report.boundary_norm;
        d["verified"] = result.report.verified;
        d["rotation_number"] = result.report.rotation_number;
        auto u = result.solution;
        d["solution"] = py::cpp_function([u](double x1, double x2) { return u({x1, x2}); });
        return d;
      },
      py::arg("f"), py::arg("lam"), py::arg("grid") = 41);
}
