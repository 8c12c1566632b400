#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>

#include "selfnorm/cli.hpp"
#include "selfnorm/distributions.hpp"
#include "selfnorm/entropy_coeffs.hpp"
#include "selfnorm/error.hpp"
#include "selfnorm/expansion.hpp"
#include "selfnorm/lambda_moments.hpp"
#include "selfnorm/metrics.hpp"
#include "selfnorm/simulate.hpp"
#include "selfnorm/special_math.hpp"

namespace py = pybind11;
using namespace selfnorm;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

// fn applied elementwise; the result keeps the input shape.
template <class Fn>
Array map(const Array& x, Fn&& fn) {
  Array out(x.request().shape);
  const double* in = x.data();
  double* o = out.mutable_data();
  for (py::ssize_t i = 0; i < x.size(); ++i) o[i] = fn(in[i]);
  return out;
}

py::list to_list(const std::vector<double>& v) { return py::cast(v); }

}  // namespace

PYBIND11_MODULE(_selfnorm, m) {
  m.doc() = "Edgeworth expansions and rate checks for self-normalized sums";
  py::register_exception<Error>(m, "Error", PyExc_ValueError);

  m.def("normal_pdf", [](const Array& x) { return map(x, normal_pdf); }, py::arg("x"));
  m.def("normal_cdf", [](const Array& x) { return map(x, normal_cdf); }, py::arg("x"));
  m.def(
      "hermite", [](int k, const Array& x) { return map(x, [&](double t) { return hermite_eval(k, t); }); },
      py::arg("k"), py::arg("x"), "Probabilists' Hermite polynomial He_k.");
  m.def("gauss_hermite_inner", &gauss_hermite_inner, py::arg("j"), py::arg("k"));

  m.def(
      "edgeworth_cdf",
      [](const Array& x, int order, int n, double mu4, std::optional<double> mu6) {
        const auto f = selfnorm::edgeworth_cdf(order, n, {mu4, mu6});
        return map(x, [&](double t) { return f(t); });
      },
      py::arg("x"), py::arg("m"), py::arg("n"), py::arg("mu4") = 3.0, py::arg("mu6") = py::none(),
      "Phi^Q_{m,n} evaluated at x.");
  m.def(
      "edgeworth_pdf",
      [](const Array& x, int order, int n, double mu4, std::optional<double> mu6) {
        const auto f = selfnorm::edgeworth_pdf(order, n, {mu4, mu6});
        return map(x, [&](double t) { return f(t); });
      },
      py::arg("x"), py::arg("m"), py::arg("n"), py::arg("mu4") = 3.0, py::arg("mu6") = py::none(),
      "phi^q_{m,n} evaluated at x.");

  m.def(
      "gaussian_exact_density",
      [](const Array& x, int n) {
        const auto f = selfnorm::gaussian_exact_density(n);
        return map(x, [&](double t) { return f(t); });
      },
      py::arg("x"), py::arg("n"), "Density of T_n for standard normal inputs.");
  m.def(
      "gaussian_exact_cdf",
      [](const Array& x, int n) {
        const auto f = selfnorm::gaussian_exact_density(n);
        return map(x, [&](double t) { return f.cdf(t); });
      },
      py::arg("x"), py::arg("n"), "Distribution function of T_n for standard normal inputs.");

  m.def("conditional_cumulant", &conditional_cumulant, py::arg("abs_value"), py::arg("order"));
  m.def("catalog", [] {
    std::vector<std::string> ids;
    for (const auto& [id, law] : selfnorm::catalog()) ids.push_back(id);
    return ids;
  });
  m.def(
      "law_moments",
      [](const std::string& id) {
        const auto& law = find_law(id);
        std::vector<double> mu(law.moments().begin(), law.moments().end());
        return mu;
      },
      py::arg("law"), "Raw moments mu_0..mu_12 of a catalog law.");

  m.def("analytic_c2", &analytic_c2, py::arg("mu4"));
  m.def(
      "entropy_coefficients",
      [](double mu4, std::optional<double> mu6, int lmax) {
        py::dict d;
        for (const auto& [l, c] : selfnorm::entropy_coefficients({mu4, mu6}, lmax)) {
          d[py::int_(l)] = py::make_tuple(c.value, c.partial);
        }
        return d;
      },
      py::arg("mu4"), py::arg("mu6") = py::none(), py::arg("lmax") = 2,
      "{l: (c_l, partial)} for l = 1..lmax.");

  m.def(
      "simulate",
      [](const std::string& law, int n, long reps, std::uint64_t seed, int threads) {
        SimulationConfig sc;
        sc.n = n;
        sc.replications = reps;
        sc.seed = seed;
        sc.threads = threads;
        sc.grid = default_grid_spec(n);
        SimulationState st;
        {
          py::gil_scoped_release release;
          st = run_simulation(find_law(law), sc);
        }
        py::dict d;
        d["grid"] = to_list(st.ecdf.grid());
        d["ecdf"] = to_list(st.ecdf.values());
        d["replications"] = st.replications;
        d["mean"] = st.moments.mean;
        d["variance"] = st.moments.variance();
        d["max_abs"] = st.max_abs;
        return d;
      },
      py::arg("law"), py::arg("n"), py::arg("reps"), py::arg("seed") = 1, py::arg("threads") = 1,
      "Monte Carlo ECDF of T_n on the default grid.");

  m.def(
      "mc_lambda_mean",
      [](const std::string& law, int n, const std::string& term, long reps, std::uint64_t seed,
         int threads) {
        McEstimate e;
        const auto t = lambda_term_from_string(term);
        {
          py::gil_scoped_release release;
          e = selfnorm::mc_lambda_mean(find_law(law), n, t, reps, seed, threads);
        }
        return py::make_tuple(e.estimate, e.standard_error);
      },
      py::arg("law"), py::arg("n"), py::arg("term"), py::arg("reps"), py::arg("seed") = 1,
      py::arg("threads") = 1, "(estimate, standard error) of the mean lambda term.");

  m.def(
      "rate_fit",
      [](const std::vector<std::pair<double, double>>& pairs) {
        const auto r = selfnorm::rate_fit(pairs);
        py::dict d;
        d["slope"] = r.slope;
        d["intercept"] = r.intercept;
        d["r_squared"] = r.r_squared;
        d["slope_stderr"] = r.slope_stderr;
        return d;
      },
      py::arg("pairs"), "Least-squares fit of log(error) on log(n).");

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code;
        {
          py::gil_scoped_release release;
          code = cli::run(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command-line tool in process: (exit code, stdout, stderr).");
}
