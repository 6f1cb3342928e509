#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "maxmart/core_paths.hpp"
#include "maxmart/decompositions.hpp"
#include "maxmart/law_samplers.hpp"
#include "maxmart/mc_engine.hpp"
#include "maxmart/processes.hpp"
#include "maxmart/random_times.hpp"
#include "maxmart/rng.hpp"
#include "maxmart/suites.hpp"

namespace py = pybind11;
using namespace maxmart;

namespace {

Path to_path(const std::vector<double>& values, double t0, double step,
             std::optional<std::size_t> stopped_at = std::nullopt) {
    return Path(TimeGrid(t0, step, values.size()), values, stopped_at);
}

py::dict report_dict(const VerificationReport& r) {
    py::dict d;
    d["identity_name"] = r.identity_name;
    d["n"] = r.n;
    d["statistic"] = r.statistic;
    d["threshold"] = r.threshold;
    d["pass"] = r.pass;
    d["unresolved_fraction"] = r.unresolved_fraction;
    d["seed"] = r.seed;
    d["runtime_ms"] = r.runtime_ms;
    d["detail"] = r.detail;
    return d;
}

TestFunction tf_from(const py::object& f) {
    if (py::isinstance<TestFunction>(f)) return f.cast<TestFunction>();
    if (py::isinstance<py::float_>(f) || py::isinstance<py::int_>(f))
        return TestFunction::constant(f.cast<double>());
    return TestFunction::generic(f.cast<std::function<double(double)>>());
}

}  // namespace

PYBIND11_MODULE(_maxmart, m) {
    m.doc() = "path decompositions driven by the running supremum, with a seeded "
              "Monte Carlo verification engine";

    py::class_<TestFunction>(m, "TestFunction")
        .def_static("indicator", &TestFunction::indicator)
        .def_static("constant", &TestFunction::constant)
        .def_static("piecewise_linear", &TestFunction::piecewise_linear)
        .def("__call__", &TestFunction::value)
        .def("primitive", &TestFunction::primitive)
        .def("reciprocal_tail", &TestFunction::reciprocal_tail)
        .def("h", &TestFunction::h);

    m.def("running_supremum",
          [](const std::vector<double>& v, double step) {
              return running_supremum(to_path(v, 0.0, step)).values;
          },
          py::arg("values"), py::arg("step") = 1.0);
    m.def("running_infimum",
          [](const std::vector<double>& v, double step) {
              return running_infimum(to_path(v, 0.0, step)).values;
          },
          py::arg("values"), py::arg("step") = 1.0);
    m.def("ito_sum",
          [](const std::vector<double>& k, const std::vector<double>& x, double step) {
              return ito_sum(to_path(k, 0.0, step), to_path(x, 0.0, step)).values;
          },
          py::arg("k"), py::arg("x"), py::arg("step") = 1.0);
    m.def("skorokhod_reflection",
          [](const std::vector<double>& y, double step) {
              const auto r = skorokhod_reflection(to_path(y, 0.0, step));
              return py::make_tuple(r.z.values, r.a.values);
          },
          py::arg("y"), py::arg("step") = 1.0);
    m.def("balayage_transform",
          [](const std::vector<double>& k, const std::vector<double>& y, double step,
             double eps_zero) {
              const auto r = balayage_transform(to_path(k, 0.0, step), to_path(y, 0.0, step),
                                                eps_zero);
              return py::make_tuple(r.lhs.values, r.rhs.values);
          },
          py::arg("k"), py::arg("y"), py::arg("step") = 1.0, py::arg("eps_zero") = 0.0);

    m.def("decompose",
          [](const std::vector<double>& n, double step) {
              const auto d = decompose(to_path(n, 0.0, step));
              py::dict out;
              out["N"] = d.N.values;
              out["S"] = d.S.values;
              out["Z"] = d.Z.values;
              out["M"] = d.M.values;
              out["A"] = d.A.values;
              return out;
          },
          py::arg("values"), py::arg("step") = 1.0);
    m.def("reconstruct_multiplicative",
          [](const std::vector<double>& z, const std::vector<double>& mm, double step) {
              const auto r = reconstruct_multiplicative(to_path(z, 0.0, step),
                                                        to_path(mm, 0.0, step));
              return py::make_tuple(r.N.values, r.S.values);
          },
          py::arg("Z"), py::arg("M"), py::arg("step") = 1.0);
    m.def("azema_yor",
          [](const py::object& f, const std::vector<double>& n, double step) {
              const auto N = to_path(n, 0.0, step);
              const auto S = running_supremum(N);
              const auto r = azema_yor(tf_from(f), N, S);
              return py::make_tuple(r.X.values, r.integral_side.values);
          },
          py::arg("f"), py::arg("N"), py::arg("step") = 1.0);
    m.def("h_transform",
          [](const py::object& f, double x) { return h_transform(tf_from(f), x); });
    m.def("conditional_sup_law", [](const py::object& f, double n, double s) {
        return conditional_sup_law(tf_from(f), n, s);
    });
    m.def("rho_density", &rho_density, py::arg("x"), py::arg("n"), py::arg("s"));

    m.def("last_passage", [](const std::vector<double>& n, double step) {
        const auto N = to_path(n, 0.0, step);
        const auto S = running_supremum(N);
        const auto g = last_passage(N, S);
        return g.attained() ? py::int_(g.index) : py::int_(-1);
    });
    m.def("pseudo_stopping_time", [](const std::vector<double>& n, double step) {
        const auto N = to_path(n, 0.0, step);
        const auto S = running_supremum(N);
        const auto g = last_passage(N, S);
        const auto [rho, r] = pseudo_stopping_time(N, S, g);
        return py::make_tuple(rho.attained() ? long(rho.index) : -1L, r);
    });

    m.def("gen_brownian_stopped",
          [](double x0, double step, std::size_t n_points, std::uint64_t seed) {
              return gen_brownian_stopped(x0, TimeGrid(0.0, step, n_points), seed).values;
          },
          py::arg("x0"), py::arg("step"), py::arg("n_points"), py::arg("seed"));
    m.def("gen_bessel3",
          [](double x0, double step, std::size_t n_points, std::uint64_t seed) {
              return gen_bessel3(x0, TimeGrid(0.0, step, n_points), seed).values;
          },
          py::arg("x0"), py::arg("step"), py::arg("n_points"), py::arg("seed"));
    m.def("gen_gbm_martingale",
          [](double nu, double step, std::size_t n_points, std::uint64_t seed) {
              const auto g = gen_gbm_martingale(GbmSpec{nu}, TimeGrid(0.0, step, n_points), seed);
              return py::make_tuple(g.N.values, g.driver_B.values);
          },
          py::arg("nu"), py::arg("step"), py::arg("n_points"), py::arg("seed"));

    m.def("path_stream_seed", &path_stream_seed, py::arg("master_seed"), py::arg("path_index"));

    m.def("list_suites", [] {
        py::list out;
        for (const auto& s : suite_registry()) {
            py::dict d;
            d["name"] = s.name;
            d["description"] = s.description;
            d["generator"] = s.generator;
            d["min_n"] = s.min_n;
            out.append(d);
        }
        return out;
    });
    m.def("run_suite",
          [](const std::string& name, std::uint64_t n_paths, double step, std::uint64_t seed,
             unsigned workers, double horizon) {
              SuiteParams p;
              p.n_paths = n_paths;
              p.step = step;
              p.seed = seed;
              p.workers = workers;
              p.horizon = horizon;
              return report_dict(run_suite(name, p));
          },
          py::arg("name"), py::arg("n_paths") = 100000, py::arg("step") = 1e-3,
          py::arg("seed") = 42, py::arg("workers") = 0, py::arg("horizon") = 0.0,
          py::call_guard<py::gil_scoped_release>());
}
