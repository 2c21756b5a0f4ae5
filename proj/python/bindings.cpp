#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "diffsearch/analytic.hpp"
#include "diffsearch/fpt.hpp"
#include "diffsearch/optimize.hpp"
#include "diffsearch/segments.hpp"
#include "diffsearch/sim.hpp"

namespace py = pybind11;
using namespace diffsearch;

namespace {

SearchParams make_params(double b, double c, double lambda, double r, double mu, double D) {
    return validate(SearchParams{b, c, lambda, r, mu, D});
}

sim::SimConfig make_sim(std::size_t replications, std::uint64_t seed, double dt, unsigned workers) {
    sim::SimConfig cfg;
    cfg.replications = replications;
    cfg.seed = seed;
    cfg.dt = dt;
    cfg.workers = workers;
    return cfg;
}

py::dict estimate_dict(const SimEstimate& e) {
    py::dict d;
    d["mean"] = e.mean;
    d["variance"] = e.variance;
    d["samples"] = e.samples;
    d["ci_half_width"] = e.ci_half_width;
    return d;
}

}  // namespace

PYBIND11_MODULE(_diffsearch, m) {
    m.doc() = "Diffusion search with losses, time-outs and relaunches";

    py::register_exception<SearchError>(m, "SearchError", PyExc_ValueError);

    py::class_<SearchParams>(m, "SearchParams")
        .def(py::init(&make_params), py::arg("b"), py::arg("c"), py::arg("lambda_"), py::arg("r"), py::arg("mu"),
             py::arg("D"))
        .def_readonly("b", &SearchParams::drift_b)
        .def_readonly("c", &SearchParams::diff_c)
        .def_readonly("lambda_", &SearchParams::loss_lambda)
        .def_readonly("r", &SearchParams::timeout_r)
        .def_readonly("mu", &SearchParams::relaunch_mu)
        .def_readonly("D", &SearchParams::distance_D)
        .def("__repr__", [](const SearchParams& p) {
            return "SearchParams(b=" + std::to_string(p.drift_b) + ", c=" + std::to_string(p.diff_c) +
                   ", lambda_=" + std::to_string(p.loss_lambda) + ", r=" + std::to_string(p.timeout_r) +
                   ", mu=" + std::to_string(p.relaunch_mu) + ", D=" + std::to_string(p.distance_D) + ")";
        });

    py::class_<RaceFixedPoint>(m, "RaceFixedPoint")
        .def_readonly("a", &RaceFixedPoint::attraction_a)
        .def_readonly("mean_time", &RaceFixedPoint::mean_time)
        .def_readonly("iterations", &RaceFixedPoint::iterations)
        .def_readonly("residual", &RaceFixedPoint::residual);

    m.def("mean_time", &analytic::mean_time, py::arg("params"), py::arg("N") = 1, py::arg("a") = 0.0);
    m.def("mean_energy", &analytic::mean_energy_first_success, py::arg("params"), py::arg("N") = 1,
          py::arg("a") = 0.0);
    m.def("mean_time_fixed_point",
          [](const SearchParams& p, int n) { return analytic::mean_time_fixed_point(p, n); }, py::arg("params"),
          py::arg("N"));
    m.def(
        "classify_finiteness",
        [](const SearchParams& p, int n) {
            return analytic::classify_finiteness(p, n).verdict == analytic::Verdict::Finite ? "Finite" : "Infinite";
        },
        py::arg("params"), py::arg("N") = 1);
    m.def("deterministic_limit_mean_time", &analytic::deterministic_limit_mean_time, py::arg("params"));

    m.def("attempt_success_probability", &fpt::attempt_success_probability, py::arg("params"));
    m.def(
        "cdf", [](const SearchParams& p, const std::vector<double>& grid) { return fpt::cdf_G(p, grid).G_values; },
        py::arg("params"), py::arg("grid"));
    m.def(
        "quantile", [](const SearchParams& p, double prob) { return fpt::quantile(p, prob); }, py::arg("params"),
        py::arg("p"));
    m.def("order_statistic_cdf", &fpt::order_statistic_cdf, py::arg("params"), py::arg("k"), py::arg("N"),
          py::arg("t"));
    m.def(
        "searchers_needed",
        [](const SearchParams& p, double budget, int k) {
            return py::make_tuple(fpt::searchers_needed_exact(p, budget, k), fpt::searchers_needed(p, budget, k));
        },
        py::arg("params"), py::arg("B"), py::arg("k"));

    m.def(
        "simulate_race",
        [](const SearchParams& p, int n, int k, std::size_t replications, std::uint64_t seed, double dt,
           unsigned workers) {
            const sim::RaceResult r =
                sim::simulate_race(p, validate(RaceSpec{n, k, Stopping::StopAll}), make_sim(replications, seed, dt, workers));
            py::dict d;
            d["t_k"] = estimate_dict(r.t_k);
            d["j_minus"] = estimate_dict(r.j_minus);
            d["j_plus"] = estimate_dict(r.j_plus);
            d["censored_fraction"] = r.censored_fraction;
            std::vector<double> t;
            for (const auto& s : r.samples) t.push_back(s.t_k);
            d["samples"] = t;
            return d;
        },
        py::arg("params"), py::arg("N") = 1, py::arg("k") = 1, py::arg("replications") = 10000,
        py::arg("seed") = 1, py::arg("dt") = 1e-2, py::arg("workers") = 0);

    m.def(
        "segmented_mean_time",
        [](const std::vector<std::tuple<double, double, double, double>>& segs, double r, double mu, double D) {
            SegmentProfile prof;
            for (const auto& [size, b, c, lambda] : segs) prof.segments.push_back({size, b, c, lambda});
            prof.timeout_r = r;
            prof.relaunch_mu = mu;
            prof.distance_D = D;
            validate(prof);
            return segments::mean_time_segmented(prof);
        },
        py::arg("segments"), py::arg("r"), py::arg("mu"), py::arg("D"));

    m.def(
        "phase_sweep",
        [](const std::vector<double>& rho, const std::vector<double>& eps) {
            segments::PhaseSweepSpec spec;
            spec.rho_grid = rho;
            spec.epsilon_list = eps;
            py::list out;
            for (const auto& pt : segments::phase_sweep(spec))
                out.append(py::make_tuple(pt.rho, pt.epsilon, pt.mean_time, pt.status));
            return out;
        },
        py::arg("rho"), py::arg("epsilon"));

    m.def(
        "optimal_timeout",
        [](const SearchParams& p, int n, const std::string& objective, double r_low, double r_high) {
            optimize::Objective obj = optimize::Objective::MeanTime;
            if (objective == "mean_energy_minus") obj = optimize::Objective::MeanEnergyMinus;
            else if (objective == "mean_energy_plus") obj = optimize::Objective::MeanEnergyPlus;
            else if (objective != "mean_time") throw SearchError(ErrorKind::InvalidArgument, "unknown objective");
            const auto res = optimize::optimal_timeout(p, n, obj, r_low, r_high);
            return py::make_tuple(res.r_star, res.value);
        },
        py::arg("params"), py::arg("N"), py::arg("objective"), py::arg("r_low"), py::arg("r_high"));
}
