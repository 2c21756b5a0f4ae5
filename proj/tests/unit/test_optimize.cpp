#include <doctest.h>

#include <cmath>
#include <vector>

#include "diffsearch/analytic.hpp"
#include "diffsearch/optimize.hpp"

using namespace diffsearch;
using namespace diffsearch::optimize;

namespace {

SearchParams fig2a() { return {0.2, 1.0, 0.01, 0.1, 0.05, 10.0}; }
SearchParams fig2b() { return {0.0, 1.0, 0.15, 0.1, 0.05, 10.0}; }
SearchParams fig4() { return {0.0, 1.0, 0.0025, 0.1, 0.1, 10.0}; }

std::vector<double> r_grid(int points) {
    std::vector<double> g;
    for (int i = 0; i < points; ++i) g.push_back(std::pow(10.0, -3.0 + 3.0 * i / (points - 1)));
    return g;
}

}  // namespace

TEST_CASE("single-point locus equals direct evaluation") {
    const auto pts = tradeoff_locus(fig2a(), 3, {0.1});
    REQUIRE(pts.size() == 1);
    SearchParams p = fig2a();
    const RaceFixedPoint fp = analytic::mean_time_fixed_point(p, 3);
    CHECK(pts[0].mean_time == fp.mean_time);
    CHECK(pts[0].mean_energy_minus == analytic::mean_energy_first_success(p, 3, fp.attraction_a));
    CHECK(pts[0].timeout_mean == 10.0);
    CHECK_THROWS_AS(tradeoff_locus(fig2a(), 1, {0.2, 0.1}), SearchError);
}

TEST_CASE("low loss: time and energy are near their minima together") {
    const auto pts = tradeoff_locus(fig2a(), 1, r_grid(121));
    double tmin = kInfinity, jmin = kInfinity;
    for (const auto& p : pts) {
        tmin = std::min(tmin, p.mean_time);
        jmin = std::min(jmin, p.mean_energy_minus);
    }
    bool joint = false;
    for (const auto& p : pts) joint |= p.mean_time <= 1.1 * tmin && p.mean_energy_minus <= 1.1 * jmin;
    CHECK(joint);
}

TEST_CASE("high loss: minimum time does not give minimum energy") {
    const auto pts = tradeoff_locus(fig2b(), 1, r_grid(121));
    std::size_t arg = 0;
    double jmin = kInfinity;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (pts[i].mean_time < pts[arg].mean_time) arg = i;
        jmin = std::min(jmin, pts[i].mean_energy_minus);
    }
    CHECK(pts[arg].mean_energy_minus > jmin * 1.01);
}

TEST_CASE("overflowing points are flagged, not fatal") {
    SearchParams far = fig2a();
    far.distance_D = 400.0;
    const auto pts = tradeoff_locus(far, 1, {0.001, 10.0});
    CHECK(pts[1].status == "Overflow");
    CHECK(std::isinf(pts[1].mean_time));
}

TEST_CASE("flat objective at zero distance") {
    SearchParams p = fig2a();
    p.distance_D = 0.0;
    const OptimumResult r = optimal_timeout(p, 1, Objective::MeanTime, 0.01, 1.0);
    CHECK(r.degenerate_flat);
    CHECK(r.value == 0.0);
    CHECK(r.r_star == doctest::Approx(0.505));
}

TEST_CASE("optimum agrees with a brute-force scan") {
    for (const auto& [params, n] : std::vector<std::pair<SearchParams, int>>{{fig4(), 10}, {fig2a(), 1}, {fig2b(), 5}}) {
        for (Objective obj : {Objective::MeanTime, Objective::MeanEnergyMinus}) {
            const double lo = 1e-3, hi = 1.0;
            const OptimumResult opt = optimal_timeout(params, n, obj, lo, hi);
            double best = kInfinity, best_x = 0.0;
            const int cells = 1000;
            const double step = std::log(hi / lo) / (cells - 1);
            for (int i = 0; i < cells; ++i) {
                const double x = -std::log(hi) + step * i;
                const double v = objective_value(params, n, obj, std::exp(-x));
                if (v < best) {
                    best = v;
                    best_x = x;
                }
            }
            CHECK(opt.value <= best * 1.005);
            if (!opt.at_boundary) CHECK(std::abs(-std::log(opt.r_star) - best_x) <= 2.0 * step);
        }
    }
}

TEST_CASE("monotone objective reports the bracket edge") {
    // without losses, longer time-outs only help the mean time when drifting in
    const SearchParams p{-0.5, 1.0, 0.0, 0.1, 0.1, 10.0};
    const OptimumResult r = optimal_timeout(p, 1, Objective::MeanTime, 0.01, 1.0);
    CHECK(r.at_boundary);
    CHECK(r.r_star == doctest::Approx(0.01));
}

TEST_CASE("simulated objectives are deterministic in r") {
    OptimizeOptions opt;
    opt.k_required = 3;
    opt.sim.replications = 200;
    const double a = objective_value(fig4(), 6, Objective::MeanEnergyPlus, 0.05, opt);
    const double b = objective_value(fig4(), 6, Objective::MeanEnergyPlus, 0.05, opt);
    CHECK(a == b);
}
