#include <doctest.h>

#include <cmath>
#include <vector>

#include "diffsearch/analytic.hpp"
#include "diffsearch/fpt.hpp"
#include "diffsearch/segments.hpp"
#include "diffsearch/sim.hpp"

using namespace diffsearch;
using namespace diffsearch::sim;

namespace {

SearchParams fig5() { return {0.0, 1.0, 0.0025, 1.0 / 78.0, 0.1, 10.0}; }

bool within(double value, const SimEstimate& e, double widths) {
    return std::abs(value - e.mean) <= widths * e.ci_half_width;
}

}  // namespace

TEST_CASE("streams are reproducible and independent") {
    Stream a(7, 3, 1), b(7, 3, 1), c(7, 3, 2), d(7, 4, 1);
    const double x = a.uniform();
    CHECK(x == b.uniform());
    CHECK(x != c.uniform());
    CHECK(x != d.uniform());
    Stream n1(1, 0, 0, false), n2(1, 0, 0, true);
    CHECK(n1.normal() == -n2.normal());
}

TEST_CASE("configuration checks") {
    CHECK_THROWS_AS(validate(SimConfig{.dt = 0.0}), SearchError);
    CHECK_THROWS_AS(validate(SimConfig{.replications = 0}), SearchError);
    CHECK_NOTHROW(validate(SimConfig{}));
}

TEST_CASE("zero distance is found at once") {
    SearchParams p = fig5();
    p.distance_D = 0.0;
    Stream s(1, 0, 0);
    const SearcherSample one = simulate_searcher(p, SimConfig{}, s);
    CHECK(one.time == 0.0);
    CHECK(one.energy == 0.0);
}

TEST_CASE("first passage mean without curtailment") {
    const SearchParams p{-1.0, 1.0, 0.0, 0.0, 1.0, 10.0};
    std::vector<double> t;
    for (int i = 0; i < 20000; ++i) {
        Stream s(11, i, 0);
        t.push_back(simulate_searcher(p, SimConfig{}, s).time);
    }
    CHECK(within(10.0, make_estimate(t), 3.0));
}

TEST_CASE("single searcher race: stopping makes no difference") {
    const RaceResult r = simulate_race(fig5(), RaceSpec{1, 1, Stopping::StopAll}, SimConfig{.replications = 2000});
    for (const RaceSample& s : r.samples) CHECK(s.j_minus == s.j_plus);
    CHECK(r.censored == 0);
    CHECK(r.valid);
}

TEST_CASE("race agrees with the closed forms at a single searcher") {
    const SearchParams p = fig5();
    const RaceResult r = simulate_race(p, RaceSpec{}, SimConfig{.replications = 20000, .seed = 5});
    CHECK(within(analytic::mean_time(p, 1, 0.0), r.t_k, 3.0));
    CHECK(within(analytic::mean_energy_first_success(p, 1, 0.0), r.j_minus, 3.0));
}

TEST_CASE("results do not depend on the worker count") {
    const SearchParams p = fig5();
    const RaceSpec race{5, 2, Stopping::StopAll};
    const RaceResult a = simulate_race(p, race, SimConfig{.replications = 300, .seed = 9, .workers = 1});
    const RaceResult b = simulate_race(p, race, SimConfig{.replications = 300, .seed = 9, .workers = 3});
    REQUIRE(a.samples.size() == b.samples.size());
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        CHECK(a.samples[i].t_k == b.samples[i].t_k);
        CHECK(a.samples[i].j_minus == b.samples[i].j_minus);
        CHECK(a.samples[i].j_plus == b.samples[i].j_plus);
    }
}

TEST_CASE("energy bookkeeping with and without stopping") {
    const RaceResult r = simulate_race(fig5(), RaceSpec{6, 2, Stopping::StopAll}, SimConfig{.replications = 500});
    for (const RaceSample& s : r.samples) {
        CHECK(s.j_plus >= s.j_minus);
        CHECK(s.j_minus <= 6.0 * s.t_k + 1e-9);
    }
}

TEST_CASE("k-th success probability matches the order statistic") {
    const SearchParams p = fig5();
    const double budget = 200.0;
    const RaceResult r = simulate_race(p, RaceSpec{10, 3, Stopping::StopAll}, SimConfig{.replications = 4000, .seed = 3});
    double hits = 0.0;
    for (const RaceSample& s : r.samples) hits += s.t_k <= budget ? 1.0 : 0.0;
    const double frac = hits / r.samples.size();
    const double expect = fpt::order_statistic_cdf(p, 3, 10, budget);
    CHECK(std::abs(frac - expect) <= 3.0 * std::sqrt(expect * (1 - expect) / r.samples.size()));
}

TEST_CASE("censoring is reported") {
    const RaceResult r =
        simulate_race(fig5(), RaceSpec{}, SimConfig{.replications = 500, .max_virtual_time = 50.0});
    CHECK(r.censored > 0);
    CHECK(r.censored_fraction > 0.001);
    CHECK_FALSE(r.valid);
    CHECK(r.max_virtual_time == 50.0);
}

TEST_CASE("empirical cdf") {
    const std::vector<double> one{2.0};
    const std::vector<double> grid{1.0, 2.0, 3.0};
    const auto f = empirical_cdf(one, grid);
    CHECK(f[0] == 0.0);
    CHECK(f[1] == 1.0);
    CHECK(f[2] == 1.0);
    const std::vector<double> samples{5.0, 6.0, 7.0};
    const std::vector<double> low{1.0, 4.9};
    for (double v : empirical_cdf(samples, low)) CHECK(v == 0.0);
}

TEST_CASE("two-segment attempt success against the solver") {
    SegmentProfile p;
    p.segments = {{4.0, -0.3, 1.0, 0.05}, {kInfinity, 0.1, 2.0, 0.01}};
    p.timeout_r = 0.1;
    p.relaunch_mu = 0.05;
    p.distance_D = 8.0;
    const SimEstimate e = simulate_attempt_success(p, SimConfig{.replications = 20000, .seed = 2});
    const double u = segments::killed_success_probability(p);
    CHECK(std::abs(e.mean - u) <= 3.0 * std::sqrt(u * (1 - u) / e.samples));
}

TEST_CASE("segmented simulation of a homogeneous medium") {
    const SearchParams p = fig5();
    const SegmentedEstimate e =
        simulate_segmented(homogeneous_profile(p), SimConfig{.replications = 2000, .seed = 4});
    CHECK(e.valid);
    CHECK(within(analytic::mean_time(p, 1, 0.0), e.time, 3.0));
    CHECK(within(analytic::mean_energy_first_success(p, 1, 0.0), e.energy, 3.0));
}
