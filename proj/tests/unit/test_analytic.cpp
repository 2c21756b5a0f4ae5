#include <doctest.h>

#include <cmath>

#include "diffsearch/analytic.hpp"

using namespace diffsearch;
using namespace diffsearch::analytic;

namespace {

SearchParams fig2a() { return {0.2, 1.0, 0.01, 0.1, 0.05, 10.0}; }

}  // namespace

TEST_CASE("zero distance gives zero time and energy") {
    SearchParams p = fig2a();
    p.distance_D = 0.0;
    CHECK(mean_time(p, 1, 0.0) == 0.0);
    CHECK(mean_energy_first_success(p, 1, 0.0) == 0.0);
    const RaceFixedPoint fp = mean_time_fixed_point(p, 1);
    CHECK(fp.mean_time == 0.0);
    CHECK(fp.attraction_a == 0.0);
}

TEST_CASE("closed forms match arbitrary-precision values") {
    // mpmath, 30 digits
    const SearchParams b0{0.0, 1.0, 0.15, 0.1, 0.05, 10.0};
    CHECK(mean_time(b0, 1, 0.0) == doctest::Approx(35292.1382954840942).epsilon(1e-12));

    const SearchParams p = fig2a();
    CHECK(mean_time(p, 1, 0.0) == doctest::Approx(36293.380188724323).epsilon(1e-12));
    CHECK(mean_energy_first_success(p, 1, 0.0) == doctest::Approx(10997.993996583128).epsilon(1e-12));
}

TEST_CASE("fixed point for several searchers") {
    const SearchParams p = fig2a();
    const RaceFixedPoint one = mean_time_fixed_point(p, 1);
    CHECK(one.attraction_a == 0.0);
    CHECK(one.mean_time == mean_time(p, 1, 0.0));

    // mpmath findroot on a - (N-1)/(N(1+E[T](a)))
    const RaceFixedPoint two = mean_time_fixed_point(p, 2);
    CHECK(two.attraction_a == doctest::Approx(2.75545249509131e-05).epsilon(1e-8));
    CHECK(two.mean_time == doctest::Approx(18144.839962428052).epsilon(1e-8));

    const RaceFixedPoint ten = mean_time_fixed_point(p, 10);
    CHECK(ten.attraction_a == doctest::Approx(2.48135898033793e-04).epsilon(1e-8));
    CHECK(ten.mean_time == doctest::Approx(3626.0447248121716).epsilon(1e-8));
    CHECK(ten.mean_time < one.mean_time);
    const double resid = std::abs(ten.attraction_a - 9.0 / (10.0 * (1.0 + mean_time(p, 10, ten.attraction_a))));
    CHECK(resid <= 1e-10 * ten.attraction_a * 10);
}

TEST_CASE("fixed point root is unique on a scan") {
    const SearchParams p = fig2a();
    const int n = 10;
    int sign_changes = 0;
    double prev = 0.0;
    for (int i = 0; i <= 2000; ++i) {
        const double a = 0.9 * i / 2000.0;
        const double f = a - (n - 1.0) / (n * (1.0 + mean_time(p, n, a)));
        if (i > 0 && (f > 0) != (prev > 0)) ++sign_changes;
        prev = f;
    }
    CHECK(sign_changes == 1);
}

TEST_CASE("time and energy formulas are algebraically linked") {
    for (double b : {-0.5, 0.0, 0.3}) {
        for (double a : {0.0, 0.01, 0.2}) {
            for (int n : {1, 3, 8}) {
                const SearchParams p{b, 1.3, 0.02, 0.07, 0.2, 6.0};
                const double t = mean_time(p, n, a);
                const double j = mean_energy_first_success(p, n, a);
                const double lhs = j * (p.curtailment() + a);
                const double rhs = t * n * (p.relaunch_mu + a) * (p.timeout_r + a) / (p.relaunch_mu + p.timeout_r + a);
                CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("exponent is linear in distance") {
    const SearchParams p = fig2a();
    SearchParams p2 = p;
    p2.distance_D = 2.0 * p.distance_D;
    CHECK(success_exponent(p2, 0.0) == doctest::Approx(2.0 * success_exponent(p, 0.0)).epsilon(1e-14));
}

TEST_CASE("mean time monotone in N and D") {
    for (double b : {-0.2, 0.0, 0.2}) {
        for (double lambda : {0.0, 0.01, 0.1}) {
            const SearchParams p{b, 1.0, lambda, 0.05, 0.1, 8.0};
            double prev = kInfinity;
            for (int n = 1; n <= 12; ++n) {
                const double t = mean_time_fixed_point(p, n).mean_time;
                CHECK(t <= prev);
                prev = t;
            }
            double prev_d = 0.0;
            for (double d = 0.5; d <= 20.0; d += 0.5) {
                SearchParams q = p;
                q.distance_D = d;
                const double t = mean_time(q, 1, 0.0);
                CHECK(t > prev_d);
                prev_d = t;
            }
        }
    }
}

TEST_CASE("overflow is reported instead of infinity") {
    const SearchParams far{0.5, 1.0, 1.0, 1.0, 0.1, 1000.0};
    CHECK_THROWS_AS(mean_time(far, 1, 0.0), SearchError);
    try {
        mean_energy_first_success(far, 1, 0.0);
    } catch (const SearchError& e) {
        CHECK(e.kind() == ErrorKind::Overflow);
    }
}

TEST_CASE("finiteness classification") {
    auto verdict = [](SearchParams p, int n = 1) { return classify_finiteness(p, n); };
    Finiteness f = verdict({-0.5, 0.0, 0.0, 0.0, 1.0, 10.0});
    CHECK(f.verdict == Verdict::Finite);
    CHECK(f.reason == FinitenessReason::DeterministicTowardObject);

    f = verdict({0.1, 0.0, 0.0, 0.0, 1.0, 10.0});
    CHECK(f.verdict == Verdict::Infinite);
    CHECK(f.reason == FinitenessReason::DeterministicAwayOrZeroDrift);
    CHECK(verdict({0.0, 0.0, 0.1, 0.1, 1.0, 10.0}).verdict == Verdict::Infinite);

    f = verdict({0.5, 1.0, 0.0, 0.2, 1.0, 10.0});
    CHECK(f.verdict == Verdict::Finite);
    CHECK(f.reason == FinitenessReason::RandomisedWithCurtailment);

    f = verdict({0.5, 1.0, 0.0, 0.0, 1.0, 10.0});
    CHECK(f.verdict == Verdict::Infinite);
    CHECK(f.reason == FinitenessReason::NoCurtailment);
    CHECK(verdict({-0.5, 1.0, 0.0, 0.0, 1.0, 10.0}).verdict == Verdict::Finite);

    // several searchers: the attraction rate alone curtails when the closure
    // has a positive root, which needs a modest exponent
    CHECK(verdict({0.05, 1.0, 0.0, 0.0, 1.0, 1.0}, 4).verdict == Verdict::Finite);
    CHECK(verdict({0.5, 1.0, 0.0, 0.0, 1.0, 10.0}, 4).verdict == Verdict::Infinite);
}

TEST_CASE("deterministic limit") {
    CHECK(deterministic_limit_mean_time({-1.0, 0.0, 0.0, 0.0, 1.0, 0.0}) == 0.0);
    CHECK(std::isinf(deterministic_limit_mean_time({0.1, 0.0, 0.01, 0.1, 0.05, 10.0})));
    const SearchParams p{-1.0, 0.0, 0.01, 0.1, 0.05, 10.0};
    const double lim = deterministic_limit_mean_time(p);
    CHECK(lim == doctest::Approx(60.124980718392993).epsilon(1e-12));
    for (double c : {1e-2, 1e-3, 1e-4}) {
        SearchParams q = p;
        q.diff_c = c;
        const double t = mean_time(q, 1, 0.0);
        if (c <= 1e-3) CHECK(std::abs(t - lim) / lim < 1e-3);
    }
    SearchParams no_timeout = p;
    no_timeout.timeout_r = 0.0;
    no_timeout.loss_lambda = 0.0;
    CHECK(deterministic_limit_mean_time(no_timeout) == doctest::Approx(10.0));
}

TEST_CASE("rest state probability") {
    CHECK(rest_state_probability(0.0) == 1.0);
    CHECK(rest_state_probability(1.0) == 0.5);
}
