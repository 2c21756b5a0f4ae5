#include <doctest.h>

#include <cmath>
#include <vector>

#include "diffsearch/model.hpp"

using namespace diffsearch;

namespace {

RawSearchParams fig2a_raw() {
    RawSearchParams raw;
    raw.b = 0.2;
    raw.c = 1.0;
    raw.lambda = 0.01;
    raw.r = 0.1;
    raw.mu = 0.05;
    raw.D = 10.0;
    return raw;
}

ErrorKind kind_of(const RawSearchParams& raw) {
    try {
        validate(raw);
    } catch (const SearchError& e) {
        return e.kind();
    }
    FAIL("expected a validation error");
    return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("valid parameter set passes unchanged") {
    const SearchParams p = validate(fig2a_raw());
    CHECK(p.drift_b == 0.2);
    CHECK(p.diff_c == 1.0);
    CHECK(p.loss_lambda == 0.01);
    CHECK(p.timeout_r == 0.1);
    CHECK(p.relaunch_mu == 0.05);
    CHECK(p.distance_D == 10.0);
    CHECK(p.curtailment() == doctest::Approx(0.11));
}

TEST_CASE("validation names the offending field") {
    auto raw = fig2a_raw();
    raw.mu = 0.0;
    CHECK(kind_of(raw) == ErrorKind::NonPositiveMu);

    raw = fig2a_raw();
    raw.c = -1.0;
    CHECK(kind_of(raw) == ErrorKind::NegativeDiffusion);

    raw = fig2a_raw();
    raw.lambda = -0.1;
    CHECK(kind_of(raw) == ErrorKind::NegativeRate);

    raw = fig2a_raw();
    raw.D = -1.0;
    CHECK(kind_of(raw) == ErrorKind::NegativeDistance);

    raw = fig2a_raw();
    raw.b = std::nan("");
    CHECK(kind_of(raw) == ErrorKind::NonFinite);

    raw = fig2a_raw();
    raw.mu.reset();
    CHECK(kind_of(raw) == ErrorKind::MissingField);
    try {
        validate(raw);
    } catch (const SearchError& e) {
        CHECK(std::string(e.what()).find("mu") != std::string::npos);
    }
}

TEST_CASE("timeout_mean is the reciprocal rate; both spellings together are rejected") {
    auto raw = fig2a_raw();
    raw.r.reset();
    raw.timeout_mean = 78.0;
    CHECK(validate(raw).timeout_r == doctest::Approx(1.0 / 78.0));
    raw.r = 0.1;
    CHECK_THROWS_AS(validate(raw), SearchError);
}

TEST_CASE("race specification bounds") {
    CHECK_NOTHROW(validate(RaceSpec{10, 3, Stopping::StopAll}));
    CHECK_THROWS_AS(validate(RaceSpec{2, 3, Stopping::StopAll}), SearchError);
    CHECK_THROWS_AS(validate(RaceSpec{0, 1, Stopping::StopAll}), SearchError);
    CHECK_THROWS_AS(validate(RaceSpec{3, 0, Stopping::NoStop}), SearchError);
}

TEST_CASE("segment profile lookup and validation") {
    SegmentProfile p;
    p.segments = {{1.0, -1.0, 1.0, 0.1}, {2.0, -0.5, 1.0, 0.1}, {kInfinity, 0.0, 1.0, 0.1}};
    p.timeout_r = 0.1;
    p.relaunch_mu = 0.05;
    p.distance_D = 5.0;
    CHECK_NOTHROW(validate(p));
    CHECK(p.segment_at(0.5) == 0);
    CHECK(p.segment_at(1.0) == 0);
    CHECK(p.segment_at(1.5) == 1);
    CHECK(p.segment_at(3.0) == 1);
    CHECK(p.segment_at(100.0) == 2);

    SegmentProfile bad = p;
    bad.segments.back().size = 4.0;
    CHECK_THROWS_AS(validate(bad), SearchError);
    bad = p;
    bad.segments[0].size = kInfinity;
    CHECK_THROWS_AS(validate(bad), SearchError);
    bad = p;
    bad.segments.clear();
    CHECK_THROWS_AS(validate(bad), SearchError);
}

TEST_CASE("homogeneous profile carries the parameters") {
    const SearchParams p = validate(fig2a_raw());
    const SegmentProfile prof = homogeneous_profile(p);
    REQUIRE(prof.segments.size() == 1);
    CHECK(std::isinf(prof.segments[0].size));
    CHECK(prof.segments[0].drift_b == p.drift_b);
    CHECK(prof.timeout_r == p.timeout_r);
    CHECK(prof.distance_D == p.distance_D);
}

TEST_CASE("estimate summary") {
    const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
    const SimEstimate e = make_estimate(v);
    CHECK(e.mean == doctest::Approx(2.5));
    CHECK(e.variance == doctest::Approx(5.0 / 3.0));
    CHECK(e.samples == 4);
    CHECK(e.ci_half_width == doctest::Approx(1.96 * std::sqrt(5.0 / 3.0 / 4.0)));
    CHECK(make_estimate(std::vector<double>{}).samples == 0);
}

TEST_CASE("error kinds split into configuration and numeric failures") {
    CHECK(is_config_error(ErrorKind::MissingField));
    CHECK(is_config_error(ErrorKind::NonPositiveMu));
    CHECK_FALSE(is_config_error(ErrorKind::Overflow));
    CHECK_FALSE(is_config_error(ErrorKind::NoConvergence));
    CHECK(to_string(ErrorKind::Overflow) == "Overflow");
}
