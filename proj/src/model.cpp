#include "diffsearch/model.hpp"

#include <cmath>
#include <string>

namespace diffsearch {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::MissingField: return "MissingField";
        case ErrorKind::NonFinite: return "NonFinite";
        case ErrorKind::NonPositiveMu: return "NonPositiveMu";
        case ErrorKind::NegativeRate: return "NegativeRate";
        case ErrorKind::NegativeDistance: return "NegativeDistance";
        case ErrorKind::NegativeDiffusion: return "NegativeDiffusion";
        case ErrorKind::InvalidRace: return "InvalidRace";
        case ErrorKind::InvalidProfile: return "InvalidProfile";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::Overflow: return "Overflow";
        case ErrorKind::NoConvergence: return "NoConvergence";
        case ErrorKind::DegenerateCurtailment: return "DegenerateCurtailment";
        case ErrorKind::InversionUnstable: return "InversionUnstable";
        case ErrorKind::DensityVanishes: return "DensityVanishes";
        case ErrorKind::ObjectUnreachableByB: return "ObjectUnreachableByB";
        case ErrorKind::IllConditioned: return "IllConditioned";
        case ErrorKind::NoMinimumInBracket: return "NoMinimumInBracket";
        case ErrorKind::TimeCapExceeded: return "TimeCapExceeded";
    }
    return "Unknown";
}

bool is_config_error(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::MissingField:
        case ErrorKind::NonFinite:
        case ErrorKind::NonPositiveMu:
        case ErrorKind::NegativeRate:
        case ErrorKind::NegativeDistance:
        case ErrorKind::NegativeDiffusion:
        case ErrorKind::InvalidRace:
        case ErrorKind::InvalidProfile:
        case ErrorKind::InvalidArgument:
            return true;
        default:
            return false;
    }
}

namespace {

double require(const std::optional<double>& value, const char* field) {
    if (!value) throw SearchError(ErrorKind::MissingField, std::string("missing field `") + field + "`");
    if (std::isnan(*value)) throw SearchError(ErrorKind::NonFinite, std::string("field `") + field + "` is NaN");
    return *value;
}

void check_finite(double value, const char* field) {
    if (!std::isfinite(value))
        throw SearchError(ErrorKind::NonFinite, std::string("field `") + field + "` must be finite");
}

void check_rate(double value, const char* field) {
    check_finite(value, field);
    if (value < 0.0)
        throw SearchError(ErrorKind::NegativeRate, std::string("field `") + field + "` must be >= 0");
}

}  // namespace

SearchParams validate(const SearchParams& p) {
    check_finite(p.drift_b, "b");
    check_finite(p.diff_c, "c");
    if (p.diff_c < 0.0) throw SearchError(ErrorKind::NegativeDiffusion, "field `c` must be >= 0");
    check_rate(p.loss_lambda, "lambda");
    check_rate(p.timeout_r, "r");
    check_finite(p.relaunch_mu, "mu");
    if (p.relaunch_mu <= 0.0) throw SearchError(ErrorKind::NonPositiveMu, "field `mu` must be > 0");
    check_finite(p.distance_D, "D");
    if (p.distance_D < 0.0) throw SearchError(ErrorKind::NegativeDistance, "field `D` must be >= 0");
    return p;
}

SearchParams validate(const RawSearchParams& raw) {
    SearchParams p;
    p.drift_b = require(raw.b, "b");
    p.diff_c = require(raw.c, "c");
    p.loss_lambda = require(raw.lambda, "lambda");
    if (raw.r && raw.timeout_mean)
        throw SearchError(ErrorKind::InvalidArgument, "give either `r` or `timeout_mean`, not both");
    if (raw.timeout_mean) {
        const double mean = require(raw.timeout_mean, "timeout_mean");
        if (mean <= 0.0) throw SearchError(ErrorKind::NegativeRate, "field `timeout_mean` must be > 0");
        p.timeout_r = 1.0 / mean;
    } else {
        p.timeout_r = require(raw.r, "r");
    }
    p.relaunch_mu = require(raw.mu, "mu");
    p.distance_D = require(raw.D, "D");
    return validate(p);
}

RaceSpec validate(const RaceSpec& race) {
    if (race.n_searchers < 1) throw SearchError(ErrorKind::InvalidRace, "field `N` must be >= 1");
    if (race.k_required < 1 || race.k_required > race.n_searchers)
        throw SearchError(ErrorKind::InvalidRace, "field `k` must satisfy 1 <= k <= N");
    return race;
}

std::size_t SegmentProfile::segment_at(double z) const noexcept {
    double edge = 0.0;
    for (std::size_t i = 0; i + 1 < segments.size(); ++i) {
        edge += segments[i].size;
        if (z <= edge) return i;
    }
    return segments.empty() ? 0 : segments.size() - 1;
}

void validate(const SegmentProfile& profile) {
    const auto& segs = profile.segments;
    if (segs.empty()) throw SearchError(ErrorKind::InvalidProfile, "field `segments` is empty");
    for (std::size_t i = 0; i < segs.size(); ++i) {
        const Segment& s = segs[i];
        const std::string where = "segments[" + std::to_string(i) + "]";
        const bool last = i + 1 == segs.size();
        if (last && !std::isinf(s.size))
            throw SearchError(ErrorKind::InvalidProfile, where + ".size: last segment must be unbounded");
        if (!last && !(std::isfinite(s.size) && s.size > 0.0))
            throw SearchError(ErrorKind::InvalidProfile, where + ".size must be finite and > 0");
        if (!std::isfinite(s.drift_b)) throw SearchError(ErrorKind::NonFinite, where + ".b must be finite");
        if (!(std::isfinite(s.diff_c) && s.diff_c > 0.0))
            throw SearchError(ErrorKind::NegativeDiffusion, where + ".c must be finite and > 0");
        if (!std::isfinite(s.loss_lambda) || s.loss_lambda < 0.0)
            throw SearchError(ErrorKind::NegativeRate, where + ".lambda must be finite and >= 0");
    }
    check_rate(profile.timeout_r, "r");
    check_finite(profile.relaunch_mu, "mu");
    if (profile.relaunch_mu <= 0.0) throw SearchError(ErrorKind::NonPositiveMu, "field `mu` must be > 0");
    check_finite(profile.distance_D, "D");
    if (profile.distance_D < 0.0) throw SearchError(ErrorKind::NegativeDistance, "field `D` must be >= 0");
}

SegmentProfile homogeneous_profile(const SearchParams& params) {
    SegmentProfile profile;
    profile.segments.push_back({kInfinity, params.drift_b, params.diff_c, params.loss_lambda});
    profile.timeout_r = params.timeout_r;
    profile.relaunch_mu = params.relaunch_mu;
    profile.distance_D = params.distance_D;
    return profile;
}

SimEstimate make_estimate(std::span<const double> values) {
    SimEstimate est;
    est.samples = values.size();
    if (values.empty()) return est;
    // Welford keeps the variance accurate for long, large-valued samples.
    double mean = 0.0, m2 = 0.0;
    std::size_t n = 0;
    for (double v : values) {
        ++n;
        const double delta = v - mean;
        mean += delta / static_cast<double>(n);
        m2 += delta * (v - mean);
    }
    est.mean = mean;
    est.variance = n > 1 ? m2 / static_cast<double>(n - 1) : 0.0;
    est.ci_half_width = 1.96 * std::sqrt(est.variance / static_cast<double>(n));
    return est;
}

}  // namespace diffsearch
