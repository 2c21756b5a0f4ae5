#pragma once
// Domain types shared by every module. All types are plain values; once
// validated they are never mutated and may be shared freely across threads.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "diffsearch/error.hpp"

namespace diffsearch {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Homogeneous medium and protocol parameters. Rates are stored as rates.
struct SearchParams {
    double drift_b = 0.0;      ///< mean change of distance per unit time; < 0 approaches
    double diff_c = 1.0;       ///< variance of distance change per unit time
    double loss_lambda = 0.0;  ///< loss hazard while searching
    double timeout_r = 0.0;    ///< time-out rate (mean time-out 1/r)
    double relaunch_mu = 1.0;  ///< relaunch rate after a time-out
    double distance_D = 0.0;   ///< initial distance to the object

    /// Total interruption hazard of an active searcher, lambda + r.
    double curtailment() const noexcept { return loss_lambda + timeout_r; }
    bool deterministic() const noexcept { return diff_c == 0.0; }

    friend bool operator==(const SearchParams&, const SearchParams&) = default;
};

/// Unvalidated parameters as read from a config file or the command line.
/// `timeout_mean` is an alternative spelling of 1/r; supplying both is an error.
struct RawSearchParams {
    std::optional<double> b, c, lambda, r, timeout_mean, mu, D;
};

/// Returns a parameter set satisfying every SearchParams invariant or throws
/// exactly one SearchError naming the first offending field. Never clamps.
SearchParams validate(const RawSearchParams& raw);
SearchParams validate(const SearchParams& params);

enum class Stopping { StopAll, NoStop };

struct RaceSpec {
    int n_searchers = 1;
    int k_required = 1;
    Stopping stopping = Stopping::StopAll;

    friend bool operator==(const RaceSpec&, const RaceSpec&) = default;
};

RaceSpec validate(const RaceSpec& race);

/// Stationary attraction rate a and the mean race time it closes on.
struct RaceFixedPoint {
    double attraction_a = 0.0;
    double mean_time = 0.0;
    int iterations = 0;
    double residual = 0.0;  ///< |a - (N-1)/(N(1+E[T]))| at return
};

struct Segment {
    double size = kInfinity;  ///< only the outermost segment is unbounded
    double drift_b = 0.0;
    double diff_c = 1.0;
    double loss_lambda = 0.0;

    friend bool operator==(const Segment&, const Segment&) = default;
};

/// Piecewise-constant medium. segments[0] touches the object at z = 0.
struct SegmentProfile {
    std::vector<Segment> segments;
    double timeout_r = 0.0;
    double relaunch_mu = 1.0;
    double distance_D = 0.0;

    /// Index of the segment containing distance z (z on an interface belongs
    /// to the inner segment).
    std::size_t segment_at(double z) const noexcept;

    friend bool operator==(const SegmentProfile&, const SegmentProfile&) = default;
};

void validate(const SegmentProfile& profile);

/// A single unbounded segment carrying the homogeneous parameters.
SegmentProfile homogeneous_profile(const SearchParams& params);

/// Monte Carlo summary. ci_half_width is the 95% normal-approximation half width.
struct SimEstimate {
    double mean = 0.0;
    double variance = 0.0;
    std::size_t samples = 0;
    double ci_half_width = 0.0;
};

SimEstimate make_estimate(std::span<const double> values);

}  // namespace diffsearch
