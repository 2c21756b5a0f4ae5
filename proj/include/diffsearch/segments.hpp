#pragma once
// Single-searcher results in a piecewise-constant medium.
//
// Inside each segment the killed-diffusion boundary problems
//     (c/2) y'' + b y' - (lambda + r) y = -f
// have closed-form exponential solutions. The segments are chained by
// propagating, from the unbounded tail inwards, the affine relation
// y' = w y + v satisfied by every solution that stays bounded at infinity
// (a 2x2 transfer step normalised at each interface), then sweeping outwards
// from y(0) to y(D). The success probability is the product of per-segment
// ratios u(z_left) / u(z_right), accumulated in the log domain.

#include <string>
#include <vector>

#include "diffsearch/model.hpp"

namespace diffsearch::segments {

struct AttemptMoments {
    double log_success = 0.0;        ///< log u(D)
    double success = 1.0;            ///< u(D): attempt reaches the object
    double mean_duration = 0.0;      ///< expected searching time of one attempt
    double loss_probability = 0.0;   ///< attempt ends by loss (not time-out)
};

double killed_success_probability(const SegmentProfile& profile);
double log_killed_success_probability(const SegmentProfile& profile);

/// Per-attempt success probability, mean duration and loss probability.
/// Needs lambda_k + r > 0 in every segment.
AttemptMoments attempt_moments(const SegmentProfile& profile);

/// Renewal-reward mean search time of one searcher; +inf when the success
/// probability underflows or a lost searcher is never relaunched (r = 0).
double mean_time_segmented(const SegmentProfile& profile);

/// Success probability u(z) at several distances, for diagnostics.
std::vector<double> success_profile(const SegmentProfile& profile, const std::vector<double>& distances);

/// Profile family lambda_k = exp(1/(k rho)), b_k = -exp((1+eps)/(k rho)),
/// k = 1..m counted outward from the object; segment m is the unbounded tail.
struct PhaseSweepSpec {
    std::vector<double> rho_grid;
    std::vector<double> epsilon_list;
    int m = 20;
    double segment_size = 1.0;
    double diff_c = 1.0;
    double timeout_r = 0.05;
    double relaunch_mu = 0.025;
    double distance_D = 10.0;
};

SegmentProfile phase_profile(const PhaseSweepSpec& spec, double rho, double epsilon);

struct PhasePoint {
    double rho = 0.0;
    double epsilon = 0.0;
    double mean_time = 0.0;  ///< +inf when divergent or failed
    std::string status;      ///< "ok", "Infinite", or the error kind
};

/// Evaluates every (epsilon, rho) pair; a failure at one point is recorded in
/// its status and never aborts the sweep. Output is epsilon-major.
std::vector<PhasePoint> phase_sweep(const PhaseSweepSpec& spec);

}  // namespace diffsearch::segments
