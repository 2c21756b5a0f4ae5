#pragma once
// Monte Carlo simulation of the searcher state machine (searching, lost,
// waiting for relaunch, found). Used as the reference oracle for the
// closed-form and transform-based results.

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "diffsearch/model.hpp"

namespace diffsearch::sim {

/// How a single search attempt is sampled.
///  - Exact: first-passage time drawn from the (possibly defective) inverse
///    Gaussian law; homogeneous media only.
///  - EulerMaruyama: path discretised with step dt and a Brownian-bridge
///    crossing test; required for segmented media.
enum class Method { Exact, EulerMaruyama };

struct SimConfig {
    double dt = 1e-2;
    std::size_t replications = 10'000;
    std::uint64_t seed = 1;
    double max_virtual_time = 0.0;  ///< 0 selects the default cap
    bool antithetic = false;        ///< pairs replications with negated normals (EulerMaruyama only)
    Method method = Method::Exact;
    unsigned workers = 0;           ///< 0 uses std::thread::hardware_concurrency
};

void validate(const SimConfig& config);

/// Counter-based random stream: the state depends only on
/// (seed, replication, searcher), never on scheduling.
class Stream {
public:
    Stream(std::uint64_t seed, std::uint64_t replication, std::uint64_t searcher, bool negate_normals = false);

    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
    double exponential() { return std::exponential_distribution<double>(1.0)(engine_); }
    double normal() {
        const double z = normal_(engine_);
        return negate_ ? -z : z;
    }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_;
    bool negate_;
};

/// First-passage time of the free diffusion from D to 0; +inf when the path
/// escapes (possible only for b > 0).
double sample_first_passage(double drift_b, double diff_c, double distance, Stream& stream);

struct SearcherSample {
    double time = 0.0;    ///< T: first success instant
    double energy = 0.0;  ///< J: time spent searching
    int interruptions = 0;
    bool censored = false;
};

struct RaceSample {
    double t_k = 0.0;
    double j_minus = 0.0;
    double j_plus = 0.0;
    int interruptions = 0;
    bool censored = false;
};

struct RaceResult {
    std::vector<RaceSample> samples;
    SimEstimate t_k, j_minus, j_plus;  ///< over uncensored samples
    std::size_t censored = 0;
    double censored_fraction = 0.0;
    bool valid = true;  ///< censored fraction <= 0.1%
    double max_virtual_time = 0.0;
    RaceSpec race;
};

/// Default censoring cap: 1e3 times the analytic mean when finite, else 1e6.
double default_time_cap(const SearchParams& params, int n_searchers);
double default_time_cap(const SegmentProfile& profile);

SearcherSample simulate_searcher(const SearchParams& params, const SimConfig& config, Stream& stream);

RaceResult simulate_race(const SearchParams& params, const RaceSpec& race, const SimConfig& config);

/// Race in a segmented medium; always Euler-Maruyama.
RaceResult simulate_segmented_race(const SegmentProfile& profile, const RaceSpec& race, const SimConfig& config);

struct SegmentedEstimate {
    SimEstimate time;
    SimEstimate energy;
    std::size_t censored = 0;
    double censored_fraction = 0.0;
    bool valid = true;
};

SegmentedEstimate simulate_segmented(const SegmentProfile& profile, const SimConfig& config);

/// Fraction of single killed attempts (no relaunch) that reach the object.
SimEstimate simulate_attempt_success(const SegmentProfile& profile, const SimConfig& config);

/// Right-continuous empirical CDF of `samples` evaluated on `grid`.
std::vector<double> empirical_cdf(std::span<const double> samples, std::span<const double> grid);

/// Success instants of uncensored samples.
std::vector<double> success_times(const RaceResult& result);

}  // namespace diffsearch::sim
