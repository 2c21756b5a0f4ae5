#include "diffsearch/sim.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <queue>
#include <thread>

#include "diffsearch/analytic.hpp"
#include "diffsearch/segments.hpp"

namespace diffsearch::sim {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

struct AttemptOutcome {
    double duration = 0.0;
    bool success = false;
    bool lost = false;
};

/// Exact attempt: free first passage raced against an Exp(lambda + r) interruption.
class ExactAttempt {
public:
    explicit ExactAttempt(const SearchParams& p) : p_(p), theta_(p.curtailment()) {}

    AttemptOutcome operator()(Stream& s, double /*limit*/) const {
        const double interrupt = theta_ > 0.0 ? s.exponential() / theta_ : kInfinity;
        const double tau = sample_first_passage(p_.drift_b, p_.diff_c, p_.distance_D, s);
        if (tau <= interrupt) return {tau, true, false};
        const bool lost = s.uniform() * theta_ < p_.loss_lambda;
        return {interrupt, false, lost};
    }

    double timeout_r() const { return p_.timeout_r; }
    double relaunch_mu() const { return p_.relaunch_mu; }

private:
    SearchParams p_;
    double theta_;
};

/// Euler-Maruyama attempt through a piecewise-constant medium. Each step is
/// shortened to end exactly at the next loss or time-out event; a
/// Brownian-bridge test catches crossings of 0 inside the step.
class EulerAttempt {
public:
    EulerAttempt(const SegmentProfile& profile, double dt) : profile_(profile), dt_(dt) {
        double edge = 0.0;
        edges_.push_back(0.0);
        for (const Segment& seg : profile_.segments) {
            edge += seg.size;
            edges_.push_back(edge);
        }
    }

    AttemptOutcome operator()(Stream& s, double limit) const {
        double z = profile_.distance_D;
        if (z <= 0.0) return {0.0, true, false};
        const double r = profile_.timeout_r;
        const double timeout_at = r > 0.0 ? s.exponential() / r : kInfinity;
        const double loss_budget = s.exponential();
        double hazard = 0.0;
        double t = 0.0;
        std::size_t idx = profile_.segment_at(z);

        enum class Event { None, Timeout, Loss };
        while (true) {
            const Segment& seg = profile_.segments[idx];
            double h = dt_;
            Event event = Event::None;
            if (t + h >= timeout_at) {
                h = timeout_at - t;
                event = Event::Timeout;
            }
            if (seg.loss_lambda > 0.0 && hazard + seg.loss_lambda * h >= loss_budget) {
                h = (loss_budget - hazard) / seg.loss_lambda;
                event = Event::Loss;
            }
            const double next = z + seg.drift_b * h + std::sqrt(seg.diff_c * h) * s.normal();
            t += h;
            if (next <= 0.0) return {t, true, false};
            const double bridge = 2.0 * z * next / (seg.diff_c * h);
            if (bridge < 40.0 && s.uniform() < std::exp(-bridge)) return {t, true, false};
            hazard += seg.loss_lambda * h;
            if (event == Event::Timeout) return {t, false, false};
            if (event == Event::Loss) return {t, false, true};
            if (t > limit) return {kInfinity, false, false};
            z = next;
            while (z > edges_[idx + 1]) ++idx;
            while (z <= edges_[idx]) --idx;
        }
    }

    double timeout_r() const { return profile_.timeout_r; }
    double relaunch_mu() const { return profile_.relaunch_mu; }

private:
    const SegmentProfile& profile_;
    double dt_;
    std::vector<double> edges_;
};

struct Interval {
    double start;
    double end;
    bool success;
};

struct Trace {
    double time = kInfinity;
    double energy = 0.0;
    int interruptions = 0;
    bool success = false;
};

/// Renewal loop of one searcher: attempts separated by relaunch delays.
/// Stops at the first success, or once an attempt would start after
/// `horizon`, or when time runs past `cap`.
template <class Sampler>
Trace run_searcher(const Sampler& attempt, Stream& s, double horizon, double cap, std::vector<Interval>* log) {
    Trace trace;
    double t = 0.0;
    const double r = attempt.timeout_r(), mu = attempt.relaunch_mu();
    while (t <= horizon) {
        const AttemptOutcome a = attempt(s, cap - t);
        const double end = t + a.duration;
        if (log) log->push_back({t, end, a.success});
        trace.energy += a.duration;
        if (a.success) {
            trace.time = end;
            trace.success = true;
            return trace;
        }
        if (!(end <= cap)) return trace;
        ++trace.interruptions;
        double delay = s.exponential() / mu;
        if (a.lost) delay += r > 0.0 ? s.exponential() / r : kInfinity;
        t = end + delay;
    }
    return trace;
}

template <class Sampler>
RaceSample run_race(const Sampler& attempt, const RaceSpec& race, std::uint64_t seed, std::uint64_t stream_rep,
                    bool negate, double cap) {
    const int n = race.n_searchers;
    const std::size_t k = static_cast<std::size_t>(race.k_required);
    const double r = attempt.timeout_r(), mu = attempt.relaunch_mu();

    // Searchers advance in global time order so that no work is spent past
    // the k-th success. Each owns its stream, so the interleaving does not
    // change any searcher's trajectory.
    std::vector<Stream> streams;
    streams.reserve(n);
    for (int i = 0; i < n; ++i) streams.emplace_back(seed, stream_rep, static_cast<std::uint64_t>(i), negate);
    std::vector<std::vector<Interval>> logs(n);

    using Launch = std::pair<double, int>;
    std::priority_queue<Launch, std::vector<Launch>, std::greater<>> launches;
    for (int i = 0; i < n; ++i) launches.push({0.0, i});
    std::priority_queue<double> best;  // the k smallest success instants so far

    while (!launches.empty()) {
        const auto [start, i] = launches.top();
        const double horizon = best.size() == k ? best.top() : cap;
        if (start > horizon) break;
        launches.pop();
        Stream& s = streams[i];
        const AttemptOutcome a = attempt(s, cap - start);
        const double end = start + a.duration;
        logs[i].push_back({start, end, a.success});
        if (a.success) {
            if (end > cap) continue;
            if (best.size() < k) {
                best.push(end);
            } else if (end < best.top()) {
                best.pop();
                best.push(end);
            }
            continue;
        }
        if (!(end <= cap)) continue;
        double delay = s.exponential() / mu;
        if (a.lost) delay += r > 0.0 ? s.exponential() / r : kInfinity;
        launches.push({end + delay, i});
    }

    RaceSample sample;
    if (best.size() < k) {
        sample.censored = true;
        sample.t_k = cap;
    } else {
        sample.t_k = best.top();
    }
    const double tk = sample.t_k;
    for (const auto& log : logs) {
        for (const Interval& iv : log) {
            if (iv.start >= tk) continue;
            sample.j_minus += std::min(iv.end, tk) - iv.start;
            if (iv.end > tk) {
                if (!(iv.end <= cap)) {
                    sample.censored = true;
                } else {
                    sample.j_plus += iv.end - tk;
                }
            } else if (!iv.success) {
                ++sample.interruptions;
            }
        }
    }
    sample.j_plus += sample.j_minus;
    return sample;
}

template <class F>
void parallel_for(std::size_t count, unsigned workers, F body) {
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(count, 1)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < count; i += workers) body(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

/// Mean/CI over uncensored samples; antithetic pairs are averaged first.
SimEstimate estimate(const std::vector<RaceSample>& samples, double RaceSample::*field, bool paired) {
    std::vector<double> values;
    values.reserve(samples.size());
    if (paired) {
        for (std::size_t i = 0; i + 1 < samples.size(); i += 2) {
            if (samples[i].censored || samples[i + 1].censored) continue;
            values.push_back(0.5 * (samples[i].*field + samples[i + 1].*field));
        }
    } else {
        for (const RaceSample& s : samples)
            if (!s.censored) values.push_back(s.*field);
    }
    return make_estimate(values);
}

template <class Sampler>
RaceResult drive_race(const Sampler& attempt, const RaceSpec& race, const SimConfig& config, double cap) {
    RaceResult result;
    result.race = race;
    result.max_virtual_time = cap;
    result.samples.resize(config.replications);
    const bool paired = config.antithetic && config.method == Method::EulerMaruyama;
    parallel_for(config.replications, config.workers, [&](std::size_t rep) {
        const std::uint64_t stream_rep = paired ? (rep & ~std::size_t{1}) : rep;
        const bool negate = paired && (rep & 1U);
        result.samples[rep] = run_race(attempt, race, config.seed, stream_rep, negate, cap);
    });
    for (const RaceSample& s : result.samples) result.censored += s.censored ? 1 : 0;
    result.censored_fraction = static_cast<double>(result.censored) / static_cast<double>(config.replications);
    result.valid = result.censored_fraction <= 1e-3;
    result.t_k = estimate(result.samples, &RaceSample::t_k, paired);
    result.j_minus = estimate(result.samples, &RaceSample::j_minus, paired);
    result.j_plus = estimate(result.samples, &RaceSample::j_plus, paired);
    return result;
}

}  // namespace

void validate(const SimConfig& config) {
    if (!(config.dt > 0.0) || !std::isfinite(config.dt))
        throw SearchError(ErrorKind::InvalidArgument, "dt must be > 0");
    if (config.replications < 1) throw SearchError(ErrorKind::InvalidArgument, "replications must be >= 1");
    if (config.max_virtual_time < 0.0 || std::isnan(config.max_virtual_time))
        throw SearchError(ErrorKind::InvalidArgument, "max_virtual_time must be > 0 (or 0 for the default)");
}

Stream::Stream(std::uint64_t seed, std::uint64_t replication, std::uint64_t searcher, bool negate_normals)
    : engine_(splitmix64(splitmix64(splitmix64(seed) ^ replication) ^ searcher)), negate_(negate_normals) {}

double sample_first_passage(double b, double c, double distance, Stream& s) {
    if (distance <= 0.0) return 0.0;
    const double shape = distance * distance / c;
    if (b == 0.0) {
        // Levy law: D^2 / (c Z^2).
        const double z = s.normal();
        return shape / (z * z);
    }
    if (b > 0.0 && s.uniform() >= std::exp(-2.0 * b * distance / c)) return kInfinity;
    // Inverse Gaussian(mean D/|b|, shape D^2/c) via Michael-Schucany-Haas.
    const double mean = distance / std::fabs(b);
    const double z = s.normal();
    const double phi = mean * z * z / (2.0 * shape);
    const double x = mean / (1.0 + phi + std::sqrt(phi * (2.0 + phi)));
    return s.uniform() <= mean / (mean + x) ? x : mean * mean / x;
}

double default_time_cap(const SearchParams& params, int n_searchers) {
    try {
        const double mean = analytic::mean_time_fixed_point(params, n_searchers).mean_time;
        if (std::isfinite(mean) && mean > 0.0) return 1e3 * mean;
    } catch (const SearchError&) {
    }
    return 1e6;
}

double default_time_cap(const SegmentProfile& profile) {
    try {
        const double mean = segments::mean_time_segmented(profile);
        if (std::isfinite(mean) && mean > 0.0) return 1e3 * mean;
    } catch (const SearchError&) {
    }
    return 1e6;
}

SearcherSample simulate_searcher(const SearchParams& params, const SimConfig& config, Stream& stream) {
    const double cap = config.max_virtual_time > 0.0 ? config.max_virtual_time : default_time_cap(params, 1);
    Trace trace;
    if (config.method == Method::Exact) {
        trace = run_searcher(ExactAttempt(params), stream, cap, cap, nullptr);
    } else {
        const SegmentProfile profile = homogeneous_profile(params);
        trace = run_searcher(EulerAttempt(profile, config.dt), stream, cap, cap, nullptr);
    }
    SearcherSample out;
    out.time = trace.time;
    out.energy = trace.energy;
    out.interruptions = trace.interruptions;
    out.censored = !trace.success || trace.time > cap;
    return out;
}

RaceResult simulate_race(const SearchParams& raw_params, const RaceSpec& raw_race, const SimConfig& config) {
    const SearchParams params = validate(raw_params);
    const RaceSpec race = validate(raw_race);
    validate(config);
    if (!(params.diff_c > 0.0)) throw SearchError(ErrorKind::InvalidArgument, "simulation requires c > 0");
    const double cap =
        config.max_virtual_time > 0.0 ? config.max_virtual_time : default_time_cap(params, race.n_searchers);
    if (config.method == Method::Exact) return drive_race(ExactAttempt(params), race, config, cap);
    const SegmentProfile profile = homogeneous_profile(params);
    return drive_race(EulerAttempt(profile, config.dt), race, config, cap);
}

RaceResult simulate_segmented_race(const SegmentProfile& profile, const RaceSpec& raw_race, const SimConfig& config) {
    validate(profile);
    const RaceSpec race = validate(raw_race);
    validate(config);
    const double cap = config.max_virtual_time > 0.0 ? config.max_virtual_time : default_time_cap(profile);
    SimConfig euler = config;
    euler.method = Method::EulerMaruyama;
    return drive_race(EulerAttempt(profile, config.dt), race, euler, cap);
}

SegmentedEstimate simulate_segmented(const SegmentProfile& profile, const SimConfig& config) {
    const RaceResult race = simulate_segmented_race(profile, RaceSpec{}, config);
    SegmentedEstimate out;
    out.time = race.t_k;
    out.energy = race.j_minus;
    out.censored = race.censored;
    out.censored_fraction = race.censored_fraction;
    out.valid = race.valid;
    return out;
}

SimEstimate simulate_attempt_success(const SegmentProfile& profile, const SimConfig& config) {
    validate(profile);
    validate(config);
    const double cap = config.max_virtual_time > 0.0 ? config.max_virtual_time : 1e6;
    const EulerAttempt attempt(profile, config.dt);
    std::vector<double> hits(config.replications);
    parallel_for(config.replications, config.workers, [&](std::size_t rep) {
        Stream s(config.seed, rep, 0);
        hits[rep] = attempt(s, cap).success ? 1.0 : 0.0;
    });
    return make_estimate(hits);
}

std::vector<double> empirical_cdf(std::span<const double> samples, std::span<const double> grid) {
    if (samples.empty()) throw SearchError(ErrorKind::InvalidArgument, "empirical CDF needs at least one sample");
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> out;
    out.reserve(grid.size());
    const double n = static_cast<double>(sorted.size());
    for (double t : grid) {
        const auto count = std::upper_bound(sorted.begin(), sorted.end(), t) - sorted.begin();
        out.push_back(static_cast<double>(count) / n);
    }
    return out;
}

std::vector<double> success_times(const RaceResult& result) {
    std::vector<double> out;
    out.reserve(result.samples.size());
    for (const RaceSample& s : result.samples)
        if (!s.censored) out.push_back(s.t_k);
    return out;
}

}  // namespace diffsearch::sim
