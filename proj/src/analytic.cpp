#include "diffsearch/analytic.hpp"

#include <cmath>
#include <string>

namespace diffsearch::analytic {

namespace {

void require_diffusive(const SearchParams& p) {
    if (!(p.diff_c > 0.0))
        throw SearchError(ErrorKind::InvalidArgument, "stochastic formula requires c > 0");
}

void require_searchers(int n) {
    if (n < 1) throw SearchError(ErrorKind::InvalidRace, "N must be >= 1");
}

double checked_expm1(double exponent) {
    if (exponent > kMaxExponent)
        throw SearchError(ErrorKind::Overflow, "exponent " + std::to_string(exponent) + " exceeds representable range");
    return std::expm1(exponent);
}

}  // namespace

double success_exponent(const SearchParams& p, double a) {
    const double theta = p.curtailment() + a;
    const double b = p.drift_b;
    if (p.distance_D == 0.0) return 0.0;
    if (p.diff_c == 0.0) return b < 0.0 ? p.distance_D * theta / -b : kInfinity;
    const double root = std::hypot(b, std::sqrt(2.0 * p.diff_c * theta));
    if (b < 0.0) return 2.0 * p.distance_D * theta / (root - b);
    return p.distance_D / p.diff_c * (b + root);
}

double mean_time(const SearchParams& p, int n_searchers, double a) {
    require_diffusive(p);
    require_searchers(n_searchers);
    if (p.distance_D == 0.0) return 0.0;
    const double theta = p.curtailment() + a;
    if (!(theta > 0.0))
        throw SearchError(ErrorKind::DegenerateCurtailment, "lambda + r + a must be > 0");
    const double growth = checked_expm1(success_exponent(p, a));
    // lambda > 0 with r + a = 0: a lost searcher is never replaced.
    if (p.timeout_r + a == 0.0) return kInfinity;
    const double mu = p.relaunch_mu, r = p.timeout_r;
    return (mu + r + a) / (n_searchers * (mu + a) * (r + a)) * growth;
}

double mean_energy_first_success(const SearchParams& p, int n_searchers, double a) {
    require_diffusive(p);
    require_searchers(n_searchers);
    if (p.distance_D == 0.0) return 0.0;
    const double theta = p.curtailment() + a;
    if (!(theta > 0.0))
        throw SearchError(ErrorKind::DegenerateCurtailment, "lambda + r + a must be > 0");
    return checked_expm1(success_exponent(p, a)) / theta;
}

RaceFixedPoint mean_time_fixed_point(const SearchParams& p, int n_searchers, const FixedPointOptions& opt) {
    require_diffusive(p);
    require_searchers(n_searchers);
    RaceFixedPoint out;
    if (n_searchers == 1) {
        out.mean_time = mean_time(p, 1, 0.0);
        return out;
    }
    if (p.distance_D == 0.0) {
        // E[T] = 0 for every a, so the closure gives a = (N-1)/N.
        out.attraction_a = (n_searchers - 1.0) / n_searchers;
        return out;
    }

    const double n = n_searchers;
    const double a_max = (n - 1.0) / n;
    auto target = [&](double a) {
        const double t = mean_time(p, n_searchers, a);
        return std::isinf(t) ? 0.0 : a_max / (1.0 + t);
    };

    double a = 0.0;
    if (p.curtailment() > 0.0) {
        for (int it = 1; it <= opt.max_iter; ++it) {
            const double next = (1.0 - opt.damping) * a + opt.damping * target(a);
            a = next;
            const double residual = std::fabs(a - target(a));
            if (residual <= opt.tol * a) {
                out.attraction_a = a;
                out.mean_time = mean_time(p, n_searchers, a);
                out.iterations = it;
                out.residual = residual;
                return out;
            }
        }
    }

    // Bisection on f(a) = a - target(a): f < 0 near 0, f > 0 at a_max.
    // Overflow of E[T] near a_max means target -> 0, so f > 0 there as well.
    auto f = [&](double x) {
        try {
            return x - target(x);
        } catch (const SearchError& e) {
            if (e.kind() == ErrorKind::Overflow) return x;
            throw;
        }
    };
    double lo = p.curtailment() > 0.0 ? 0.0 : a_max * 1e-12;
    double hi = a_max;
    if (f(lo) >= 0.0)
        throw SearchError(ErrorKind::DegenerateCurtailment, "no positive attraction rate closes the race");
    int it = 0;
    for (; it < 400 && hi - lo > opt.tol * hi * 1e-2; ++it) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) < 0.0 ? lo : hi) = mid;
    }
    a = 0.5 * (lo + hi);
    out.attraction_a = a;
    out.mean_time = mean_time(p, n_searchers, a);
    out.iterations = opt.max_iter + it;
    out.residual = std::fabs(a - target(a));
    if (out.residual > opt.tol * a)
        throw SearchError(ErrorKind::NoConvergence,
                          "after " + std::to_string(out.iterations) + " iterations a=" + std::to_string(a) +
                              " residual=" + std::to_string(out.residual));
    return out;
}

Finiteness classify_finiteness(const SearchParams& p, int n_searchers) {
    require_searchers(n_searchers);
    if (p.diff_c == 0.0) {
        if (p.drift_b < 0.0) return {Verdict::Finite, FinitenessReason::DeterministicTowardObject};
        return {Verdict::Infinite, FinitenessReason::DeterministicAwayOrZeroDrift};
    }
    if (p.curtailment() > 0.0) return {Verdict::Finite, FinitenessReason::RandomisedWithCurtailment};
    if (n_searchers > 1) {
        // lambda = r = 0: only the attraction of the other searchers curtails.
        try {
            const auto fp = mean_time_fixed_point(p, n_searchers);
            if (fp.attraction_a > 0.0) return {Verdict::Finite, FinitenessReason::RandomisedWithCurtailment};
        } catch (const SearchError&) {
        }
    }
    return {p.drift_b < 0.0 ? Verdict::Finite : Verdict::Infinite, FinitenessReason::NoCurtailment};
}

double deterministic_limit_mean_time(const SearchParams& p) {
    if (p.distance_D == 0.0) return 0.0;
    if (p.drift_b >= 0.0) return kInfinity;
    const double speed = -p.drift_b;
    const double mu = p.relaunch_mu, r = p.timeout_r;
    if (r == 0.0) return p.loss_lambda == 0.0 ? p.distance_D / speed : kInfinity;
    const double exponent = p.distance_D * p.curtailment() / speed;
    return (mu + r) / (mu * r) * checked_expm1(exponent);
}

double rest_state_probability(double mean_time) {
    if (!(mean_time >= 0.0)) throw SearchError(ErrorKind::InvalidArgument, "mean_time must be >= 0");
    return 1.0 / (1.0 + mean_time);
}

}  // namespace diffsearch::analytic
