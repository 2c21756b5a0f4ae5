#include "diffsearch/segments.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace diffsearch::segments {

namespace {

// Equations solved alongside the homogeneous success probability u:
//   duration: forcing 1,      particular solution 1/theta
//   loss:     forcing lambda, particular solution lambda/theta
enum Equation { kDuration = 0, kLoss = 1, kEquations = 2 };

struct Piece {
    double length;  // +inf for the tail
    double b, c, lambda, theta;
    double k_plus, k_minus;  // roots of (c/2) k^2 + b k - theta = 0
    std::array<double, kEquations> particular{};
};

struct Roots {
    double plus, minus;
};

Roots characteristic_roots(double b, double c, double theta) {
    // hypot keeps b^2 from overflowing for the steep drifts of a phase sweep.
    const double disc = std::hypot(b, std::sqrt(2.0 * c * theta));
    if (b < 0.0) {
        const double plus = (disc - b) / c;
        return {plus, theta > 0.0 ? -2.0 * theta / (c * plus) : 0.0};
    }
    if (b > 0.0) {
        const double minus = -(b + disc) / c;
        return {theta > 0.0 ? -2.0 * theta / (c * minus) : 0.0, minus};
    }
    return {disc / c, -disc / c};
}

struct Pieces {
    std::vector<Piece> list;
    std::size_t to_distance = 0;  // pieces covering [0, D]
};

Pieces build_pieces(const SegmentProfile& profile, bool with_moments) {
    const double r = profile.timeout_r;
    const double D = profile.distance_D;
    Pieces out;
    std::vector<Piece>& pieces = out.list;
    double left = 0.0;
    auto add = [&](double length, const Segment& seg) {
        Piece p{length, seg.drift_b, seg.diff_c, seg.loss_lambda, seg.loss_lambda + r, 0.0, 0.0};
        const Roots roots = characteristic_roots(p.b, p.c, p.theta);
        p.k_plus = roots.plus;
        p.k_minus = roots.minus;
        if (with_moments) {
            if (!(p.theta > 0.0))
                throw SearchError(ErrorKind::DegenerateCurtailment, "attempt moments need lambda_k + r > 0 everywhere");
            p.particular[kDuration] = 1.0 / p.theta;
            p.particular[kLoss] = p.lambda / p.theta;
        }
        pieces.push_back(p);
    };
    for (const Segment& seg : profile.segments) {
        const double right = left + seg.size;
        // D becomes an interface so that y(D) is read off at a piece boundary.
        if (D > left && D < right) {
            add(D - left, seg);
            out.to_distance = pieces.size();
            add(right - D, seg);
        } else {
            add(seg.size, seg);
            if (right <= D) out.to_distance = pieces.size();
        }
        left = right;
    }
    return out;
}

struct Interface {
    double w;
    std::array<double, kEquations> v;
};

struct Transfer {
    double log_ratio;  // log(u(left) / u(right))
    double growth;     // exp(k_minus * S) <= 1
    double p1;
    std::array<double, kEquations> p0;
};

struct Solution {
    double log_u = 0.0;
    std::array<double, kEquations> y{};
};

Solution solve(const SegmentProfile& profile, bool with_moments) {
    validate(profile);
    Solution out;
    if (profile.distance_D == 0.0) return out;
    const Pieces built = build_pieces(profile, with_moments);
    const std::vector<Piece>& pieces = built.list;
    const std::size_t n = pieces.size();

    // Backward sweep: only the decaying mode survives in the tail.
    const Piece& tail = pieces.back();
    Interface right{tail.k_minus, {}};
    for (int e = 0; e < kEquations; ++e) right.v[e] = -tail.k_minus * tail.particular[e];

    std::vector<Transfer> transfers(n - 1);
    for (std::size_t i = n - 1; i-- > 0;) {
        const Piece& p = pieces[i];
        const double S = p.length;
        const double delta = p.k_plus - p.k_minus;
        Transfer& tr = transfers[i];
        Interface left{};
        if (delta * S < 1e-12) {
            // b = 0 and theta = 0: solutions are linear in z (only u occurs here).
            const double factor = 1.0 - right.w * S;
            if (!(factor > 0.0) || !std::isfinite(factor))
                throw SearchError(ErrorKind::IllConditioned, "non-positive ratio in a linear segment");
            tr = {std::log(factor), 1.0, factor, {}};
            left.w = right.w / factor;
        } else {
            const double decay = std::exp(-delta * S);
            const double a1 = (right.w - p.k_minus) / delta;
            const double b1 = (p.k_plus - right.w) / delta;
            const double p1 = a1 * decay + b1;
            const double q1 = a1 * p.k_plus * decay + b1 * p.k_minus;
            if (!(p1 > 0.0) || !std::isfinite(p1))
                throw SearchError(ErrorKind::IllConditioned,
                                  "transfer step " + std::to_string(i) + " lost positivity; check segment parameters");
            tr.log_ratio = -p.k_minus * S + std::log(p1);
            tr.growth = std::exp(p.k_minus * S);
            tr.p1 = p1;
            left.w = q1 / p1;
            const double e_plus = std::exp(-p.k_plus * S);
            for (int e = 0; e < kEquations; ++e) {
                const double yp = p.particular[e];
                const double a0 = (right.v[e] + p.k_minus * yp) / delta;
                const double b0 = (-p.k_plus * yp - right.v[e]) / delta;
                tr.p0[e] = a0 * decay + b0;
                left.v[e] = -left.w * yp + e_plus * delta * (a0 * b1 - a1 * b0) / p1;
            }
        }
        right = left;
    }

    // Forward sweep from the object out to D.
    for (std::size_t i = 0; i < built.to_distance; ++i) {
        const Piece& p = pieces[i];
        const Transfer& tr = transfers[i];
        out.log_u -= tr.log_ratio;
        for (int e = 0; e < kEquations; ++e)
            out.y[e] = (out.y[e] - p.particular[e]) * tr.growth / tr.p1 - tr.p0[e] / tr.p1;
    }
    return out;
}

}  // namespace

double log_killed_success_probability(const SegmentProfile& profile) { return solve(profile, false).log_u; }

double killed_success_probability(const SegmentProfile& profile) {
    return std::exp(log_killed_success_probability(profile));
}

AttemptMoments attempt_moments(const SegmentProfile& profile) {
    const Solution s = solve(profile, true);
    AttemptMoments out;
    out.log_success = s.log_u;
    out.success = std::exp(s.log_u);
    out.mean_duration = s.y[kDuration];
    out.loss_probability = s.y[kLoss];
    return out;
}

double mean_time_segmented(const SegmentProfile& profile) {
    validate(profile);
    if (profile.distance_D == 0.0) return 0.0;
    const double r = profile.timeout_r;
    if (r == 0.0) {
        const bool any_loss = std::any_of(profile.segments.begin(), profile.segments.end(),
                                          [](const Segment& s) { return s.loss_lambda > 0.0; });
        if (any_loss) return kInfinity;
        throw SearchError(ErrorKind::DegenerateCurtailment, "no loss and no time-out: attempts never end");
    }
    const AttemptMoments m = attempt_moments(profile);
    if (m.log_success < -700.0) return kInfinity;
    // Attempts are i.i.d.; each failure costs 1/mu, plus 1/r to detect a loss.
    const double failure = 1.0 - m.success;
    return (m.mean_duration + failure / profile.relaunch_mu + m.loss_probability / r) / m.success;
}

std::vector<double> success_profile(const SegmentProfile& profile, const std::vector<double>& distances) {
    std::vector<double> out;
    out.reserve(distances.size());
    SegmentProfile at = profile;
    for (double z : distances) {
        at.distance_D = z;
        out.push_back(killed_success_probability(at));
    }
    return out;
}

SegmentProfile phase_profile(const PhaseSweepSpec& spec, double rho, double epsilon) {
    if (spec.m < 1) throw SearchError(ErrorKind::InvalidProfile, "m must be >= 1");
    if (!(rho > 0.0)) throw SearchError(ErrorKind::InvalidArgument, "rho must be > 0");
    if (!(epsilon >= 0.0)) throw SearchError(ErrorKind::InvalidArgument, "epsilon must be >= 0");
    SegmentProfile profile;
    for (int k = 1; k <= spec.m; ++k) {
        Segment seg;
        seg.size = k < spec.m ? spec.segment_size : kInfinity;
        seg.loss_lambda = std::exp(1.0 / (k * rho));
        seg.drift_b = -std::exp((1.0 + epsilon) / (k * rho));
        seg.diff_c = spec.diff_c;
        profile.segments.push_back(seg);
    }
    profile.timeout_r = spec.timeout_r;
    profile.relaunch_mu = spec.relaunch_mu;
    profile.distance_D = spec.distance_D;
    return profile;
}

std::vector<PhasePoint> phase_sweep(const PhaseSweepSpec& spec) {
    std::vector<PhasePoint> out;
    out.reserve(spec.rho_grid.size() * spec.epsilon_list.size());
    for (double eps : spec.epsilon_list) {
        for (double rho : spec.rho_grid) {
            PhasePoint point{rho, eps, kInfinity, "ok"};
            try {
                point.mean_time = mean_time_segmented(phase_profile(spec, rho, eps));
                if (std::isinf(point.mean_time)) point.status = "Infinite";
            } catch (const SearchError& e) {
                point.status = std::string(to_string(e.kind()));
            }
            out.push_back(point);
        }
    }
    return out;
}

}  // namespace diffsearch::segments
