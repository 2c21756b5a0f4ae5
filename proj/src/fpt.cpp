#include "diffsearch/fpt.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "diffsearch/analytic.hpp"

namespace diffsearch::fpt {

namespace {

using cd = std::complex<double>;

void require_diffusive(const SearchParams& p) {
    if (!(p.diff_c > 0.0)) throw SearchError(ErrorKind::InvalidArgument, "first-passage law requires c > 0");
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double log_normal_cdf(double x) {
    if (x > -20.0) return std::log(normal_cdf(x));
    // Mills-ratio expansion; erfc underflows long before this loses accuracy.
    const double inv2 = 1.0 / (x * x);
    const double series = 1.0 - inv2 + 3.0 * inv2 * inv2 - 15.0 * inv2 * inv2 * inv2;
    return -0.5 * x * x - std::log(-x) - 0.5 * std::log(2.0 * std::numbers::pi) + std::log(series);
}

double single_mean(const SearchParams& p) { return analytic::mean_time(p, 1, 0.0); }

}  // namespace

std::complex<double> pure_fpt_lt(const SearchParams& p, std::complex<double> s) {
    require_diffusive(p);
    if (p.distance_D == 0.0) return 1.0;
    const double b = p.drift_b;
    const cd root = std::sqrt(cd(b * b) + 2.0 * p.diff_c * s);
    // For b < 0 the two terms of b + root cancel; use the conjugate form.
    const cd exponent = b < 0.0 ? 2.0 * p.distance_D * s / (root - b) : p.distance_D / p.diff_c * (b + root);
    return std::exp(-exponent);
}

double pure_fpt_cdf(const SearchParams& p, double t) {
    require_diffusive(p);
    if (p.distance_D == 0.0) return 1.0;
    if (!(t > 0.0)) return 0.0;
    const double b = p.drift_b, D = p.distance_D;
    const double sd = std::sqrt(p.diff_c * t);
    const double direct = normal_cdf(-(D + b * t) / sd);
    const double reflected = std::exp(-2.0 * b * D / p.diff_c + log_normal_cdf((b * t - D) / sd));
    return std::min(1.0, direct + reflected);
}

double pure_fpt_pdf(const SearchParams& p, double t) {
    require_diffusive(p);
    if (!(t > 0.0) || p.distance_D == 0.0) return 0.0;
    const double D = p.distance_D, b = p.drift_b, c = p.diff_c;
    const double gap = D + b * t;
    return D / std::sqrt(2.0 * std::numbers::pi * c * t * t * t) * std::exp(-gap * gap / (2.0 * c * t));
}

double attempt_success_probability(const SearchParams& p) {
    return pure_fpt_lt(p, p.curtailment()).real();
}

std::complex<double> search_time_lt(const SearchParams& p, std::complex<double> s) {
    require_diffusive(p);
    if (p.distance_D == 0.0) return 1.0;
    const double theta = p.curtailment();
    if (theta == 0.0) return pure_fpt_lt(p, s);
    const double lambda = p.loss_lambda, r = p.timeout_r, mu = p.relaunch_mu;
    const cd success = pure_fpt_lt(p, s + theta);
    const cd interrupted = theta / (s + theta) * (1.0 - success);
    const cd relaunch = mu / (s + mu);
    const cd delay = (r / theta) * relaunch + (lambda / theta) * (r / (s + r)) * relaunch;
    return success / (1.0 - interrupted * delay);
}

namespace {

struct Inverter {
    const SearchParams& params;
    const InversionOptions& options;
    bool talbot = false;

    double invert(double t, bool cumulative) const {
        laplace::Transform f = [&](cd s) {
            const cd value = search_time_lt(params, s);
            return cumulative ? value / s : value;
        };
        return talbot ? laplace::invert_talbot(f, t, options.talbot) : laplace::invert_euler(f, t, options.euler);
    }

    double cdf(double t) const {
        if (params.distance_D == 0.0) return 1.0;
        if (t <= 0.0) return 0.0;
        return invert(t, true);
    }

    double pdf(double t) const {
        if (params.distance_D == 0.0 || t <= 0.0) return 0.0;
        return invert(t, false);
    }
};

bool well_behaved(std::span<const double> raw, double tol) {
    double running = 0.0;
    for (double v : raw) {
        if (!std::isfinite(v) || v < -tol || v > 1.0 + tol || v < running - tol) return false;
        running = std::max(running, v);
    }
    return true;
}

void require_curtailed(const SearchParams& p) {
    if (!(p.curtailment() > 0.0))
        throw SearchError(ErrorKind::DegenerateCurtailment, "search-time law needs lambda + r > 0");
}

}  // namespace

FptResult cdf_G(const SearchParams& p, std::span<const double> grid, const InversionOptions& options) {
    require_diffusive(p);
    require_curtailed(p);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] >= 0.0) || (i > 0 && !(grid[i] > grid[i - 1])))
            throw SearchError(ErrorKind::InvalidArgument, "grid must be non-negative and strictly increasing");
    }

    FptResult out;
    out.grid.assign(grid.begin(), grid.end());
    out.q = attempt_success_probability(p);

    Inverter inv{p, options};
    auto evaluate = [&]() {
        out.G_values.resize(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) out.G_values[i] = inv.cdf(grid[i]);
    };
    evaluate();
    if (!well_behaved(out.G_values, options.tolerance)) {
        inv.talbot = true;
        out.used_fallback = true;
        evaluate();
        if (!well_behaved(out.G_values, options.tolerance))
            throw SearchError(ErrorKind::InversionUnstable, "CDF inversion oscillates beyond tolerance");
    }

    double running = 0.0;
    for (double& v : out.G_values) {
        running = std::max(running, std::clamp(v, 0.0, 1.0));
        v = running;
    }
    out.g_values.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) out.g_values[i] = std::max(0.0, inv.pdf(grid[i]));
    return out;
}

double cdf_at(const SearchParams& p, double t, const InversionOptions& options) {
    require_diffusive(p);
    require_curtailed(p);
    Inverter inv{p, options};
    const double raw = inv.cdf(t);
    if (!std::isfinite(raw) || raw < -options.tolerance || raw > 1.0 + options.tolerance) {
        inv.talbot = true;
        const double retry = inv.cdf(t);
        if (!std::isfinite(retry) || retry < -options.tolerance || retry > 1.0 + options.tolerance)
            throw SearchError(ErrorKind::InversionUnstable, "CDF inversion out of range at t=" + std::to_string(t));
        return std::clamp(retry, 0.0, 1.0);
    }
    return std::clamp(raw, 0.0, 1.0);
}

double density_at(const SearchParams& p, double t, const InversionOptions& options) {
    require_diffusive(p);
    require_curtailed(p);
    const double raw = Inverter{p, options}.pdf(t);
    if (!std::isfinite(raw)) throw SearchError(ErrorKind::InversionUnstable, "density inversion is not finite");
    return std::max(0.0, raw);
}

double quantile(const SearchParams& p, double prob, const InversionOptions& options) {
    if (!(prob > 0.0 && prob < 1.0)) throw SearchError(ErrorKind::InvalidArgument, "p must lie in (0, 1)");
    require_diffusive(p);
    require_curtailed(p);
    if (p.distance_D == 0.0) return 0.0;
    const double mean = single_mean(p);
    const double tol = 1e-6 * mean;
    double lo = 0.0, hi = mean;
    for (int i = 0; cdf_at(p, hi, options) < prob; ++i) {
        if (i > 200) throw SearchError(ErrorKind::InversionUnstable, "quantile bracket did not close");
        lo = hi;
        hi *= 2.0;
    }
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        (cdf_at(p, mid, options) >= prob ? hi : lo) = mid;
    }
    return hi;
}

double order_statistic_cdf_from_probability(double g, int k, int n) {
    if (k < 1 || k > n) throw SearchError(ErrorKind::InvalidRace, "order statistic needs 1 <= k <= N");
    if (!(g > 0.0)) return 0.0;
    if (g >= 1.0) return 1.0;
    const double log_g = std::log(g), log_fail = std::log1p(-g);
    const double log_n_fact = std::lgamma(n + 1.0);
    double total = 0.0;
    for (int j = k; j <= n; ++j) {
        const double log_choose = log_n_fact - std::lgamma(j + 1.0) - std::lgamma(n - j + 1.0);
        total += std::exp(log_choose + j * log_g + (n - j) * log_fail);
    }
    return std::min(1.0, total);
}

double order_statistic_cdf(const SearchParams& p, int k, int n, double t) {
    return order_statistic_cdf_from_probability(cdf_at(p, t), k, n);
}

CltQuantile quantile_clt(const SearchParams& p, double prob, int n) {
    if (n < 1) throw SearchError(ErrorKind::InvalidRace, "N must be >= 1");
    const double t = quantile(p, prob);
    const double density = density_at(p, t);
    const double scale = single_mean(p);
    if (!(density * scale > 1e-12))
        throw SearchError(ErrorKind::DensityVanishes, "density at the quantile is below the numeric floor");
    return {t, prob * (1.0 - prob) / (n * density * density)};
}

int searchers_needed_from_probability(double g, int k) {
    if (k < 1) throw SearchError(ErrorKind::InvalidArgument, "k must be >= 1");
    if (!(g > 1e-12)) throw SearchError(ErrorKind::ObjectUnreachableByB, "G(B) is below the numeric floor");
    return static_cast<int>(std::ceil(k / std::min(g, 1.0)));
}

int searchers_needed(const SearchParams& p, double budget_B, int k) {
    if (!(budget_B > 0.0)) throw SearchError(ErrorKind::InvalidArgument, "B must be > 0");
    return searchers_needed_from_probability(cdf_at(p, budget_B), k);
}

int searchers_needed_exact(const SearchParams& p, double budget_B, int k, double target) {
    if (!(budget_B > 0.0)) throw SearchError(ErrorKind::InvalidArgument, "B must be > 0");
    const double g = cdf_at(p, budget_B);
    const int cap = 10 * searchers_needed_from_probability(g, k) + 100;
    for (int n = k; n <= cap; ++n)
        if (order_statistic_cdf_from_probability(g, k, n) >= target) return n;
    throw SearchError(ErrorKind::ObjectUnreachableByB, "no N up to " + std::to_string(cap) + " reaches the target");
}

std::vector<SearchersRow> searchers_table(const SearchParams& p, std::span<const double> budgets, int k) {
    std::vector<SearchersRow> rows;
    rows.reserve(budgets.size());
    for (double budget : budgets)
        rows.push_back({budget, k, searchers_needed_exact(p, budget, k), searchers_needed(p, budget, k)});
    return rows;
}

RenewalConsistency renewal_mean_consistency(const SearchParams& p, double tolerance) {
    require_diffusive(p);
    require_curtailed(p);
    RenewalConsistency out;
    out.closed_form = single_mean(p);
    if (p.distance_D == 0.0) return out;

    // Complex-step derivative: the transform is real-analytic around s = 0.
    const double h = 1e-20;
    out.transform_mean = -search_time_lt(p, {0.0, h}).imag() / h;

    // Integral of the survival function, Simpson's rule out to where it is negligible.
    double horizon = out.transform_mean;
    while (1.0 - cdf_at(p, horizon) > 1e-10 && horizon < 1e300) horizon *= 2.0;
    const int panels = 4000;
    const double step = horizon / panels;
    double sum = 0.0;
    for (int i = 0; i <= panels; ++i) {
        const double weight = (i == 0 || i == panels) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        sum += weight * (1.0 - cdf_at(p, i * step));
    }
    out.cdf_mean = sum * step / 3.0;

    out.transform_rel_diff = std::fabs(out.transform_mean - out.closed_form) / out.closed_form;
    out.cdf_rel_diff = std::fabs(out.cdf_mean - out.closed_form) / out.closed_form;
    if (out.transform_rel_diff > tolerance || out.cdf_rel_diff > tolerance) {
        out.diagnostic = "RenewalMeanMismatch: closed form " + std::to_string(out.closed_form) + ", transform " +
                         std::to_string(out.transform_mean) + ", cdf integral " + std::to_string(out.cdf_mean);
    }
    return out;
}

}  // namespace diffsearch::fpt
