#include "diffsearch/optimize.hpp"

#include <algorithm>
#include <cmath>

#include "diffsearch/analytic.hpp"

namespace diffsearch::optimize {

std::string_view to_string(Objective objective) noexcept {
    switch (objective) {
        case Objective::MeanTime: return "mean_time";
        case Objective::MeanEnergyMinus: return "mean_energy_minus";
        case Objective::MeanEnergyPlus: return "mean_energy_plus";
    }
    return "unknown";
}

std::vector<TradeoffPoint> tradeoff_locus(const SearchParams& base, int n_searchers, const std::vector<double>& r_grid) {
    for (std::size_t i = 0; i < r_grid.size(); ++i)
        if (!(r_grid[i] > 0.0) || (i > 0 && !(r_grid[i] > r_grid[i - 1])))
            throw SearchError(ErrorKind::InvalidArgument, "r_grid must be positive and increasing");
    std::vector<TradeoffPoint> out;
    out.reserve(r_grid.size());
    for (double r : r_grid) {
        SearchParams p = base;
        p.timeout_r = r;
        TradeoffPoint point;
        point.timeout_mean = 1.0 / r;
        try {
            const RaceFixedPoint fp = analytic::mean_time_fixed_point(p, n_searchers);
            point.mean_time = fp.mean_time;
            point.mean_energy_minus = analytic::mean_energy_first_success(p, n_searchers, fp.attraction_a);
        } catch (const SearchError& e) {
            point.mean_time = point.mean_energy_minus = kInfinity;
            point.status = std::string(to_string(e.kind()));
        }
        out.push_back(point);
    }
    return out;
}

double objective_value(const SearchParams& base, int n_searchers, Objective objective, double r,
                       const OptimizeOptions& options) {
    SearchParams p = base;
    p.timeout_r = r;
    const bool analytic_path = options.k_required == 1 && objective != Objective::MeanEnergyPlus;
    try {
        if (analytic_path) {
            const RaceFixedPoint fp = analytic::mean_time_fixed_point(p, n_searchers);
            if (objective == Objective::MeanTime) return fp.mean_time;
            return analytic::mean_energy_first_success(p, n_searchers, fp.attraction_a);
        }
        const RaceSpec race{n_searchers, options.k_required, Stopping::StopAll};
        const sim::RaceResult result = sim::simulate_race(p, race, options.sim);
        if (objective == Objective::MeanTime) return result.t_k.mean;
        if (objective == Objective::MeanEnergyMinus) return result.j_minus.mean;
        return result.j_plus.mean;
    } catch (const SearchError& e) {
        if (e.kind() == ErrorKind::Overflow) return kInfinity;
        throw;
    }
}

OptimumResult optimal_timeout(const SearchParams& base, int n_searchers, Objective objective, double r_low,
                              double r_high, const OptimizeOptions& options) {
    if (!(r_low > 0.0 && r_high > r_low))
        throw SearchError(ErrorKind::InvalidArgument, "time-out bracket must satisfy 0 < r_low < r_high");
    OptimumResult out;
    auto f = [&](double x) {
        ++out.evaluations;
        return objective_value(base, n_searchers, objective, std::exp(-x), options);
    };

    // x = log(1/r), increasing with the mean time-out.
    double lo = -std::log(r_high), hi = -std::log(r_low);
    const int n = std::max(options.prescan_points, 3);
    std::vector<double> xs(n), fs(n);
    for (int i = 0; i < n; ++i) {
        xs[i] = lo + (hi - lo) * i / (n - 1);
        fs[i] = f(xs[i]);
    }

    const auto [min_it, max_it] = std::minmax_element(fs.begin(), fs.end());
    if (*min_it == *max_it) {
        out.degenerate_flat = true;
        out.r_star = 0.5 * (r_low + r_high);
        out.value = *min_it;
        return out;
    }
    const int best = static_cast<int>(min_it - fs.begin());
    if (best == 0 || best == n - 1) {
        out.at_boundary = true;
        out.r_star = std::exp(-xs[best]);
        out.value = fs[best];
        return out;
    }
    int local_minima = 0;
    for (int i = 1; i + 1 < n; ++i)
        if (fs[i] < fs[i - 1] && fs[i] <= fs[i + 1]) ++local_minima;

    double a = xs[best - 1], b = xs[best + 1];
    double best_x = xs[best], best_f = fs[best];
    if (local_minima > 1) {
        // Not unimodal: refine the grid around the global minimum instead.
        out.refined_by_grid = true;
        while (b - a > options.log_tolerance) {
            const int m = 9;
            double next_best = best_x;
            for (int i = 0; i < m; ++i) {
                const double x = a + (b - a) * i / (m - 1);
                const double v = f(x);
                if (v < best_f) {
                    best_f = v;
                    next_best = x;
                }
            }
            const double width = (b - a) / (m - 1);
            best_x = next_best;
            a = best_x - width;
            b = best_x + width;
        }
    } else {
        const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
        double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
        double fc = f(c), fd = f(d);
        while (b - a > options.log_tolerance) {
            if (fc <= fd) {
                b = d;
                d = c;
                fd = fc;
                c = b - inv_phi * (b - a);
                fc = f(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + inv_phi * (b - a);
                fd = f(d);
            }
        }
        const double x = fc <= fd ? c : d;
        const double v = std::min(fc, fd);
        if (v < best_f) {
            best_f = v;
            best_x = x;
        }
    }
    out.r_star = std::exp(-best_x);
    out.value = best_f;
    return out;
}

std::vector<MinCurveRow> min_curves_vs_N(const SearchParams& base, int k, const std::vector<int>& n_list, double r_low,
                                         double r_high, OptimizeOptions options) {
    if (n_list.empty()) throw SearchError(ErrorKind::InvalidArgument, "N list is empty");
    if (k < 1 || k > *std::min_element(n_list.begin(), n_list.end()))
        throw SearchError(ErrorKind::InvalidRace, "k must satisfy 1 <= k <= min(N list)");
    options.k_required = k;
    std::vector<MinCurveRow> rows;
    for (int n : n_list) {
        MinCurveRow row;
        row.n_searchers = n;
        row.time = optimal_timeout(base, n, Objective::MeanTime, r_low, r_high, options);
        row.energy_minus = optimal_timeout(base, n, Objective::MeanEnergyMinus, r_low, r_high, options);
        row.energy_plus = optimal_timeout(base, n, Objective::MeanEnergyPlus, r_low, r_high, options);
        rows.push_back(row);
    }
    return rows;
}

std::vector<EnergyCurvePoint> energy_vs_timeout(const SearchParams& base, int k, const std::vector<int>& n_list,
                                                const std::vector<double>& timeout_means, const sim::SimConfig& config) {
    std::vector<EnergyCurvePoint> out;
    for (int n : n_list) {
        for (double mean : timeout_means) {
            if (!(mean > 0.0)) throw SearchError(ErrorKind::InvalidArgument, "time-out means must be > 0");
            SearchParams p = base;
            p.timeout_r = 1.0 / mean;
            const sim::RaceResult result = sim::simulate_race(p, RaceSpec{n, k, Stopping::StopAll}, config);
            out.push_back({n, mean, result.j_minus, result.j_plus, result.censored_fraction});
        }
    }
    return out;
}

}  // namespace diffsearch::optimize
