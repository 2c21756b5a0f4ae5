#pragma once
// Time-out studies: time/energy trade-off loci, optimal time-outs and the
// minimum achievable time and energy as the number of searchers grows.

#include <string>
#include <vector>

#include "diffsearch/model.hpp"
#include "diffsearch/sim.hpp"

namespace diffsearch::optimize {

struct TradeoffPoint {
    double timeout_mean = 0.0;  ///< 1/r
    double mean_time = 0.0;
    double mean_energy_minus = 0.0;
    double mean_energy_plus = kInfinity;  ///< only filled by simulation-backed studies
    std::string status = "ok";
};

/// Analytic (E[T_{1,N}], E[J^-_{1,N}]) for every time-out rate in r_grid.
/// Points that overflow keep status "Overflow" instead of aborting the locus.
std::vector<TradeoffPoint> tradeoff_locus(const SearchParams& base, int n_searchers, const std::vector<double>& r_grid);

enum class Objective { MeanTime, MeanEnergyMinus, MeanEnergyPlus };

std::string_view to_string(Objective objective) noexcept;

struct OptimizeOptions {
    int k_required = 1;
    /// Used by simulation-backed objectives (k > 1 or MeanEnergyPlus). The
    /// seed is reused for every candidate r (common random numbers).
    sim::SimConfig sim{.replications = 4000};
    int prescan_points = 32;
    double log_tolerance = 1e-4;
};

/// The objective at a single time-out rate. Analytic for k = 1 time and J^-,
/// simulated otherwise.
double objective_value(const SearchParams& base, int n_searchers, Objective objective, double r,
                       const OptimizeOptions& options = {});

struct OptimumResult {
    double r_star = 0.0;
    double value = 0.0;
    bool degenerate_flat = false;  ///< objective constant (e.g. D = 0); r_star is the bracket midpoint
    bool at_boundary = false;      ///< NoMinimumInBracket: minimum sits on a bracket end
    bool refined_by_grid = false;  ///< several local minima found in the pre-scan
    int evaluations = 0;
};

/// Minimises the objective over r in [r_low, r_high] by golden-section
/// search on log(1/r), after a coarse pre-scan that picks the bracket.
OptimumResult optimal_timeout(const SearchParams& base, int n_searchers, Objective objective, double r_low,
                              double r_high, const OptimizeOptions& options = {});

struct MinCurveRow {
    int n_searchers = 0;
    OptimumResult time;
    OptimumResult energy_minus;
    OptimumResult energy_plus;
};

std::vector<MinCurveRow> min_curves_vs_N(const SearchParams& base, int k, const std::vector<int>& n_list,
                                         double r_low, double r_high, OptimizeOptions options = {});

struct EnergyCurvePoint {
    int n_searchers = 0;
    double timeout_mean = 0.0;
    SimEstimate energy_minus;
    SimEstimate energy_plus;
    double censored_fraction = 0.0;
};

/// Simulated J^- and J^+ against the mean time-out for each N.
std::vector<EnergyCurvePoint> energy_vs_timeout(const SearchParams& base, int k, const std::vector<int>& n_list,
                                                const std::vector<double>& timeout_means, const sim::SimConfig& config);

}  // namespace diffsearch::optimize
