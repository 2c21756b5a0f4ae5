#pragma once
// Single-searcher search-time distribution built from the attempt /
// interruption renewal cycle, and the k-of-N order statistics derived from it.

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "diffsearch/laplace.hpp"
#include "diffsearch/model.hpp"

namespace diffsearch::fpt {

/// E[exp(-s tau)] for the first passage tau of the free diffusion from D to 0.
/// Defective (value at 0 is exp(-2bD/c)) when b > 0.
std::complex<double> pure_fpt_lt(const SearchParams& params, std::complex<double> s);

/// First-passage CDF and density of the free diffusion (inverse Gaussian law).
double pure_fpt_cdf(const SearchParams& params, double t);
double pure_fpt_pdf(const SearchParams& params, double t);

/// Probability that one attempt reaches the object before it is interrupted.
double attempt_success_probability(const SearchParams& params);

/// Laplace transform of the single-searcher search time T. Each attempt is
/// interrupted at rate lambda + r; a time-out costs Exp(mu) before the next
/// launch, a loss costs Exp(r) (detection) then Exp(mu).
std::complex<double> search_time_lt(const SearchParams& params, std::complex<double> s);

struct InversionOptions {
    laplace::EulerOptions euler;
    laplace::TalbotOptions talbot;
    double tolerance = 1e-4;  ///< allowed excursion outside [0,1] / non-monotonicity
};

struct FptResult {
    std::vector<double> grid;
    std::vector<double> G_values;
    std::vector<double> g_values;
    double q = 1.0;
    bool used_fallback = false;  ///< Talbot contour replaced the Euler series
};

/// G and g on a grid of non-negative, strictly increasing times.
FptResult cdf_G(const SearchParams& params, std::span<const double> grid, const InversionOptions& options = {});

/// Single-point evaluations (clamped to [0,1] and [0,inf)).
double cdf_at(const SearchParams& params, double t, const InversionOptions& options = {});
double density_at(const SearchParams& params, double t, const InversionOptions& options = {});

/// inf{t : G(t) >= p}, by bisection with absolute tolerance 1e-6 E[T].
double quantile(const SearchParams& params, double p, const InversionOptions& options = {});

/// Pr[at least k of N independent searchers succeed], given G(t) of one searcher.
double order_statistic_cdf_from_probability(double g_of_t, int k, int n);
double order_statistic_cdf(const SearchParams& params, int k, int n, double t);

struct CltQuantile {
    double mean = 0.0;
    double variance = 0.0;
};

/// Normal approximation of the sample quantile T_{ceil(pN),N}.
CltQuantile quantile_clt(const SearchParams& params, double p, int n);

/// ceil(k / G(B)): searchers needed so that k succeed within B, for large N.
int searchers_needed_from_probability(double g_of_b, int k);
int searchers_needed(const SearchParams& params, double budget_B, int k);

/// Smallest N with Pr[T_{k,N} <= B] >= target (0.5 matches the CLT median).
int searchers_needed_exact(const SearchParams& params, double budget_B, int k, double target = 0.5);

struct SearchersRow {
    double budget_B = 0.0;
    int k = 0;
    int n_exact = 0;
    int n_asymptotic = 0;
};

std::vector<SearchersRow> searchers_table(const SearchParams& params, std::span<const double> budgets, int k);

/// Three routes to the N = 1 mean search time: the closed form, the derivative
/// of the transform at 0, and the integral of 1 - G.
struct RenewalConsistency {
    double closed_form = 0.0;
    double transform_mean = 0.0;
    double cdf_mean = 0.0;
    double transform_rel_diff = 0.0;
    double cdf_rel_diff = 0.0;
    std::string diagnostic;  ///< empty when both differences are within tolerance
};

RenewalConsistency renewal_mean_consistency(const SearchParams& params, double tolerance = 0.01);

}  // namespace diffsearch::fpt
