#pragma once
// Closed-form mean search time and energy for N homogeneous searchers.

#include "diffsearch/model.hpp"

namespace diffsearch::analytic {

enum class Verdict { Finite, Infinite };
enum class FinitenessReason {
    DeterministicTowardObject,
    DeterministicAwayOrZeroDrift,
    RandomisedWithCurtailment,
    NoCurtailment,
};

struct Finiteness {
    Verdict verdict = Verdict::Finite;
    FinitenessReason reason = FinitenessReason::RandomisedWithCurtailment;
};

struct FixedPointOptions {
    double tol = 1e-10;  ///< relative tolerance on a
    int max_iter = 10'000;
    double damping = 0.5;
};

/// Largest exponent accepted before reporting Overflow instead of +inf.
inline constexpr double kMaxExponent = 709.0;

/// (D/c)(b + sqrt(b^2 + 2c(lambda+r+a))), evaluated without cancellation
/// when b < 0 so that the c -> 0 limit is also representable.
double success_exponent(const SearchParams& params, double a);

/// Mean time until the first of N searchers finds the object, for a given
/// attraction rate a. Pure; no fixed-point iteration.
double mean_time(const SearchParams& params, int n_searchers, double a);

/// Mean energy spent by all searchers until the first success.
double mean_energy_first_success(const SearchParams& params, int n_searchers, double a);

/// Solves a = (N-1)/(N(1+E[T](a))) by damped iteration, falling back to
/// bisection on the residual when the iteration stalls.
RaceFixedPoint mean_time_fixed_point(const SearchParams& params, int n_searchers,
                                     const FixedPointOptions& options = {});

Finiteness classify_finiteness(const SearchParams& params, int n_searchers);

/// c -> 0 limit of the N = 1 mean time; +inf when the object is never reached.
double deterministic_limit_mean_time(const SearchParams& params);

/// Long-run fraction of time the repeating race spends in its one-unit rest state.
double rest_state_probability(double mean_time);

}  // namespace diffsearch::analytic
