#pragma once
// Numerical inversion of Laplace transforms along the Bromwich line.

#include <complex>
#include <functional>

namespace diffsearch::laplace {

using Transform = std::function<std::complex<double>(std::complex<double>)>;

/// Fourier-series inversion with Euler summation of the alternating tail.
/// The discretisation error is about exp(-discretisation_a).
struct EulerOptions {
    int terms = 30;           ///< partial sums before averaging starts
    int euler_terms = 12;     ///< binomial averaging depth
    double discretisation_a = 18.4;
};

/// Fixed Talbot contour; used when the Euler series misbehaves.
struct TalbotOptions {
    int nodes = 24;
};

double invert_euler(const Transform& transform, double t, const EulerOptions& options = {});
double invert_talbot(const Transform& transform, double t, const TalbotOptions& options = {});

}  // namespace diffsearch::laplace
