#include "diffsearch/laplace.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "diffsearch/error.hpp"

namespace diffsearch::laplace {

double invert_euler(const Transform& transform, double t, const EulerOptions& opt) {
    if (!(t > 0.0)) throw SearchError(ErrorKind::InvalidArgument, "inversion time must be > 0");
    const double a = opt.discretisation_a;
    const double scale = std::exp(0.5 * a) / t;
    const int total = opt.terms + opt.euler_terms;

    // partial[n] is the trapezoid sum truncated after n alternating terms.
    std::vector<double> partial(total + 1);
    double sum = 0.5 * transform({0.5 * a / t, 0.0}).real();
    partial[0] = sum;
    for (int k = 1; k <= total; ++k) {
        const std::complex<double> s(0.5 * a / t, k * std::numbers::pi / t);
        const double term = transform(s).real();
        sum += (k % 2 == 0 ? term : -term);
        partial[k] = sum;
    }

    // Binomial average of s_n .. s_{n+m}.
    double averaged = 0.0;
    double weight = std::ldexp(1.0, -opt.euler_terms);
    for (int j = 0; j <= opt.euler_terms; ++j) {
        averaged += weight * partial[opt.terms + j];
        weight *= static_cast<double>(opt.euler_terms - j) / (j + 1);
    }
    return scale * averaged;
}

double invert_talbot(const Transform& transform, double t, const TalbotOptions& opt) {
    if (!(t > 0.0)) throw SearchError(ErrorKind::InvalidArgument, "inversion time must be > 0");
    const int m = opt.nodes;
    const double r = 2.0 * m / (5.0 * t);
    double sum = 0.5 * std::exp(r * t) * transform({r, 0.0}).real();
    for (int k = 1; k < m; ++k) {
        const double theta = k * std::numbers::pi / m;
        const double cot = 1.0 / std::tan(theta);
        const std::complex<double> s(r * theta * cot, r * theta);
        const double sigma = theta + (theta * cot - 1.0) * cot;
        sum += (std::exp(t * s) * transform(s) * std::complex<double>(1.0, sigma)).real();
    }
    return r / m * sum;
}

}  // namespace diffsearch::laplace
