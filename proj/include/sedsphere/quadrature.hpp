#pragma once

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <limits>
#include <sstream>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "sedsphere/errors.hpp"

namespace sedsphere::quadrature {

struct Result {
    double value = 0.0;
    double error = 0.0;  // Kronrod error estimate, summed over panels
    double l1 = 0.0;     // integral of |f|, summed over panels
};

/// Adaptive Gauss-Kronrod over [a, b], split at every breakpoint that falls
/// strictly inside the interval. Throws accuracy_error when the error
/// estimate exceeds max(abs_tol, rel_tol * L1).
template <unsigned Points = 61, class F>
Result integrate(F&& f, double a, double b, std::vector<double> breaks,
                 double abs_tol, double rel_tol = 1e-14, unsigned max_depth = 25) {
    breaks.erase(std::remove_if(breaks.begin(), breaks.end(),
                                [&](double c) { return !(c > a && c < b); }),
                 breaks.end());
    std::sort(breaks.begin(), breaks.end());
    breaks.insert(breaks.begin(), a);
    breaks.push_back(b);
    // a sliver panel (two breaks equal up to rounding) has an L1 norm near zero,
    // so its relative tolerance is unreachable and the bisection runs to full depth
    const double merge = 1e-10 * (b - a);
    std::vector<double> edges{a};
    for (std::size_t i = 1; i < breaks.size(); ++i) {
        if (breaks[i] - edges.back() > merge) {
            edges.push_back(breaks[i]);
        }
    }
    edges.back() = b;
    breaks = std::move(edges);

    Result out;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        double err = 0.0;
        double l1 = 0.0;
        out.value += boost::math::quadrature::gauss_kronrod<double, Points>::integrate(
            f, breaks[i], breaks[i + 1], max_depth, rel_tol, &err, &l1);
        out.error += err;
        out.l1 += l1;
    }
    if (!std::isfinite(out.value) || out.error > std::max(abs_tol, rel_tol * out.l1)) {
        std::ostringstream msg;
        msg << "quadrature did not converge on [" << a << ", " << b
            << "]: error estimate " << out.error << " exceeds tolerance";
        throw accuracy_error(msg.str());
    }
    return out;
}

} // namespace sedsphere::quadrature
