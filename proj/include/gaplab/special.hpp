// Copyright (c) 2026 The gaplab authors
// SPDX-License-Identifier: MIT
//
// Small special-function layer used by the statistical tests.

#pragma once

#include <cmath>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

namespace gaplab {

// Survival function Q(x) = P(K > x) of the Kolmogorov distribution.
// Two series are used: the Jacobi theta form for small x and the
// alternating exponential form for large x; both converge in a few terms
// near the crossover at x = 1.18.
inline double kolmogorov_sf(double x) {
    if (x <= 0.0) return 1.0;
    if (x < 1.18) {
        const double pi = 3.14159265358979323846;
        double t = pi * pi / (8.0 * x * x);
        double sum = 0.0;
        for (int k = 1; k <= 20; k += 2) {
            double term = std::exp(-static_cast<double>(k) * k * t);
            sum += term;
            if (term < 1e-18 * sum) break;
        }
        double cdf = std::sqrt(2.0 * pi) / x * sum;
        return 1.0 - cdf;
    }
    double sum = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= 50; ++k) {
        double term = std::exp(-2.0 * static_cast<double>(k) * k * x * x);
        sum += sign * term;
        if (term < 1e-18) break;
        sign = -sign;
    }
    double q = 2.0 * sum;
    if (q < 0.0) q = 0.0;
    if (q > 1.0) q = 1.0;
    return q;
}

// Asymptotic p-value of a KS statistic d computed from an effective sample
// size n_eff (n for one sample, nm/(n+m) for two samples).
inline double ks_p_value(double d, double n_eff) {
    if (d <= 0.0) return 1.0;
    return kolmogorov_sf(std::sqrt(n_eff) * d);
}

// Survival function of the chi-squared distribution with df degrees of freedom.
inline double chi_squared_sf(double x, double df) {
    if (df <= 0.0) throw std::domain_error("chi_squared_sf: df must be positive");
    if (x <= 0.0) return 1.0;
    return boost::math::gamma_q(0.5 * df, 0.5 * x);
}

} // namespace gaplab
