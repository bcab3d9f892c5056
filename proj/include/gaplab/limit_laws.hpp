// Copyright (c) 2026 The gaplab authors
// SPDX-License-Identifier: MIT
//
// Closed-form limit distributions: the Gumbel law of the normalized longest
// gap, the joint law of the gap size and its position, the conditional law
// of the first strictly larger gap, and the rectangle masses of the limiting
// point process intensity in both normalizations.

#pragma once

#include <cmath>
#include <stdexcept>

namespace gaplab {

inline double gumbel_cdf(double x) { return std::exp(-std::exp(-x)); }

inline double gumbel_density(double x) {
    double e = std::exp(-x);
    return e * std::exp(-e);
}

inline double gumbel_quantile(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("gumbel_quantile: p must be in (0,1)");
    return -std::log(-std::log(p));
}

inline double exp_density(double rate, double z) {
    if (!(rate > 0.0)) throw std::domain_error("exp_density: rate must be positive");
    if (z <= 0.0) return 0.0;
    return rate * std::exp(-rate * z);
}

inline double exp_cdf(double rate, double z) {
    if (!(rate > 0.0)) throw std::domain_error("exp_cdf: rate must be positive");
    if (z <= 0.0) return 0.0;
    return -std::expm1(-rate * z);
}

namespace detail {

inline void require_alpha_open(double alpha, const char* who) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::domain_error(std::string(who) + ": alpha must be in (0,1)");
}

} // namespace detail

// joint density of (X, Z), the normalized gap size and normalized position;
// the components are independent: Gumbel times Exp(alpha(1-alpha))
inline double joint_xz_density(double alpha, double x, double z) {
    detail::require_alpha_open(alpha, "joint_xz_density");
    if (z <= 0.0) return 0.0;
    double a = alpha * (1.0 - alpha);
    return gumbel_density(x) * a * std::exp(-a * z);
}

// density of (X+, Z+), the size and position of the first gap strictly
// exceeding the record, conditional on (X, Z) = (x, z); the law depends on
// x only, with support x+ > x, z+ > 0
inline double conditional_plus_density(double alpha, double x, double z,
                                       double x_plus, double z_plus) {
    detail::require_alpha_open(alpha, "conditional_plus_density");
    (void)z;
    if (!(x_plus > x) || !(z_plus > 0.0)) return 0.0;
    double a = alpha * (1.0 - alpha);
    double growth = std::exp(a * z_plus);
    return std::exp(-x_plus) * a * growth * std::exp(-std::exp(-x) * (growth - 1.0));
}

// mass of [x, inf] x [z, inf] under the limiting intensity in the natural
// normalization
inline double mu_rect(double alpha, double x, double z) {
    detail::require_alpha_open(alpha, "mu_rect");
    if (z < 0.0) throw std::domain_error("mu_rect: z must be nonnegative");
    return std::exp(-x - alpha * (1.0 - alpha) * z);
}

// the same mass in the index normalization, parametrized by the tail index
// gamma = (1-alpha)/alpha; z may be any real here
inline double mu_hat_rect(double gamma, double x, double z) {
    if (!(gamma > 0.0)) throw std::domain_error("mu_hat_rect: gamma must be positive");
    return std::exp(-x - gamma * z);
}

} // namespace gaplab
