// Copyright (c) 2026 The gaplab authors
// SPDX-License-Identifier: MIT
//
// Longest-gap statistics over a realized path: the longest gap closed by the
// horizon, its location, the first strictly larger gap beyond the horizon,
// normalized coordinates for all of them, the normalized point cloud, and
// the two normalizing-constant formulas.

#pragma once

#include <cmath>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <gaplab/process_gen.hpp>
#include <gaplab/rate_model.hpp>

namespace gaplab {

struct GapSummary {
    double L_t = 0.0;
    double sigma_t = 0.0;
    double x_norm = 0.0;
    double z_norm = 0.0;
    std::optional<double> L_plus;
    std::optional<double> sigma_plus;
    std::optional<double> x_plus_norm;
    std::optional<double> z_plus_norm;
};

struct NormalizedPointCloud {
    double horizon_t = 0.0;
    std::vector<std::pair<double, double>> points;
};

// centering constant alpha log t - log log t - log(alpha(1-alpha)/lambda1)
inline double norm_const_power(double alpha, double lambda1, double t) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::domain_error("norm_const_power: alpha must be in (0,1)");
    if (!(lambda1 > 0.0))
        throw std::domain_error("norm_const_power: lambda1 must be positive");
    if (!(t > std::exp(1.0)))
        throw std::domain_error("norm_const_power: t must exceed e");
    return alpha * std::log(t) - std::log(std::log(t)) -
           std::log(alpha * (1.0 - alpha) / lambda1);
}

// centering constant log Lambda(t) - log log t - log(1-alpha) for slowly
// varying rate corrections
inline double norm_const_rv(const RateModel& model, double t) {
    if (!(model.alpha > 0.0 && model.alpha < 1.0))
        throw std::domain_error("norm_const_rv: alpha must be in (0,1)");
    if (!(t > std::exp(1.0)))
        throw std::domain_error("norm_const_rv: t must exceed e");
    double mass = cum_rate(model, t);
    if (!(mass > 1.0))
        throw std::domain_error("norm_const_rv: cumulative rate must exceed 1");
    return std::log(mass) - std::log(std::log(t)) - std::log(1.0 - model.alpha);
}

// Single left-to-right scan for the longest gap with right endpoint at or
// before t (ties resolved to the earliest epoch), then the first strictly
// larger gap within the remaining window.
inline GapSummary summarize_gaps(const ProcessPath& path, double t, double b_t,
                                 double rate_at_t) {
    if (path.epochs.empty())
        throw std::domain_error("summarize_gaps: empty path");
    if (!(path.epochs.front() <= t))
        throw std::domain_error("summarize_gaps: no epoch at or before t");

    GapSummary s;
    double best = -1.0, best_epoch = 0.0;
    double prev = path.head_open ? path.epochs.front() : 0.0;
    std::size_t start = path.head_open ? 1 : 0;
    for (std::size_t i = start; i < path.epochs.size(); ++i) {
        double epoch = path.epochs[i];
        double gap = epoch - prev;
        if (epoch <= t) {
            if (gap > best) {
                best = gap;
                best_epoch = epoch;
            }
        } else if (gap > best) {
            s.L_plus = gap;
            s.sigma_plus = epoch;
            break;
        }
        prev = epoch;
    }
    if (best < 0.0)
        throw std::domain_error("summarize_gaps: no measurable gap before t");

    double log_t = std::log(t);
    s.L_t = best;
    s.sigma_t = best_epoch;
    s.x_norm = rate_at_t * best - b_t;
    s.z_norm = (t - best_epoch) / t * log_t;
    if (s.L_plus) {
        s.x_plus_norm = rate_at_t * *s.L_plus - b_t;
        s.z_plus_norm = (*s.sigma_plus - t) / t * log_t;
    }
    return s;
}

// Normalized cloud (rate_at_t * R_i - b_t, (1 - T_i/t) log t) over every gap
// in the window; epochs beyond t carry negative second coordinates.
inline NormalizedPointCloud point_cloud(const ProcessPath& path, double t, double b_t,
                                        double rate_at_t) {
    if (path.epochs.empty())
        throw std::domain_error("point_cloud: empty path");
    NormalizedPointCloud cloud;
    cloud.horizon_t = t;
    cloud.points.reserve(path.epochs.size());
    double log_t = std::log(t);
    double prev = path.head_open ? path.epochs.front() : 0.0;
    std::size_t start = path.head_open ? 1 : 0;
    for (std::size_t i = start; i < path.epochs.size(); ++i) {
        double epoch = path.epochs[i];
        cloud.points.emplace_back(rate_at_t * (epoch - prev) - b_t,
                                  (1.0 - epoch / t) * log_t);
        prev = epoch;
    }
    return cloud;
}

inline std::string gap_summary_csv_header() {
    return "rep,L_t,sigma_t,x,z,x_plus,z_plus";
}

inline std::string gap_summary_csv_row(long long rep, const GapSummary& s) {
    std::ostringstream out;
    out.precision(17);
    out << rep << ',' << s.L_t << ',' << s.sigma_t << ',' << s.x_norm << ','
        << s.z_norm << ',';
    if (s.x_plus_norm) out << *s.x_plus_norm;
    out << ',';
    if (s.z_plus_norm) out << *s.z_plus_norm;
    return out.str();
}

} // namespace gaplab
