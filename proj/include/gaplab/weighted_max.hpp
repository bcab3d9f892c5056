// Copyright (c) 2026 The gaplab authors
// SPDX-License-Identifier: MIT
//
// Weighted maxima of independent exponentials: the discrete companion of the
// longest-gap law.  A single fused scan over one uniform stream produces the
// running maximum, truncated maxima at requested index cutoffs, and rectangle
// exceedance counts, so every consumer sees the same sample path.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include <gaplab/random.hpp>
#include <gaplab/rate_model.hpp>

namespace gaplab {

inline double beta_n(double n, double gamma) {
    if (!(gamma > 0.0)) throw std::domain_error("beta_n: gamma must be positive");
    if (!(n >= 3.0)) throw std::domain_error("beta_n: n must be at least 3");
    return std::log(n / gamma) - std::log(std::log(n));
}

// Index weight w(i), nondecreasing for i >= monotone_from(); the scan treats
// earlier indices individually, so a weight may dip near the origin as the
// model-driven ones do.
class Weight {
  public:
    static Weight pure_power(double gamma) {
        check_gamma(gamma);
        Weight w;
        w.gamma_ = gamma;
        w.fn_ = [gamma](double i) { return std::pow(i, gamma); };
        return w;
    }

    // w(i) = V'(i), the clock speed of the inverse cumulative rate
    static Weight from_model(const RateModel& model) {
        Weight w;
        w.gamma_ = model.gamma();
        w.fn_ = [model](double i) { return deriv_inv(model, i); };
        double t_star = model.cut_log();
        for (double t : rate_stationary_points(model)) t_star = std::max(t_star, t);
        w.monotone_from_ = cum_rate(model, t_star) + 1.0;
        return w;
    }

    static Weight from_function(std::function<double(double)> fn, double gamma,
                                double monotone_from = 1.0) {
        check_gamma(gamma);
        Weight w;
        w.gamma_ = gamma;
        w.fn_ = std::move(fn);
        w.monotone_from_ = monotone_from;
        return w;
    }

    double operator()(double i) const { return fn_(i); }
    double gamma() const { return gamma_; }
    double monotone_from() const { return monotone_from_; }

  private:
    static void check_gamma(double gamma) {
        if (!(gamma > 0.0)) throw std::domain_error("Weight: gamma must be positive");
    }

    std::function<double(double)> fn_;
    double gamma_ = 1.0;
    double monotone_from_ = 1.0;
};

// largest index i with i <= n (1 - z / log n)
inline std::size_t truncation_index(std::size_t n, double z) {
    if (!(z >= 0.0)) throw std::domain_error("truncation_index: z must be >= 0");
    if (z == 0.0) return n;
    if (n < 2) return 0;
    double v = static_cast<double>(n) * (1.0 - z / std::log(static_cast<double>(n)));
    if (v < 1.0) return 0;
    return std::min(n, static_cast<std::size_t>(std::floor(v)));
}

namespace detail {

// largest index whose normalized location (1 - i/n) log n lies strictly
// above z
inline std::size_t rect_index_bound(std::size_t n, double z) {
    if (!(z >= 0.0)) throw std::domain_error("rect_index_bound: z must be >= 0");
    double v = static_cast<double>(n) * (1.0 - z / std::log(static_cast<double>(n)));
    if (v <= 1.0) return 0;
    double f = std::floor(v);
    std::size_t bound = static_cast<std::size_t>(f == v ? f - 1.0 : f);
    return std::min(n, bound);
}

constexpr std::size_t kScanBlock = 4096;

} // namespace detail

struct WeightedScanConfig {
    std::size_t n = 0;
    std::vector<double> z_list;
    std::vector<std::pair<double, double>> rects;
};

struct WeightedScanResult {
    double max_value = -std::numeric_limits<double>::infinity();
    std::size_t argmax_index = 0;
    double x_norm = std::numeric_limits<double>::quiet_NaN();
    double z_norm = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> trunc_values;
    std::vector<double> trunc_x_norm;
    std::vector<std::uint64_t> rect_counts;
};

// One pass over exactly n uniforms.  Per block the smallest value any
// consumer still cares about is turned into a raw-uniform gate, so the log
// transform runs only on candidates.
inline WeightedScanResult scan_weighted(const Weight& w, const WeightedScanConfig& cfg,
                                        StreamSpec spec) {
    if (cfg.n == 0) throw std::domain_error("scan_weighted: n must be positive");
    const std::size_t n = cfg.n;
    const double nd = static_cast<double>(n);
    const double log_n = std::log(nd);
    const double w_n = w(nd);
    const bool normalized = n >= 3;
    const double beta = normalized ? beta_n(nd, w.gamma()) : 0.0;
    if (!normalized && !cfg.rects.empty())
        throw std::domain_error("scan_weighted: rectangle counts need n >= 3");

    struct Rect {
        double thresh;
        std::size_t bound;
    };
    std::vector<Rect> rects;
    rects.reserve(cfg.rects.size());
    for (const auto& [x0, z0] : cfg.rects)
        rects.push_back({(x0 + beta) * w_n, detail::rect_index_bound(n, z0)});

    std::vector<std::size_t> taus;
    taus.reserve(cfg.z_list.size());
    for (double z : cfg.z_list) taus.push_back(truncation_index(n, z));
    std::vector<std::size_t> bps = taus;
    bps.push_back(n);
    std::sort(bps.begin(), bps.end());
    bps.erase(std::unique(bps.begin(), bps.end()), bps.end());

    WeightedScanResult r;
    r.trunc_values.assign(cfg.z_list.size(),
                          -std::numeric_limits<double>::infinity());
    r.trunc_x_norm.assign(cfg.z_list.size(),
                          std::numeric_limits<double>::quiet_NaN());
    r.rect_counts.assign(rects.size(), 0);

    Stream rng(spec);
    double m = -std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    const double mono = w.monotone_from();
    std::size_t i = 1;
    for (std::size_t bp : bps) {
        while (i <= bp) {
            std::size_t end = std::min(bp, i + detail::kScanBlock - 1);
            double req = m;
            for (const auto& rc : rects)
                if (rc.bound >= i) req = std::min(req, rc.thresh);
            double gate = 1.0;
            if (static_cast<double>(i) > mono && req > 0.0) {
                double w_sup = w(static_cast<double>(end));
                gate = w_sup > 0.0 ? std::exp(-req / w_sup) : 0.0;
            }
            for (; i <= end; ++i) {
                double u = rng.next_uniform();
                if (u >= gate) continue;
                double x = w(static_cast<double>(i)) * -std::log(u);
                if (x > m) {
                    m = x;
                    arg = i;
                }
                for (std::size_t k = 0; k < rects.size(); ++k)
                    if (i <= rects[k].bound && x > rects[k].thresh)
                        ++r.rect_counts[k];
            }
        }
        for (std::size_t k = 0; k < taus.size(); ++k)
            if (taus[k] == bp) {
                r.trunc_values[k] = m;
                if (normalized) r.trunc_x_norm[k] = m / w_n - beta;
            }
    }

    r.max_value = m;
    r.argmax_index = arg;
    if (normalized) {
        r.x_norm = m / w_n - beta;
        r.z_norm = (1.0 - static_cast<double>(arg) / nd) * log_n;
    }
    return r;
}

struct WeightedMaxSummary {
    double value = 0.0;
    std::size_t argmax_index = 0;
    double x_norm = std::numeric_limits<double>::quiet_NaN();
    double z_norm = std::numeric_limits<double>::quiet_NaN();
};

inline WeightedMaxSummary sample_weighted_max(std::size_t n, const Weight& w,
                                              StreamSpec spec) {
    WeightedScanConfig cfg;
    cfg.n = n;
    auto r = scan_weighted(w, cfg, spec);
    return {r.max_value, r.argmax_index, r.x_norm, r.z_norm};
}

struct TruncatedMaxSummary {
    double value = 0.0;
    double x_norm = std::numeric_limits<double>::quiet_NaN();
    std::size_t truncation = 0;
};

inline TruncatedMaxSummary sample_truncated_max(std::size_t n, const Weight& w,
                                                double z, StreamSpec spec) {
    std::size_t tau = truncation_index(n, z);
    if (tau < 3)
        throw std::domain_error("sample_truncated_max: truncated index below 3");
    WeightedScanConfig cfg;
    cfg.n = n;
    cfg.z_list = {z};
    auto r = scan_weighted(w, cfg, spec);
    return {r.trunc_values[0], r.trunc_x_norm[0], tau};
}

struct WeightedPoint {
    std::size_t index = 0;
    double x = 0.0;
    double z = 0.0;
};

// Materializes every index whose normalized value clears x_floor, in index
// order, consuming the same n uniforms as the scan.
inline std::vector<WeightedPoint> weighted_point_cloud(
    std::size_t n, const Weight& w, StreamSpec spec,
    double x_floor = -std::numeric_limits<double>::infinity()) {
    if (n < 3) throw std::domain_error("weighted_point_cloud: n must be >= 3");
    const double nd = static_cast<double>(n);
    const double log_n = std::log(nd);
    const double w_n = w(nd);
    const double beta = beta_n(nd, w.gamma());
    const double thresh = (x_floor + beta) * w_n;
    const double mono = w.monotone_from();

    std::vector<WeightedPoint> points;
    Stream rng(spec);
    std::size_t i = 1;
    while (i <= n) {
        std::size_t end = std::min(n, i + detail::kScanBlock - 1);
        double gate = 1.0;
        if (static_cast<double>(i) > mono && thresh > 0.0) {
            double w_sup = w(static_cast<double>(end));
            gate = w_sup > 0.0 ? std::exp(-thresh / w_sup) : 0.0;
        }
        for (; i <= end; ++i) {
            double u = rng.next_uniform();
            if (u >= gate) continue;
            double x = w(static_cast<double>(i)) * -std::log(u);
            if (x > thresh)
                points.push_back({i, x / w_n - beta,
                                  (1.0 - static_cast<double>(i) / nd) * log_n});
        }
    }
    return points;
}

} // namespace gaplab
