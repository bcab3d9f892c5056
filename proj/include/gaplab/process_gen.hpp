// Copyright (c) 2026 The gaplab authors
// SPDX-License-Identifier: MIT
//
// Path generators for the inhomogeneous process: time-change inversion of a
// unit-rate homogeneous process, an independent thinning construction used
// for cross-validation, and the exact boundary construction for the 1/t
// rate.  All generators are pure functions of (model, parameters, stream).

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

#include <gaplab/random.hpp>
#include <gaplab/rate_model.hpp>

namespace gaplab {

struct resource_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ProcessPath {
    double horizon_t = 0.0;
    double window_end = 0.0;
    std::vector<double> epochs;
    // true for truncated constructions whose initial interval (0, T_1) still
    // contains unmaterialized points, so it must never be read as a gap
    bool head_open = false;
};

inline double window_end_for(double t, double z_max) {
    if (!(t >= 10.0)) throw std::domain_error("window_end_for: t must be >= 10");
    if (!(z_max >= 0.0)) throw std::domain_error("window_end_for: z_max must be >= 0");
    return t * (1.0 + z_max / std::log(t));
}

// Piecewise-Chebyshev interpolant of the inverse cumulative map, accurate to
// about 1e-12 in relative terms.  Below the cut mass the inverse is the
// closed-form head power; above it, log V(e^y) is interpolated on uniform
// panels in y = log s.
class TimeChangeTable {
  public:
    TimeChangeTable(const RateModel& model, double s_hi) : model_(model) {
        double ell_cut = model.ell_log(model.cut_log());
        head_scale_ = model.alpha / (model.lambda1 * ell_cut);
        s_lo_ = model.lambda1 * ell_cut / model.alpha *
                std::exp(model.alpha * model.cut_log());
        s_hi_ = std::max(s_hi * 1.001 + 10.0, s_lo_ * 2.0);
        y_lo_ = std::log(s_lo_);
        double y_hi = std::log(s_hi_);
        panels_ = static_cast<int>(std::ceil((y_hi - y_lo_) / 0.25)) + 1;
        inv_h_ = panels_ / (y_hi - y_lo_);
        coeffs_.resize(static_cast<std::size_t>(panels_) * kDeg);
        for (int p = 0; p < panels_; ++p) {
            double a = y_lo_ + p / inv_h_;
            double b = y_lo_ + (p + 1) / inv_h_;
            double mid = 0.5 * (a + b), half = 0.5 * (b - a);
            double fv[kDeg];
            for (int j = 0; j < kDeg; ++j) {
                double node = std::cos((2.0 * j + 1.0) * M_PI / (2.0 * kDeg));
                fv[j] = std::log(inv_cum(model, std::exp(mid + half * node)));
            }
            for (int k = 0; k < kDeg; ++k) {
                double c = 0.0;
                for (int j = 0; j < kDeg; ++j)
                    c += fv[j] * std::cos(k * (2.0 * j + 1.0) * M_PI / (2.0 * kDeg));
                coeffs_[static_cast<std::size_t>(p) * kDeg + k] =
                    c * 2.0 / kDeg * (k == 0 ? 0.5 : 1.0);
            }
        }
    }

    double s_max() const { return s_hi_; }

    double operator()(double s) const {
        if (s <= s_lo_)
            return std::pow(head_scale_ * s, 1.0 / model_.alpha);
        double y = std::log(s);
        int p = static_cast<int>((y - y_lo_) * inv_h_);
        p = std::min(std::max(p, 0), panels_ - 1);
        double a = y_lo_ + p / inv_h_;
        double u = 2.0 * (y - a) * inv_h_ - 1.0;
        const double* c = coeffs_.data() + static_cast<std::size_t>(p) * kDeg;
        double b1 = 0.0, b2 = 0.0;
        for (int k = kDeg - 1; k >= 1; --k) {
            double tmp = 2.0 * u * b1 - b2 + c[k];
            b2 = b1;
            b1 = tmp;
        }
        return std::exp(u * b1 - b2 + c[0]);
    }

  private:
    static constexpr int kDeg = 13;
    RateModel model_;
    double head_scale_ = 1.0;
    double s_lo_ = 1.0, s_hi_ = 1.0, y_lo_ = 0.0, inv_h_ = 1.0;
    int panels_ = 0;
    std::vector<double> coeffs_;
};

namespace detail {

inline bool same_model(const RateModel& a, const RateModel& b) {
    return a.alpha == b.alpha && a.lambda1 == b.lambda1 && a.sv_kind == b.sv_kind &&
           a.sv_param == b.sv_param && a.sv_kind != SvKind::custom;
}

// process-wide table cache so replication loops do not rebuild interpolants;
// entries are immutable once built and identical regardless of hit order
inline std::shared_ptr<const TimeChangeTable> shared_table(const RateModel& model,
                                                           double s_hi) {
    static std::mutex mu;
    static std::vector<std::pair<RateModel, std::shared_ptr<const TimeChangeTable>>> cache;
    std::lock_guard<std::mutex> lock(mu);
    for (auto& [m, tab] : cache)
        if (same_model(m, model) && tab->s_max() >= s_hi) return tab;
    auto tab = std::make_shared<const TimeChangeTable>(model, s_hi);
    cache.emplace_back(model, tab);
    if (cache.size() > 64) cache.erase(cache.begin());
    return tab;
}

constexpr double kDefaultCountCap = 1e8;

inline void check_count_cap(double expected, double cap, const char* who) {
    if (expected > cap)
        throw resource_error(std::string(who) + ": expected count " +
                             std::to_string(expected) + " exceeds cap");
}

} // namespace detail

// Draws the process by mapping unit-exponential partial sums through the
// inverse cumulative rate.
inline ProcessPath gen_time_change(const RateModel& model, double t, double z_max,
                                   StreamSpec stream,
                                   double count_cap = detail::kDefaultCountCap) {
    ProcessPath path;
    path.horizon_t = t;
    path.window_end = window_end_for(t, z_max);
    double s_end = cum_rate(model, path.window_end);
    detail::check_count_cap(s_end, count_cap, "gen_time_change");
    path.epochs.reserve(static_cast<std::size_t>(s_end + 6.0 * std::sqrt(s_end) + 16.0));

    std::shared_ptr<const TimeChangeTable> table;
    if (model.sv_kind != SvKind::constant)
        table = detail::shared_table(model, s_end);
    double head_exponent = 1.0 / model.alpha;
    double head_scale = model.alpha / model.lambda1;

    Stream rng(stream);
    double s = 0.0;
    while (true) {
        s += rng.next_exponential();
        if (s > s_end) break;
        double epoch = table ? (*table)(s) : std::pow(head_scale * s, head_exponent);
        if (epoch > path.window_end) break;
        path.epochs.push_back(epoch);
    }
    return path;
}

// Independent construction: a dominating homogeneous process on dyadic slabs
// thinned by the ratio of the true rate to the slab supremum.
inline ProcessPath gen_thinning(const RateModel& model, double t, double z_max,
                                StreamSpec stream,
                                double count_cap = detail::kDefaultCountCap) {
    ProcessPath path;
    path.horizon_t = t;
    path.window_end = window_end_for(t, z_max);
    detail::check_count_cap(cum_rate(model, path.window_end), count_cap, "gen_thinning");

    std::vector<double> bounds;
    double lo = path.window_end;
    while (cum_rate(model, lo) > 1e-12) {
        bounds.push_back(lo);
        lo *= 0.5;
    }
    bounds.push_back(lo);
    std::reverse(bounds.begin(), bounds.end());

    auto stationary = rate_stationary_points(model);
    Stream rng(stream);
    for (std::size_t k = 0; k + 1 < bounds.size(); ++k) {
        double a = bounds[k], b = bounds[k + 1];
        double sup = std::max(eval_rate(model, a), eval_rate(model, b));
        for (double p : stationary)
            if (p > a && p < b) sup = std::max(sup, eval_rate(model, p));
        if (!(sup > 0.0)) continue;
        long long proposals = 0, accepted = 0;
        double u = a;
        while (true) {
            u += rng.next_exponential() / sup;
            if (u > b) break;
            ++proposals;
            if (rng.next_uniform() <= eval_rate(model, u) / sup) {
                ++accepted;
                if (u <= path.window_end) path.epochs.push_back(u);
            }
        }
        if (proposals >= 1000 && accepted < proposals / 1000)
            throw resource_error("gen_thinning: slab acceptance rate below 1e-3");
    }
    return path;
}

// Exact construction for the 1/t boundary rate: epochs are laid down from t
// toward 0 and generation stops once the remaining head interval is strictly
// smaller than the largest gap seen between materialized points, so the
// longest gap and its location are exact despite the infinite tail.
inline ProcessPath gen_log_process(const LogRateModel& model, double t,
                                   StreamSpec stream, long long cap = 1000000) {
    if (!(t > 0.0)) throw std::domain_error("gen_log_process: t must be positive");
    ProcessPath path;
    path.horizon_t = t;
    path.window_end = t;
    path.head_open = true;

    Stream rng(stream);
    std::vector<double> descending;
    double s_hom = 0.0;
    double max_gap = 0.0;
    for (long long k = 0; ; ++k) {
        if (k >= cap)
            throw resource_error("gen_log_process: iteration cap reached");
        s_hom += rng.next_exponential();
        double p = t * std::exp(-s_hom / model.lambda1);
        if (!descending.empty())
            max_gap = std::max(max_gap, descending.back() - p);
        descending.push_back(p);
        if (max_gap > 0.0 && p < max_gap) break;
    }
    path.epochs.assign(descending.rbegin(), descending.rend());
    return path;
}

} // namespace gaplab
