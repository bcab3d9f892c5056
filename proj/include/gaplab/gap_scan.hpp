// Copyright (c) 2026 The gaplab authors
// SPDX-License-Identifier: MIT
//
// Fused single-pass reduction of the time-changed path to longest-gap
// statistics and rectangle counts, without materializing epochs.  Partial
// sums of the exponential clock advance in blocks through lane products, so
// the common case costs four logarithms per 256 draws; a per-block gate
// bounds every time-space gap by the draw times the supremum of the inverse
// map derivative over the block, and only gated draws take the exact path.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include <gaplab/gap_stats.hpp>
#include <gaplab/process_gen.hpp>
#include <gaplab/random.hpp>
#include <gaplab/rate_model.hpp>

namespace gaplab {

struct GapRect {
    double x = 0.0;
    double z = 0.0;
};

struct GapScanConfig {
    RateModel model;
    double t = 0.0;
    double z_max = 0.0;
    double b_t = 0.0;
    double rate_at_t = 1.0;
    std::vector<GapRect> rects;
    double count_cap = detail::kDefaultCountCap;
};

struct GapScanResult {
    GapSummary summary;
    std::vector<std::uint64_t> rect_counts;
};

namespace detail {

constexpr std::size_t kGapScanBlock = 256;

// Same epoch map as the stored-path generator: closed-form head power for a
// constant slowly varying part, shared interpolation table otherwise.
struct EpochMap {
    std::shared_ptr<const TimeChangeTable> table;
    double head_scale = 1.0;
    double head_exponent = 1.0;

    double operator()(double s) const {
        return table ? (*table)(s) : std::pow(head_scale * s, head_exponent);
    }
};

} // namespace detail

// Scans one replication and returns the same summary as generating the path
// and reducing it, plus per-rectangle counts of normalized gap points in
// (x, inf) x (z, inf).  Rectangle z thresholds must be nonnegative.
inline GapScanResult scan_gaps(const GapScanConfig& cfg, StreamSpec stream) {
    const RateModel& model = cfg.model;
    const double t = cfg.t;
    if (!(cfg.rate_at_t > 0.0))
        throw std::domain_error("scan_gaps: rate_at_t must be positive");
    const double window_end = window_end_for(t, cfg.z_max);
    const double s_win = cum_rate(model, window_end);
    detail::check_count_cap(s_win, cfg.count_cap, "scan_gaps");
    const double log_t = std::log(t);

    detail::EpochMap epoch_of;
    if (model.sv_kind != SvKind::constant)
        epoch_of.table = detail::shared_table(model, s_win);
    epoch_of.head_exponent = 1.0 / model.alpha;
    epoch_of.head_scale = model.alpha / model.lambda1;

    auto deriv_at = [&](double s) {
        double epoch = std::max(epoch_of(std::max(s, 0.0)), 1e-300);
        return 1.0 / eval_rate(model, epoch);
    };

    // s-locations where the epoch map derivative can turn; between them the
    // derivative is monotone, so block suprema come from endpoints and any
    // interior turning point
    const bool gated = model.sv_kind != SvKind::custom;
    std::vector<double> turns_s;
    if (gated) {
        for (double p : rate_stationary_points(model))
            if (p < window_end) turns_s.push_back(cum_rate(model, p));
        std::sort(turns_s.begin(), turns_s.end());
    }

    const std::size_t n_rect = cfg.rects.size();
    std::vector<double> rect_gap_min(n_rect), rect_t_max(n_rect), rect_s_max(n_rect);
    for (std::size_t k = 0; k < n_rect; ++k) {
        if (!(cfg.rects[k].z >= 0.0))
            throw std::domain_error("scan_gaps: rectangle z must be >= 0");
        rect_gap_min[k] = (cfg.rects[k].x + cfg.b_t) / cfg.rate_at_t;
        double t_z = t * (1.0 - cfg.rects[k].z / log_t);
        rect_t_max[k] = t_z;
        rect_s_max[k] =
            t_z > 0.0 ? cum_rate(model, t_z) * (1.0 + 1e-9) + 1e-9 : 0.0;
    }

    Stream rng(stream);
    double s = 0.0;
    double best = -1.0, best_epoch = 0.0;
    std::optional<double> plus_gap, plus_epoch;
    std::vector<std::uint64_t> counts(n_rect, 0);
    double u_buf[detail::kGapScanBlock];
    bool done = false;

    while (!done) {
        const double s0 = s;
        double prod[4] = {1.0, 1.0, 1.0, 1.0};
        for (std::size_t i = 0; i < detail::kGapScanBlock; ++i) {
            double u = rng.next_uniform();
            u_buf[i] = u;
            prod[i & 3] *= u;
        }
        double delta;
        if (prod[0] < 1e-280 || prod[1] < 1e-280 || prod[2] < 1e-280 ||
            prod[3] < 1e-280) {
            delta = 0.0;
            for (double u : u_buf) delta -= std::log(u);
        } else {
            delta = -(std::log(prod[0]) + std::log(prod[1]) +
                      std::log(prod[2]) + std::log(prod[3]));
        }
        const double s1 = s0 + delta;

        double gate_u = 2.0;
        if (gated) {
            double req = best;
            for (std::size_t k = 0; k < n_rect; ++k)
                if (s0 <= rect_s_max[k]) req = std::min(req, rect_gap_min[k]);
            if (req > 0.0) {
                double sup = std::max(deriv_at(s0), deriv_at(s1));
                for (double ts : turns_s)
                    if (ts > s0 && ts < s1) sup = std::max(sup, deriv_at(ts));
                sup *= 1.0 + 1e-9;
                double threshold = req / sup - 1e-3;
                if (threshold > 0.0) gate_u = std::exp(-threshold);
            }
        }

        bool any_hit = gate_u >= 1.0;
        if (!any_hit)
            for (double u : u_buf)
                if (u < gate_u) {
                    any_hit = true;
                    break;
                }

        if (!any_hit) {
            s = s1;
        } else {
            double s_prev = s0;
            for (std::size_t i = 0; i < detail::kGapScanBlock; ++i) {
                const double draw = -std::log(u_buf[i]);
                const double s_cur = s_prev + draw;
                if (u_buf[i] < gate_u || gate_u >= 1.0) {
                    if (s_cur > s_win) {
                        done = true;
                        break;
                    }
                    const double epoch = epoch_of(s_cur);
                    if (epoch > window_end) {
                        done = true;
                        break;
                    }
                    const double gap = epoch - epoch_of(s_prev);
                    if (epoch <= t) {
                        if (gap > best) {
                            best = gap;
                            best_epoch = epoch;
                        }
                        for (std::size_t k = 0; k < n_rect; ++k)
                            if (gap > rect_gap_min[k] && epoch < rect_t_max[k])
                                ++counts[k];
                    } else if (gap > best) {
                        plus_gap = gap;
                        plus_epoch = epoch;
                        done = true;
                        break;
                    }
                }
                s_prev = s_cur;
            }
            if (!done) s = s_prev;
        }
        if (s > s_win) done = true;
    }

    if (best < 0.0)
        throw std::domain_error("scan_gaps: no epoch at or before t");

    GapScanResult out;
    out.summary.L_t = best;
    out.summary.sigma_t = best_epoch;
    out.summary.x_norm = cfg.rate_at_t * best - cfg.b_t;
    out.summary.z_norm = (t - best_epoch) / t * log_t;
    if (plus_gap) {
        out.summary.L_plus = plus_gap;
        out.summary.sigma_plus = plus_epoch;
        out.summary.x_plus_norm = cfg.rate_at_t * *plus_gap - cfg.b_t;
        out.summary.z_plus_norm = (*plus_epoch - t) / t * log_t;
    }
    out.rect_counts = std::move(counts);
    return out;
}

} // namespace gaplab
