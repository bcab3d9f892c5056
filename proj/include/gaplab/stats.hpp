// Copyright (c) 2026 The gaplab authors
// SPDX-License-Identifier: MIT
//
// Statistical verification tools: Kolmogorov-Smirnov tests, Poisson count
// checks, an independence check combining Pearson correlation with a
// quantile-binned chi-square, subsampled standard errors, and the trend
// verdict used by convergence sweeps.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include <gaplab/special.hpp>

namespace gaplab {

struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
};

inline KsResult ks_one_sample(std::vector<double> sample,
                              const std::function<double(double)>& cdf) {
    if (sample.size() < 10)
        throw std::domain_error("ks_one_sample: need at least 10 observations");
    std::sort(sample.begin(), sample.end());
    double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        double f = cdf(sample[i]);
        d = std::max(d, (i + 1.0) / n - f);
        d = std::max(d, f - i / n);
    }
    return {d, ks_p_value(d, n)};
}

inline KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.size() < 10 || b.size() < 10)
        throw std::domain_error("ks_two_sample: need at least 10 observations per sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double na = static_cast<double>(a.size());
    double nb = static_cast<double>(b.size());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        double v = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= v) ++i;
        while (j < b.size() && b[j] <= v) ++j;
        d = std::max(d, std::fabs(i / na - j / nb));
    }
    double n_eff = na * nb / (na + nb);
    return {d, ks_p_value(d, n_eff)};
}

struct PoissonTestResult {
    bool pass = false;
    bool mean_ok = false;
    bool dispersion_ok = false;
    double emp_mean = 0.0;
    double emp_dispersion = 0.0;
    double mean_target = 0.0;
    double mean_se = 0.0;
    double mean_tolerance_se = 4.0;
    double dispersion_lo = 0.9;
    double dispersion_hi = 1.1;
    bool chi_square_included = false;
    bool chi_square_ok = true;
    double chi_square_p = 1.0;
};

namespace detail {

inline std::pair<double, double> mean_and_variance(const std::vector<double>& v) {
    double n = static_cast<double>(v.size());
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= n;
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    var /= (n - 1.0);
    return {mean, var};
}

} // namespace detail

// Compares count data against a Poisson law with the given mean: the
// empirical mean must lie within four standard errors of the target and the
// index of dispersion within [0.9, 1.1]; optionally also a chi-square
// against the Poisson pmf truncated at its 0.999 quantile.
inline PoissonTestResult poisson_count_test(const std::vector<long long>& counts,
                                            double mean_target,
                                            bool with_chi_square = false) {
    if (counts.size() < 1000)
        throw std::domain_error("poisson_count_test: need at least 1000 counts");
    if (!(mean_target > 0.0))
        throw std::domain_error("poisson_count_test: mean_target must be positive");

    std::vector<double> as_real(counts.begin(), counts.end());
    auto [mean, var] = detail::mean_and_variance(as_real);
    double n = static_cast<double>(counts.size());

    PoissonTestResult r;
    r.emp_mean = mean;
    r.mean_target = mean_target;
    r.mean_se = std::sqrt(std::max(var, mean_target / 10.0) / n);
    r.mean_ok = std::fabs(mean - mean_target) <= r.mean_tolerance_se * r.mean_se;
    r.emp_dispersion = var / std::max(mean, 1e-300);
    r.dispersion_ok = r.emp_dispersion >= r.dispersion_lo &&
                      r.emp_dispersion <= r.dispersion_hi;

    if (with_chi_square) {
        r.chi_square_included = true;
        std::vector<double> pmf;
        double cum = 0.0, p = std::exp(-mean_target);
        for (long long k = 0; cum < 0.999; ++k) {
            pmf.push_back(p);
            cum += p;
            p *= mean_target / (k + 1.0);
        }
        pmf.push_back(1.0 - cum);

        std::vector<double> observed(pmf.size(), 0.0);
        for (long long c : counts) {
            std::size_t k = static_cast<std::size_t>(std::max<long long>(c, 0));
            observed[std::min(k, pmf.size() - 1)] += 1.0;
        }
        std::vector<double> exp_merged, obs_merged;
        double e_acc = 0.0, o_acc = 0.0;
        for (std::size_t k = 0; k < pmf.size(); ++k) {
            e_acc += n * pmf[k];
            o_acc += observed[k];
            if (e_acc >= 5.0) {
                exp_merged.push_back(e_acc);
                obs_merged.push_back(o_acc);
                e_acc = o_acc = 0.0;
            }
        }
        if (e_acc > 0.0 && !exp_merged.empty()) {
            exp_merged.back() += e_acc;
            obs_merged.back() += o_acc;
        }
        if (exp_merged.size() >= 2) {
            double stat = 0.0;
            for (std::size_t k = 0; k < exp_merged.size(); ++k) {
                double diff = obs_merged[k] - exp_merged[k];
                stat += diff * diff / exp_merged[k];
            }
            r.chi_square_p = chi_squared_sf(stat, static_cast<double>(exp_merged.size() - 1));
            r.chi_square_ok = r.chi_square_p > 1e-3;
        }
    }

    r.pass = r.mean_ok && r.dispersion_ok && r.chi_square_ok;
    return r;
}

struct IndependenceResult {
    bool pass = false;
    bool correlation_ok = false;
    bool chi_square_ok = false;
    double correlation = 0.0;
    double correlation_threshold = 0.02;
    double chi_square_stat = 0.0;
    double chi_square_p = 1.0;
    double chi_square_level = 1e-3;
};

// Tests a paired sample for independence: Pearson correlation against a
// fixed threshold plus a 4x4 quantile-binned contingency chi-square.
inline IndependenceResult independence_check(
    const std::vector<std::pair<double, double>>& pairs) {
    if (pairs.size() < 1000)
        throw std::domain_error("independence_check: need at least 1000 pairs");
    std::size_t n = pairs.size();
    std::vector<double> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = pairs[i].first;
        ys[i] = pairs[i].second;
    }
    auto [mx, vx] = detail::mean_and_variance(xs);
    auto [my, vy] = detail::mean_and_variance(ys);
    if (!(vx > 0.0) || !(vy > 0.0))
        throw std::domain_error("independence_check: degenerate variance");

    IndependenceResult r;
    double cov = 0.0;
    for (std::size_t i = 0; i < n; ++i) cov += (xs[i] - mx) * (ys[i] - my);
    cov /= (n - 1.0);
    r.correlation = cov / std::sqrt(vx * vy);
    // 0.02 is two standard errors at n = 1e4; smaller samples keep the same
    // two-standard-error width
    r.correlation_threshold = std::max(0.02, 2.0 / std::sqrt(static_cast<double>(n)));
    r.correlation_ok = std::fabs(r.correlation) < r.correlation_threshold;

    auto quartiles = [](std::vector<double> v) {
        std::sort(v.begin(), v.end());
        std::size_t m = v.size();
        return std::array<double, 3>{v[m / 4], v[m / 2], v[(3 * m) / 4]};
    };
    auto qx = quartiles(xs);
    auto qy = quartiles(ys);
    auto bin = [](const std::array<double, 3>& q, double v) {
        int b = 0;
        for (double cut : q) b += (v > cut) ? 1 : 0;
        return b;
    };
    double cells[4][4] = {};
    double row[4] = {}, col[4] = {};
    for (std::size_t i = 0; i < n; ++i) {
        int bx = bin(qx, xs[i]);
        int by = bin(qy, ys[i]);
        cells[bx][by] += 1.0;
        row[bx] += 1.0;
        col[by] += 1.0;
    }
    double stat = 0.0;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            double expected = row[i] * col[j] / static_cast<double>(n);
            if (expected > 0.0) {
                double diff = cells[i][j] - expected;
                stat += diff * diff / expected;
            }
        }
    }
    r.chi_square_stat = stat;
    r.chi_square_p = chi_squared_sf(stat, 9.0);
    r.chi_square_ok = r.chi_square_p > r.chi_square_level;
    r.pass = r.correlation_ok && r.chi_square_ok;
    return r;
}

struct HomogeneityResult {
    bool pass = false;
    double statistic = 0.0;
    double p_value = 1.0;
    int bins = 0;
    double level = 1e-3;
};

// Two-sample chi-square homogeneity test on integer counts; adjacent values
// are merged until every bin holds at least 8 pooled observations.
inline HomogeneityResult chi_square_homogeneity(const std::vector<long long>& a,
                                                const std::vector<long long>& b) {
    if (a.size() < 1000 || b.size() < 1000)
        throw std::domain_error("chi_square_homogeneity: need at least 1000 counts per sample");
    std::map<long long, std::array<double, 2>> by_value;
    for (long long v : a) by_value[v][0] += 1.0;
    for (long long v : b) by_value[v][1] += 1.0;

    std::vector<std::array<double, 2>> bins;
    std::array<double, 2> acc = {0.0, 0.0};
    for (const auto& [value, pair] : by_value) {
        acc[0] += pair[0];
        acc[1] += pair[1];
        if (acc[0] + acc[1] >= 8.0) {
            bins.push_back(acc);
            acc = {0.0, 0.0};
        }
    }
    if (acc[0] + acc[1] > 0.0) {
        if (bins.empty())
            bins.push_back(acc);
        else {
            bins.back()[0] += acc[0];
            bins.back()[1] += acc[1];
        }
    }

    HomogeneityResult r;
    r.bins = static_cast<int>(bins.size());
    double na = static_cast<double>(a.size());
    double nb = static_cast<double>(b.size());
    double n = na + nb;
    for (const auto& cell : bins) {
        double pooled = cell[0] + cell[1];
        double ea = pooled * na / n;
        double eb = pooled * nb / n;
        r.statistic += (cell[0] - ea) * (cell[0] - ea) / ea +
                       (cell[1] - eb) * (cell[1] - eb) / eb;
    }
    r.p_value = r.bins > 1
                    ? chi_squared_sf(r.statistic, static_cast<double>(r.bins - 1))
                    : 1.0;
    r.pass = r.p_value > r.level;
    return r;
}

// Standard error of a statistic estimated by splitting the sample into folds
// (round-robin by index), recomputing the statistic per fold, and scaling
// the fold spread down by sqrt(folds).
inline double subsampled_se(
    const std::vector<double>& values,
    const std::function<double(const std::vector<double>&)>& statistic,
    int folds = 10) {
    if (folds < 2) throw std::domain_error("subsampled_se: need at least 2 folds");
    if (values.size() < static_cast<std::size_t>(10 * folds))
        throw std::domain_error("subsampled_se: sample too small for the fold count");
    std::vector<double> stats;
    stats.reserve(folds);
    for (int f = 0; f < folds; ++f) {
        std::vector<double> fold;
        fold.reserve(values.size() / folds + 1);
        for (std::size_t i = f; i < values.size(); i += folds)
            fold.push_back(values[i]);
        stats.push_back(statistic(fold));
    }
    auto [mean, var] = detail::mean_and_variance(stats);
    (void)mean;
    return std::sqrt(var / folds);
}

enum class TrendMode { non_increasing, strictly_decreasing };

struct SweepPoint {
    double scale = 0.0;
    double statistic = 0.0;
    double se = 0.0;
};

// Trend verdict across a sweep: consecutive statistics must not rise by more
// than two combined standard errors, or in strict mode must drop by more
// than two combined standard errors.
inline bool sweep_trend_ok(const std::vector<SweepPoint>& points, TrendMode mode) {
    if (points.size() < 2)
        throw std::domain_error("sweep_trend_ok: need at least 2 points");
    for (std::size_t i = 1; i < points.size(); ++i) {
        double slack = 2.0 * std::hypot(points[i - 1].se, points[i].se);
        if (mode == TrendMode::non_increasing) {
            if (points[i].statistic > points[i - 1].statistic + slack) return false;
        } else {
            if (points[i].statistic >= points[i - 1].statistic - slack) return false;
        }
    }
    return true;
}

} // namespace gaplab
