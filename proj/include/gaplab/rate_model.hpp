// Copyright (c) 2026 The gaplab authors
// SPDX-License-Identifier: MIT
//
// Rate functions lambda_t = lambda1 * t^(alpha-1) * ell(t) with a slowly
// varying factor ell, their cumulative map Lambda, inverse V, and the
// derivative v = V' = 1 / (lambda o V).  Also numeric admissibility
// diagnostics for the slowly varying factor.
//
// Domain convention: ell is frozen at its cut-point value below the cut
// (e for power-of-log, e^2 for the log-log based kinds), which keeps the
// rate positive and Lambda strictly increasing on all of (0, infinity)
// while leaving the tail behaviour untouched.

#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <gaplab/quadrature.hpp>

namespace gaplab {

enum class SvKind { constant, power_of_log, log_log, exp_log_log_squared, custom };

inline std::string to_string(SvKind kind) {
    switch (kind) {
        case SvKind::constant: return "constant";
        case SvKind::power_of_log: return "power_of_log";
        case SvKind::log_log: return "log_log";
        case SvKind::exp_log_log_squared: return "exp_log_log_squared";
        case SvKind::custom: return "custom";
    }
    return "unknown";
}

struct RateModel {
    double alpha = 0.5;
    double lambda1 = 1.0;
    SvKind sv_kind = SvKind::constant;
    double sv_param = 0.0;
    // custom kind: ell and its logarithmic derivative t ell'/ell, both as
    // functions of y = log t (already frozen below whatever cut they imply)
    std::function<double(double)> custom_ell_log;
    std::function<double(double)> custom_dlog_ell;

    double gamma() const {
        if (!(alpha > 0.0 && alpha < 1.0))
            throw std::domain_error("gamma: requires alpha in (0,1)");
        return (1.0 - alpha) / alpha;
    }

    // y = log t below which ell is frozen; constant kind has no cut
    double cut_log() const {
        switch (sv_kind) {
            case SvKind::constant: return 0.0;
            case SvKind::power_of_log: return 1.0;
            case SvKind::log_log: return 2.0;
            case SvKind::exp_log_log_squared: return 2.0;
            case SvKind::custom: return 1.0;
        }
        return 1.0;
    }

    // slowly varying factor at y = log t, frozen below the cut
    double ell_log(double y) const {
        double yc = std::max(y, cut_log());
        switch (sv_kind) {
            case SvKind::constant: return 1.0;
            case SvKind::power_of_log: return std::pow(yc, sv_param);
            case SvKind::log_log: return std::log(yc);
            case SvKind::exp_log_log_squared: {
                double ll = std::log(yc);
                return std::exp(ll * ll);
            }
            case SvKind::custom: return custom_ell_log(yc);
        }
        return 1.0;
    }

    // logarithmic derivative t ell'(t)/ell(t) at y = log t (zero below the cut)
    double dlog_ell(double y) const {
        if (y < cut_log()) return 0.0;
        switch (sv_kind) {
            case SvKind::constant: return 0.0;
            case SvKind::power_of_log: return sv_param / y;
            case SvKind::log_log: return 1.0 / (y * std::log(y));
            case SvKind::exp_log_log_squared: return 2.0 * std::log(y) / y;
            case SvKind::custom: return custom_dlog_ell(y);
        }
        return 0.0;
    }
};

inline RateModel make_rate_model(double alpha, double lambda1, SvKind kind,
                                 double sv_param = 0.0) {
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw std::domain_error("make_rate_model: alpha must be in (0,1]");
    if (!(lambda1 > 0.0))
        throw std::domain_error("make_rate_model: lambda1 must be positive");
    RateModel m;
    m.alpha = alpha;
    m.lambda1 = lambda1;
    m.sv_kind = kind;
    m.sv_param = sv_param;
    return m;
}

// rate lambda_t = lambda1 * t^(alpha-1) * ell(t)
inline double eval_rate(const RateModel& m, double t) {
    if (!(t > 0.0)) throw std::domain_error("eval_rate: t must be positive");
    double y = std::log(t);
    return m.lambda1 * std::exp((m.alpha - 1.0) * y) * m.ell_log(y);
}

namespace detail {

// integral of the rate over (max(lo,cut), t] computed in w = t^alpha space,
// where the integrand ell(w^(1/alpha)) varies slowly
inline double cum_tail(const RateModel& m, double t_lo, double t, double rel_tol) {
    double a = std::pow(t_lo, m.alpha);
    double b = std::pow(t, m.alpha);
    if (b <= a) return 0.0;
    auto g = [&](double w) { return m.ell_log(std::log(w) / m.alpha); };
    QuadratureOptions opt;
    opt.rel_tol = rel_tol;
    opt.max_panels = 8192;
    return m.lambda1 / m.alpha * integrate(g, a, b, opt);
}

} // namespace detail

// Lambda(t), the expected number of epochs in (0, t]
inline double cum_rate(const RateModel& m, double t) {
    if (!(t > 0.0)) throw std::domain_error("cum_rate: t must be positive");
    if (m.sv_kind == SvKind::constant)
        return m.lambda1 / m.alpha * std::pow(t, m.alpha);
    double t_cut = std::exp(m.cut_log());
    double head_end = std::min(t, t_cut);
    double head = m.lambda1 * m.ell_log(m.cut_log()) / m.alpha * std::pow(head_end, m.alpha);
    if (t <= t_cut) return head;
    return head + detail::cum_tail(m, t_cut, t, 1e-13);
}

// V(s) = Lambda^{-1}(s); closed form for the constant kind, otherwise a
// bracketing search on log t polished by Newton steps
inline double inv_cum(const RateModel& m, double s) {
    if (!(s > 0.0)) throw std::domain_error("inv_cum: s must be positive");
    if (m.sv_kind == SvKind::constant)
        return std::pow(m.alpha * s / m.lambda1, 1.0 / m.alpha);

    double t_cut = std::exp(m.cut_log());
    double ell_cut = m.ell_log(m.cut_log());
    double head_full = m.lambda1 * ell_cut / m.alpha * std::pow(t_cut, m.alpha);
    if (s <= head_full)
        return std::pow(m.alpha * s / (m.lambda1 * ell_cut), 1.0 / m.alpha);

    double y_lo = m.cut_log();
    double y_hi = y_lo + 1.0;
    while (cum_rate(m, std::exp(y_hi)) < s) {
        y_lo = y_hi;
        y_hi *= 2.0;
        if (y_hi > 720.0)
            throw std::runtime_error("inv_cum: bracket expansion failed");
    }

    double y = 0.5 * (y_lo + y_hi);
    double f = cum_rate(m, std::exp(y)) - s;
    for (int iter = 0; iter < 200 && std::fabs(f) > 1e-12 * s; ++iter) {
        if (f > 0.0) y_hi = y; else y_lo = y;
        double t_here = std::exp(y);
        double step = f / (t_here * eval_rate(m, t_here));
        double y_next = y - step;
        if (!(y_next > y_lo && y_next < y_hi)) y_next = 0.5 * (y_lo + y_hi);
        y = y_next;
        f = cum_rate(m, std::exp(y)) - s;
    }
    if (std::fabs(f) > 1e-10 * s)
        throw std::runtime_error("inv_cum: did not converge");
    return std::exp(y);
}

// v(s) = V'(s) = 1 / lambda(V(s))
inline double deriv_inv(const RateModel& m, double s) {
    return 1.0 / eval_rate(m, inv_cum(m, s));
}

// t-locations where lambda is stationary (candidates for interior extrema of
// lambda and hence of v); at most two for the built-in kinds, plus the cut
// point where the frozen branch joins the live one
inline std::vector<double> rate_stationary_points(const RateModel& m) {
    std::vector<double> pts;
    double target = 1.0 - m.alpha;
    double y_cut = m.cut_log();
    pts.push_back(std::exp(y_cut));
    if (m.sv_kind == SvKind::constant || target <= 0.0) return pts;
    switch (m.sv_kind) {
        case SvKind::power_of_log: {
            if (m.sv_param > 0.0) {
                double y = m.sv_param / target;
                if (y > y_cut) pts.push_back(std::exp(y));
            }
            break;
        }
        case SvKind::log_log: {
            // solve 1/(y log y) = 1 - alpha on y > cut; left side decreases
            double y_lo = y_cut, y_hi = y_cut;
            auto g = [](double y) { return 1.0 / (y * std::log(y)); };
            if (g(y_cut) > target) {
                y_hi = y_cut + 1.0;
                while (g(y_hi) > target) y_hi *= 2.0;
                for (int i = 0; i < 200; ++i) {
                    double mid = 0.5 * (y_lo + y_hi);
                    (g(mid) > target ? y_lo : y_hi) = mid;
                }
                pts.push_back(std::exp(0.5 * (y_lo + y_hi)));
            }
            break;
        }
        case SvKind::exp_log_log_squared: {
            // solve 2 log y / y = 1 - alpha; the left side peaks at y = e
            auto g = [](double y) { return 2.0 * std::log(y) / y; };
            double y_peak = std::exp(1.0);
            double peak = g(std::max(y_peak, y_cut));
            if (peak > target) {
                if (y_peak > y_cut) {
                    double lo = y_cut, hi = y_peak;
                    for (int i = 0; i < 200; ++i) {
                        double mid = 0.5 * (lo + hi);
                        (g(mid) < target ? lo : hi) = mid;
                    }
                    if (lo > y_cut) pts.push_back(std::exp(0.5 * (lo + hi)));
                }
                double lo = std::max(y_peak, y_cut), hi = lo + 1.0;
                while (g(hi) > target) hi *= 2.0;
                for (int i = 0; i < 200; ++i) {
                    double mid = 0.5 * (lo + hi);
                    (g(mid) > target ? lo : hi) = mid;
                }
                pts.push_back(std::exp(0.5 * (lo + hi)));
            }
            break;
        }
        default: break;
    }
    return pts;
}

// --- admissibility diagnostics ------------------------------------------

enum class ConditionVerdict { pass, fail, inconclusive };

inline std::string to_string(ConditionVerdict v) {
    switch (v) {
        case ConditionVerdict::pass: return "PASS";
        case ConditionVerdict::fail: return "FAIL";
        case ConditionVerdict::inconclusive: return "INCONCLUSIVE";
    }
    return "unknown";
}

enum class ProbeSpeed { one_over_log, one_over_log_sq };

struct ConditionPoint {
    double log_t;
    double diagnostic;  // D = log t * |t ell'/ell|
    double probe;       // P = log t * sup_{|x|<=eps} |ell((1+x)t)/ell(t) - 1|
};

struct ConditionReport {
    ConditionVerdict verdict = ConditionVerdict::inconclusive;
    std::vector<ConditionPoint> points;
    double probe_first = 0.0;
    double probe_last = 0.0;
    double diagnostic_first = 0.0;
    double diagnostic_last = 0.0;
    // conventions used for the verdict, recorded for the report
    double decay_factor = 10.0;
    double endpoint_ratio = 0.05;
    double zero_floor = 1e-14;
};

// symbolic diagnostic D(t) evaluated from y = log t (usable far beyond
// double-range t, e.g. log t = 1e6)
inline double condition_diagnostic(const RateModel& m, double log_t) {
    return log_t * std::fabs(m.dlog_ell(log_t));
}

inline double condition_probe(const RateModel& m, double log_t, double eps) {
    double base = m.ell_log(log_t);
    double worst = 0.0;
    for (double x : {-eps, 0.0, eps}) {
        double y_shift = log_t + std::log1p(x);
        double rel = std::fabs(m.ell_log(y_shift) / base - 1.0);
        worst = std::max(worst, rel);
    }
    return log_t * worst;
}

inline double probe_eps(ProbeSpeed speed, double log_t) {
    switch (speed) {
        case ProbeSpeed::one_over_log: return 1.0 / log_t;
        case ProbeSpeed::one_over_log_sq: return 1.0 / (log_t * log_t);
    }
    return 1.0 / log_t;
}

// Classifies the slowly varying factor: FAIL when the diagnostic grows along
// the tail of the grid, PASS when the probe decays by the recorded factors
// and the diagnostic stays bounded, INCONCLUSIVE otherwise.
inline ConditionReport check_condition_loc(const RateModel& m,
                                           const std::vector<double>& log_t_grid,
                                           ProbeSpeed speed) {
    if (log_t_grid.size() < 4)
        throw std::domain_error("check_condition_loc: grid too short");
    for (std::size_t i = 1; i < log_t_grid.size(); ++i)
        if (!(log_t_grid[i] > log_t_grid[i - 1]))
            throw std::domain_error("check_condition_loc: grid must increase");

    ConditionReport rep;
    for (double y : log_t_grid) {
        ConditionPoint p;
        p.log_t = y;
        p.diagnostic = condition_diagnostic(m, y);
        p.probe = condition_probe(m, y, probe_eps(speed, y));
        rep.points.push_back(p);
    }
    const auto& pts = rep.points;
    std::size_t n = pts.size();
    rep.probe_first = pts.front().probe;
    rep.probe_last = pts.back().probe;
    rep.diagnostic_first = pts.front().diagnostic;
    rep.diagnostic_last = pts.back().diagnostic;

    bool tail_increasing = pts[n - 1].diagnostic > pts[n - 2].diagnostic &&
                           pts[n - 2].diagnostic > pts[n - 3].diagnostic;
    bool grew = pts[n - 1].diagnostic > 1.2 * pts[0].diagnostic + rep.zero_floor;
    if (tail_increasing && grew) {
        rep.verdict = ConditionVerdict::fail;
        return rep;
    }

    bool probe_zero = rep.probe_first < rep.zero_floor && rep.probe_last < rep.zero_floor;
    bool probe_decays = probe_zero ||
                        (rep.probe_last < rep.probe_first / rep.decay_factor &&
                         rep.probe_last < rep.endpoint_ratio * rep.probe_first);
    bool diag_bounded = rep.diagnostic_last <=
                        std::max(1.2 * rep.diagnostic_first, rep.zero_floor);
    if (probe_decays && diag_bounded)
        rep.verdict = ConditionVerdict::pass;
    return rep;
}

// --- regular variation increment probe ------------------------------------

enum class ProbeTarget { inverse_cum, cum };

enum class ProbeX { one_over_log, quarter_power, zero };

struct RvProbePoint {
    double log_t;
    double x;
    double r;  // (f(t(1+x))/f(t) - 1) / (tau x), tau = 1/alpha or alpha
};

inline double probe_x(ProbeX kind, double log_t) {
    switch (kind) {
        case ProbeX::one_over_log: return 1.0 / log_t;
        case ProbeX::quarter_power: return std::exp(-0.25 * log_t);
        case ProbeX::zero: return 0.0;
    }
    return 0.0;
}

// Ratio probe r(t) for f = V (tau = 1/alpha) or f = Lambda (tau = alpha).
// The Lambda increment is integrated directly over [t, t(1+x)] so that no
// cancellation between two large cumulative values occurs.
inline std::vector<RvProbePoint> check_lemma_rv(const RateModel& m,
                                                const std::vector<double>& log_t_grid,
                                                ProbeTarget target, ProbeX x_kind) {
    std::vector<RvProbePoint> out;
    for (double y : log_t_grid) {
        RvProbePoint p;
        p.log_t = y;
        p.x = probe_x(x_kind, y);
        if (p.x == 0.0) {
            p.r = 1.0;
            out.push_back(p);
            continue;
        }
        double t = std::exp(y);
        if (target == ProbeTarget::cum) {
            double tau = m.alpha;
            double increment;
            if (m.sv_kind == SvKind::constant) {
                increment = cum_rate(m, t) * (std::pow(1.0 + p.x, m.alpha) - 1.0);
            } else {
                increment = detail::cum_tail(m, t, t * (1.0 + p.x), 1e-13);
            }
            p.r = increment / (cum_rate(m, t) * tau * p.x);
        } else {
            double tau = 1.0 / m.alpha;
            double ratio;
            if (m.sv_kind == SvKind::constant) {
                ratio = std::pow(1.0 + p.x, 1.0 / m.alpha);
            } else {
                ratio = inv_cum(m, t * (1.0 + p.x)) / inv_cum(m, t);
            }
            p.r = (ratio - 1.0) / (tau * p.x);
        }
        out.push_back(p);
    }
    return out;
}

// --- the alpha = 0 boundary model ----------------------------------------

// rate lambda1 / t, whose measure of (x, y] is lambda1 * log(y/x)
struct LogRateModel {
    double lambda1 = 1.0;
};

inline double log_measure(const LogRateModel& m, double x, double y) {
    if (!(0.0 < x && x < y))
        throw std::domain_error("log_measure: requires 0 < x < y");
    return m.lambda1 * std::log(y / x);
}

} // namespace gaplab
