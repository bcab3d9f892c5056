// Copyright (c) 2026 The gaplab authors
// SPDX-License-Identifier: MIT
//
// Adaptive Gauss-Kronrod (G7, K15) quadrature for smooth integrands on
// finite intervals.  Panels are split where the embedded error estimate is
// largest until the requested tolerance is met.

#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace gaplab {

namespace detail {

// 15-point Kronrod abscissae on [-1,1] (positive half) and weights,
// with the embedded 7-point Gauss weights.
inline constexpr double kronrod_x[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

inline constexpr double kronrod_w[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

inline constexpr double gauss_w[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct PanelResult {
    double integral;
    double error;
};

template <typename F>
PanelResult gauss_kronrod_panel(const F& f, double a, double b) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double fk[15];
    for (int i = 0; i < 7; ++i) {
        fk[i] = f(mid - half * kronrod_x[i]);
        fk[14 - i] = f(mid + half * kronrod_x[i]);
    }
    fk[7] = f(mid);

    double kronrod = kronrod_w[7] * fk[7];
    for (int i = 0; i < 7; ++i) kronrod += kronrod_w[i] * (fk[i] + fk[14 - i]);

    double gauss = gauss_w[3] * fk[7];
    for (int i = 0; i < 3; ++i) gauss += gauss_w[i] * (fk[2 * i + 1] + fk[13 - 2 * i]);

    kronrod *= half;
    gauss *= half;
    double diff = std::fabs(kronrod - gauss);
    double err = diff;
    double sharpened = std::pow(200.0 * diff, 1.5);
    if (sharpened < err) err = sharpened;
    return {kronrod, err};
}

} // namespace detail

struct QuadratureOptions {
    double rel_tol = 1e-12;
    double abs_tol = 0.0;
    std::size_t max_panels = 4096;
};

// Integrates f over [a, b]; throws std::runtime_error when the panel budget
// is exhausted before the tolerance is reached.
template <typename F>
double integrate(const F& f, double a, double b,
                 QuadratureOptions opt = {}) {
    if (!(a <= b)) throw std::domain_error("integrate: requires a <= b");
    if (a == b) return 0.0;

    struct Panel {
        double a, b, integral, error;
    };
    std::vector<Panel> panels;
    auto first = detail::gauss_kronrod_panel(f, a, b);
    panels.push_back({a, b, first.integral, first.error});

    for (std::size_t iter = 0; iter < opt.max_panels; ++iter) {
        double total = 0.0, err = 0.0;
        std::size_t worst = 0;
        for (std::size_t i = 0; i < panels.size(); ++i) {
            total += panels[i].integral;
            err += panels[i].error;
            if (panels[i].error > panels[worst].error) worst = i;
        }
        double goal = std::max(opt.abs_tol, opt.rel_tol * std::fabs(total));
        if (err <= goal && panels.size() >= 2) return total;

        Panel w = panels[worst];
        double m = 0.5 * (w.a + w.b);
        if (m <= w.a || m >= w.b) return total;
        auto left = detail::gauss_kronrod_panel(f, w.a, m);
        auto right = detail::gauss_kronrod_panel(f, m, w.b);
        panels[worst] = {w.a, m, left.integral, left.error};
        panels.push_back({m, w.b, right.integral, right.error});
    }

    double total = 0.0, err = 0.0;
    for (const auto& p : panels) {
        total += p.integral;
        err += p.error;
    }
    double goal = std::max(opt.abs_tol, opt.rel_tol * std::fabs(total));
    if (err > goal)
        throw std::runtime_error("integrate: tolerance not met within panel budget");
    return total;
}

} // namespace gaplab
