// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the linkmix authors

#include "linkmix/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include "linkmix/errors.hpp"

namespace linkmix::quadrature {

namespace {

constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double value;
    double error;
};

Panel gk15(const std::function<double(double)>& f, double lo, double hi, int& evals) {
    const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
    const double fc = f(c);
    evals += 15;
    double resg = fc * kWg[3], resk = fc * kWgk[7];
    for (int j = 0; j < 7; ++j) {
        const double x = h * kXgk[j];
        const double f1 = f(c - x), f2 = f(c + x);
        resk += kWgk[j] * (f1 + f2);
        if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
    }
    return {resk * h, std::abs(resk - resg) * h};
}

Panel adapt(const std::function<double(double)>& f, double lo, double hi, double tol, int depth,
            int& evals, int max_evals) {
    const Panel p = gk15(f, lo, hi, evals);
    if (p.error <= tol || depth >= 28) return p;
    if (evals > max_evals) throw ConvergenceError("quadrature: node budget exhausted");
    const double mid = 0.5 * (lo + hi);
    const Panel l = adapt(f, lo, mid, 0.5 * tol, depth + 1, evals, max_evals);
    const Panel r = adapt(f, mid, hi, 0.5 * tol, depth + 1, evals, max_evals);
    return {l.value + r.value, l.error + r.error};
}

}  // namespace

QuadResult integrate(const std::function<double(double)>& f, double lo, double hi, double abs_tol,
                     int max_evals) {
    QuadResult out;
    const Panel p = adapt(f, lo, hi, abs_tol, 0, out.evals, max_evals);
    out.value = p.value;
    out.abs_err = p.error;
    return out;
}

QuadResult integrate_line(const std::function<double(double)>& f, double center, double abs_tol,
                          int max_evals, double min_left, double min_right) {
    QuadResult out;
    double last[2] = {0.0, 0.0};
    for (int dir = 0; dir < 2; ++dir) {
        const double min_span = dir == 0 ? min_right : min_left;
        double u = 0.0;
        int quiet = 0;
        double last_mag = 0.0;
        while (quiet < 4 || u < min_span) {
            const double lo = center + (dir == 0 ? u : -u - 1.0);
            const double hi = lo + 1.0;
            const Panel p = adapt(f, lo, hi, abs_tol / 16.0, 0, out.evals, max_evals);
            out.value += p.value;
            out.abs_err += p.error;
            last_mag = std::abs(p.value) + p.error;
            quiet = last_mag < abs_tol / 8.0 ? quiet + 1 : 0;
            u += 1.0;
            if (u > 700.0) throw ConvergenceError("quadrature: integrand failed to decay");
        }
        last[dir] = last_mag;
    }
    out.abs_err += last[0] + last[1];  // geometric tail allowance, ratio <= 1/2 assumed
    return out;
}

}  // namespace linkmix::quadrature
