// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the linkmix authors

#pragma once

#include <functional>

namespace linkmix::quadrature {

struct QuadResult {
    double value = 0.0;
    double abs_err = 0.0;  // accumulated error estimate plus tail bound
    int evals = 0;
};

/// Adaptive Gauss-Kronrod 7-15 on a finite interval.
QuadResult integrate(const std::function<double(double)>& f, double lo, double hi,
                     double abs_tol, int max_evals = 200000);

/// Integral over the whole real line of an integrand that decays in both
/// directions: marches unit panels outward from `center` until several
/// consecutive panels fall below the tolerance, then adds a geometric tail
/// allowance to the error estimate. Quiet termination is suppressed within
/// min_left / min_right of the center so that interior lulls between separated
/// mass bumps are not mistaken for the tails.
QuadResult integrate_line(const std::function<double(double)>& f, double center,
                          double abs_tol, int max_evals = 400000, double min_left = 0.0,
                          double min_right = 0.0);

}  // namespace linkmix::quadrature
