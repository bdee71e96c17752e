// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the linkmix authors

#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "linkmix/errors.hpp"

namespace linkmix::specfun {

// ---------------------------------------------------------------------------
// Gamma-family kernels
// ---------------------------------------------------------------------------

/// Principal-branch log-gamma on the complex plane. exp(ln_gamma(z)) == Gamma(z)
/// for all z away from the poles at 0, -1, -2, ...
std::complex<double> ln_gamma(std::complex<double> z);

/// log|Gamma(x)| together with the sign of Gamma(x); x may be any non-pole real.
struct SignedLog {
    double log_abs;
    int sign;  // -1, 0, +1  (0 encodes an exact zero, log_abs = -inf)
};
SignedLog lgamma_signed(double x);

/// Regularized upper incomplete gamma Q(p, x) = Gamma(p, x)/Gamma(p), p > 0, x >= 0.
double gamma_upper_reg(double p, double x);

/// Regularized lower incomplete gamma P(p, x) = 1 - Q(p, x).
double gamma_lower_reg(double p, double x);

/// Modified Bessel function of the first kind, ascending series.
/// Overflows to +inf for x beyond roughly 713; use bessel_i_ln for the tail.
double bessel_i(double v, double x);

/// log I_v(x), evaluated term-by-term in the log domain; valid for any x >= 0.
double bessel_i_ln(double v, double x);

// ---------------------------------------------------------------------------
// Meijer G
// ---------------------------------------------------------------------------

/// Orders and parameter lists of one G-function instance,
/// G^{m,n}_{p,q}(z | a_1..a_p ; b_1..b_q).
///
/// The first n entries of `a` and the first m entries of `b` drive numerator
/// gamma factors of the Mellin-Barnes integrand; the remainder sit in the
/// denominator. Construction validates m <= q, n <= p, and that no pole of
/// Gamma(b_j - s), j <= m, coincides with a pole of Gamma(1 - a_k + s), k <= n.
class MeijerGSpec {
  public:
    MeijerGSpec(int m, int n, std::vector<double> a, std::vector<double> b);

    int m() const { return m_; }
    int n() const { return n_; }
    int p() const { return static_cast<int>(a_.size()); }
    int q() const { return static_cast<int>(b_.size()); }
    const std::vector<double>& a() const { return a_; }
    const std::vector<double>& b() const { return b_; }

    /// m + n - (p + q)/2; positive for every spec this library accepts.
    double c_star() const;

    std::string describe() const;

  private:
    int m_;
    int n_;
    std::vector<double> a_;
    std::vector<double> b_;
};

enum class GMethod { contour, residue_series, auto_check };

struct GEvalOptions {
    double rel_tol = 1e-10;
    int max_quadrature_nodes = 400000;
    double pole_separation_min = 1e-6;
    GMethod method = GMethod::contour;
};

/// Per-call evaluation record, kept for diagnostics and error accounting.
struct GDiagnostics {
    double abscissa = 0.0;       // contour real part (contour method)
    int nodes = 0;               // integrand evaluations
    double tail_estimate = 0.0;  // bound on the truncated contour tails
    int crossed_poles = 0;       // left poles compensated by explicit residues
    int series_terms = 0;        // residue-series terms (series path)
    bool nudged = false;         // auto cross-check used nudged parameters
    double cross_check_rel = -1.0;  // contour vs series relative gap (auto)
};

struct GResult {
    double value = 0.0;     // may under/overflow double for extreme parameters
    double log_abs = 0.0;   // always valid: log|G|
    int sign = 0;
    double abs_err = 0.0;   // bound: quadrature error + tail + roundoff floor
    GDiagnostics diag;
};

/// Evaluate G^{m,n}_{p,q}(z) for z > 0 along a vertical Mellin-Barnes contour
/// with adaptive tail truncation. Method auto_check re-evaluates through the
/// residue series (nudging near-colliding parameters if needed) and records
/// the relative gap in the diagnostics.
GResult meijer_g(const MeijerGSpec& spec, double z, const GEvalOptions& opts = {});

/// Evaluate by summing residues over the right pole families (the small-z
/// expansion). Requires all those poles simple with pairwise lattice
/// separation above opts.pole_separation_min; throws PoleCollisionError
/// otherwise.
GResult meijer_g_residue_series(const MeijerGSpec& spec, double z,
                                const GEvalOptions& opts = {});

// ---------------------------------------------------------------------------
// Signed log-domain accumulation (shared by the closed-form assemblies)
// ---------------------------------------------------------------------------

/// Accumulates sum_i s_i * exp(l_i) without leaving the log domain until the
/// final read-out. Rescales against the running maximum exponent.
class SignedLogSum {
  public:
    void add(double log_abs, int sign);
    void add_value(double v);
    double value() const;           // may overflow for extreme exponents
    SignedLog signed_log() const;   // exact log-domain readout
    double max_term_log() const { return max_log_; }

  private:
    double max_log_ = -1e308;
    double scaled_sum_ = 0.0;
};

}  // namespace linkmix::specfun
