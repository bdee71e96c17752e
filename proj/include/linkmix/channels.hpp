// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the linkmix authors

#pragma once

#include <utility>
#include <vector>

#include "linkmix/errors.hpp"
#include "linkmix/specfun.hpp"

namespace linkmix::channels {

/// First-hop eta-mu fading (format-1 power ratio eta, integer cluster count mu).
/// The closed-form coefficient set is singular at eta = 1; construction rejects
/// |eta - 1| <= 1e-3 (use the Nakagami equivalent with 2*mu clusters there).
struct EtaMuParams {
    double eta;
    int mu;
    double gamma_bar1;  // mean SNR, linear

    // derived
    double h;
    double H;        // negative for eta > 1
    double A[2];     // A_1 = 2 mu (h-H)/gbar1, A_2 = 2 mu (h+H)/gbar1
    EtaMuParams(double eta, int mu, double gamma_bar1);

    /// series coefficient a_{n,k}, n in {0,1} selecting the A_1/A_2 branch
    double a_nk(int n, int k) const;
};

/// First-hop kappa-mu fading. Closed forms require integer mu; the sampler and
/// oracle paths accept real mu > 0 (see oracles module).
struct KappaMuParams {
    double kappa;
    int mu;
    double gamma_bar1;

    double A;  // mu (1+kappa) / gamma_bar1
    KappaMuParams(double kappa, int mu, double gamma_bar1);
};

/// Second-hop FSO channel: gamma-gamma turbulence with pointing errors.
/// t = 1 is coherent (heterodyne) detection, t = 2 intensity modulation with
/// direct detection.
struct FsoChannelParams {
    // physical inputs
    double cn2;     // refractive-index structure parameter, m^-2/3
    double L;       // link distance, m
    double D;       // receiver aperture diameter, m
    double lambda;  // wavelength, m
    double xi;      // pointing error ratio
    int t;          // detection type, 1 or 2
    double gamma_bar2;  // mean electrical SNR, linear
    double rytov_constant = 0.492;  // documented override point

    // derived
    double sigma2_sq;  // Rytov variance
    double d_ap;       // aperture parameter sqrt(k D^2 / 4L)
    double a;
    double b;
    double d;        // xi^2/(xi^2+1)
    double kappa_t;  // detection-dependent average electrical SNR

    FsoChannelParams(double cn2, double L, double D, double lambda, double xi, int t,
                     double gamma_bar2, double rytov_constant = 0.492);

    /// Parameter lists of the downstream G-functions: omega has t entries,
    /// tau(j) has 3t+1 entries ending with the series index j.
    std::vector<double> omega() const;
    std::vector<double> tau(int j) const;
    /// tau without the pointing-error entries, for the xi -> infinity limits.
    std::vector<double> tau_no_pointing(int j) const;
    /// kappa_t recomputed in the xi -> infinity limit.
    double kappa_t_no_pointing() const;
};

struct TurbulenceDerived {
    double sigma2_sq;
    double d_ap;
    double a;
    double b;
};

/// Rytov variance, aperture parameter and the gamma-gamma shape pair (a, b)
/// from the physical link inputs.
TurbulenceDerived derive_turbulence(double cn2, double L, double D, double lambda,
                                    double rytov_constant = 0.492);

/// xi^2 / (xi^2 + 1)
double pointing_fraction(double xi);

/// Density of the second-hop SNR (gamma-gamma with pointing errors).
double gg_pdf(const FsoChannelParams& fso, double gamma2);

/// Eta-mu SNR CDF, exact finite triple sum.
double etamu_cdf(const EtaMuParams& rf, double gamma1);

/// Kappa-mu SNR PDF.
double kappamu_pdf(const KappaMuParams& rf, double gamma1);

/// Kappa-mu SNR CDF as a Poisson mixture of regularized lower incomplete
/// gammas, truncated once the certified tail bound drops below tol.
/// Returns {value, terms_used}.
std::pair<double, int> kappamu_cdf(const KappaMuParams& rf, double gamma1, double tol = 1e-10);

/// Nakagami-m power CDF (reduction-consistency reference).
double nakagami_cdf(int m, double gamma_bar1, double gamma1);

/// Upper bound on the Poisson(lambda) tail mass beyond index n, via the
/// geometric majorant of the remaining series.
double poisson_tail_bound(double lambda, int n);

}  // namespace linkmix::channels
