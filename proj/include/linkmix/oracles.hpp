// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the linkmix authors

#pragma once

#include <cstdint>
#include <functional>

#include "linkmix/channels.hpp"
#include "linkmix/endtoend.hpp"
#include "linkmix/rng.hpp"

namespace linkmix::oracles {

/// Monte-Carlo run configuration. Samples are generated in fixed-size blocks
/// keyed by (seed, block index) and merged in block order, so the estimate is
/// a deterministic function of (seed, n_samples) and independent of how many
/// execution streams the blocks are spread across.
struct McConfig {
    std::uint64_t seed = 42;
    std::int64_t n_samples = 1000000;
    int n_streams = 1;
};

struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
    std::int64_t n = 0;
};

// ---- samplers (exact constructions of the marginal laws) --------------------

/// eta-mu SNR sample: gamma-pair construction gbar1 (eta U + V) / (mu (1+eta)).
double sample_etamu(const channels::EtaMuParams& rf, rng::SplitMix64& stream);

/// kappa-mu SNR sample: Poisson(kappa mu) mixture of gamma shapes.
double sample_kappamu(const channels::KappaMuParams& rf, rng::SplitMix64& stream);

/// real-mu kappa-mu sampler for oracle-only paths
double sample_kappamu_real(double kappa, double mu, double gamma_bar1, rng::SplitMix64& stream);

/// second-hop SNR sample: I = X Y W^{1/xi^2} with gamma-distributed X, Y of
/// unit mean and uniform W; gamma2 = kappa_t (I/d)^t.
double sample_gg_pointing(const channels::FsoChannelParams& fso, rng::SplitMix64& stream);

// ---- Monte-Carlo estimators --------------------------------------------------

Estimate mc_outage(const endtoend::RfParams& rf, const channels::FsoChannelParams& fso,
                   const endtoend::SystemConfig& sys, const McConfig& mc);

/// average of the conditional error rate Gamma(p, q gamma_eq) / (2 Gamma(p))
Estimate mc_ber(const endtoend::RfParams& rf, const channels::FsoChannelParams& fso,
                const endtoend::SystemConfig& sys, const endtoend::ModulationScheme& mod,
                const McConfig& mc);

// ---- quadrature of the defining integrals ------------------------------------

/// F(gamma) = int_0^inf rf_cdf(gamma (c+g2)/g2) f_gamma2(g2) dg2, integrated on
/// a log axis with tail extrapolation; std_error carries the error bound.
Estimate quad_cdf(const std::function<double(double)>& rf_cdf,
                  const channels::FsoChannelParams& fso, const endtoend::SystemConfig& sys,
                  double gamma, double abs_tol = 1e-9);

/// P_b = q^p/(2 Gamma(p)) int_0^inf e^{-q g} g^{p-1} F(g) dg on a log axis.
Estimate quad_ber(const std::function<double(double)>& cdf, const endtoend::ModulationScheme& mod,
                  double abs_tol = 1e-9);

/// variant of quad_cdf with the no-pointing gamma-gamma density (xi -> inf)
Estimate quad_cdf_no_pointing(const std::function<double(double)>& rf_cdf,
                              const channels::FsoChannelParams& fso,
                              const endtoend::SystemConfig& sys, double gamma,
                              double abs_tol = 1e-9);

}  // namespace linkmix::oracles
