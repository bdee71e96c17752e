// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the linkmix authors

#pragma once

#include <string>
#include <variant>
#include <vector>

#include "linkmix/channels.hpp"
#include "linkmix/specfun.hpp"

namespace linkmix::endtoend {

/// Fixed-gain relay constant and outage threshold (both linear).
struct SystemConfig {
    double c = 1.0;         // G^2 / N0
    double gamma_th = 1.0;  // outage threshold
    SystemConfig() = default;
    SystemConfig(double c_in, double gamma_th_in) : c(c_in), gamma_th(gamma_th_in) {
        if (!(c > 0.0)) throw DomainError("SystemConfig: c must be > 0");
        if (!(gamma_th > 0.0)) throw DomainError("SystemConfig: gamma_th must be > 0");
    }
};

/// Binary modulation parameters of the unified conditional error rate
/// Gamma(p, q*gamma) / (2 Gamma(p)).
struct ModulationScheme {
    double p;
    double q;
    std::string name;

    static ModulationScheme cbfsk() { return {0.5, 0.5, "CBFSK"}; }
    static ModulationScheme nbfsk() { return {1.0, 0.5, "NBFSK"}; }
    static ModulationScheme cbpsk() { return {0.5, 1.0, "CBPSK"}; }
    static ModulationScheme dbpsk() { return {1.0, 1.0, "DBPSK"}; }
    static ModulationScheme custom(double p, double q);
    static ModulationScheme by_name(const std::string& name);
};

struct EvalResult {
    double value = 0.0;          // clamped to the valid probability range
    double raw_value = 0.0;      // before clamping
    double abs_error_est = 0.0;  // kernel error bounds plus series tail bounds
    int terms_used = 0;          // kappa-mu chain only
    std::vector<specfun::GDiagnostics> diagnostics;
};

using RfParams = std::variant<channels::EtaMuParams, channels::KappaMuParams>;

// ---- end-to-end CDF and PDF -----------------------------------------------

EvalResult cdf_etamu_gg(const channels::EtaMuParams& rf, const channels::FsoChannelParams& fso,
                        const SystemConfig& sys, double gamma);

EvalResult cdf_kappamu_gg(const channels::KappaMuParams& rf, const channels::FsoChannelParams& fso,
                          const SystemConfig& sys, double gamma, double tol = 1e-6);

EvalResult pdf_etamu_gg(const channels::EtaMuParams& rf, const channels::FsoChannelParams& fso,
                        const SystemConfig& sys, double gamma);

EvalResult pdf_kappamu_gg(const channels::KappaMuParams& rf, const channels::FsoChannelParams& fso,
                          const SystemConfig& sys, double gamma, double tol = 1e-6);

// ---- outage ----------------------------------------------------------------

EvalResult outage(const channels::EtaMuParams& rf, const channels::FsoChannelParams& fso,
                  const SystemConfig& sys);
EvalResult outage(const channels::KappaMuParams& rf, const channels::FsoChannelParams& fso,
                  const SystemConfig& sys, double tol = 1e-6);
EvalResult outage(const RfParams& rf, const channels::FsoChannelParams& fso,
                  const SystemConfig& sys, double tol = 1e-6);

/// Dominant-residue closed form for kappa_t >> 1; throws PoleCollisionError
/// when the exponent list tau carries near-coincident entries.
double outage_asymptotic_etamu(const channels::EtaMuParams& rf,
                               const channels::FsoChannelParams& fso, const SystemConfig& sys);
double outage_asymptotic_kappamu(const channels::KappaMuParams& rf,
                                 const channels::FsoChannelParams& fso, const SystemConfig& sys,
                                 double tol = 1e-6);
double outage_asymptotic(const RfParams& rf, const channels::FsoChannelParams& fso,
                         const SystemConfig& sys, double tol = 1e-6);

// ---- average bit error rate -------------------------------------------------

EvalResult ber_etamu_gg(const channels::EtaMuParams& rf, const channels::FsoChannelParams& fso,
                        const SystemConfig& sys, const ModulationScheme& mod);
EvalResult ber_kappamu_gg(const channels::KappaMuParams& rf, const channels::FsoChannelParams& fso,
                          const SystemConfig& sys, const ModulationScheme& mod, double tol = 1e-6);
EvalResult ber(const RfParams& rf, const channels::FsoChannelParams& fso, const SystemConfig& sys,
               const ModulationScheme& mod, double tol = 1e-6);

/// xi -> infinity limits (no pointing error); fso.xi is ignored and kappa_t is
/// recomputed for the limit.
EvalResult ber_no_pointing_etamu(const channels::EtaMuParams& rf,
                                 const channels::FsoChannelParams& fso, const SystemConfig& sys,
                                 const ModulationScheme& mod);
EvalResult ber_no_pointing_kappamu(const channels::KappaMuParams& rf,
                                   const channels::FsoChannelParams& fso, const SystemConfig& sys,
                                   const ModulationScheme& mod, double tol = 1e-6);

// ---- the power-exponential-G integral identity ------------------------------

/// Closed form of  I = int_0^inf x^{-alpha-1} exp(-sigma/x)
///                        G^{m,n}_{p,q}(omega x^{u/v} | a ; b) dx
/// as a single enlarged G-function. u, v must be positive coprime integers and
/// the integral convergent (checked; throws ConvergenceError otherwise).
double mellin_exp_g_integral(double alpha, double sigma, int u, int v, double omega,
                             const specfun::MeijerGSpec& spec);

}  // namespace linkmix::endtoend
