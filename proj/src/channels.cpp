// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the linkmix authors

#include "linkmix/channels.hpp"

#include <algorithm>
#include <cmath>

namespace linkmix::channels {

using specfun::gamma_lower_reg;
using specfun::gamma_upper_reg;

EtaMuParams::EtaMuParams(double eta_in, int mu_in, double gbar1)
    : eta(eta_in), mu(mu_in), gamma_bar1(gbar1) {
    if (!(eta > 0.0)) throw DomainError("EtaMuParams: eta must be > 0");
    if (mu < 1) throw DomainError("EtaMuParams: mu must be a positive integer");
    if (!(gamma_bar1 > 0.0)) throw DomainError("EtaMuParams: gamma_bar1 must be > 0");
    if (std::abs(eta - 1.0) <= 1e-3) {
        throw DomainError(
            "EtaMuParams: the coefficient set is singular at eta = 1; "
            "use the Nakagami model with m = 2*mu instead");
    }
    h = (2.0 + 1.0 / eta + eta) / 4.0;
    H = (1.0 / eta - eta) / 4.0;
    A[0] = 2.0 * mu * (h - H) / gamma_bar1;
    A[1] = 2.0 * mu * (h + H) / gamma_bar1;
}

double EtaMuParams::a_nk(int n, int k) const {
    // H may be negative (eta > 1); track signs explicitly so that the
    // eta <-> 1/eta swap lands on the mirrored branch exactly
    const int sH = H >= 0.0 ? 1 : -1;
    double lg = std::lgamma(mu + k) - k * std::log(std::abs(H)) -
                (mu + k) * std::log(2.0) - std::lgamma(k + 1.0);
    int sign;
    if (n == 0) {
        lg -= (mu - k) * std::log(h - H);
        sign = (k % 2 == 0) ? 1 : -1;  // (-1)^k
    } else {
        lg -= (mu - k) * std::log(h + H);
        sign = (mu % 2 == 0) ? 1 : -1;  // (-1)^mu
    }
    if (sH < 0 && k % 2 == 1) sign = -sign;  // sign of H^-k
    return sign * std::exp(lg);
}

KappaMuParams::KappaMuParams(double kappa_in, int mu_in, double gbar1)
    : kappa(kappa_in), mu(mu_in), gamma_bar1(gbar1) {
    if (!(kappa >= 0.0)) throw DomainError("KappaMuParams: kappa must be >= 0");
    if (mu < 1) throw DomainError("KappaMuParams: mu must be a positive integer");
    if (!(gamma_bar1 > 0.0)) throw DomainError("KappaMuParams: gamma_bar1 must be > 0");
    A = mu * (1.0 + kappa) / gamma_bar1;
}

TurbulenceDerived derive_turbulence(double cn2, double L, double D, double lambda,
                                    double rytov_constant) {
    if (!(cn2 > 0.0 && L > 0.0 && D > 0.0 && lambda > 0.0)) {
        throw DomainError("derive_turbulence: all physical inputs must be > 0");
    }
    TurbulenceDerived out;
    const double khat = 2.0 * M_PI / lambda;
    out.sigma2_sq = rytov_constant * cn2 * std::pow(khat, 7.0 / 6.0) * std::pow(L, 11.0 / 6.0);
    out.d_ap = std::sqrt(khat * D * D / (4.0 * L));
    const double s2 = out.sigma2_sq;
    const double s125 = std::pow(s2, 12.0 / 5.0);
    const double dd = out.d_ap * out.d_ap;
    out.a = 1.0 / std::expm1(0.49 * s2 / std::pow(1.0 + 0.18 * dd + 0.56 * s125, 7.0 / 6.0));
    out.b = 1.0 / std::expm1(0.51 * s2 * std::pow(1.0 + 0.69 * s125, -5.0 / 6.0) /
                             std::pow(1.0 + 0.9 * dd + 0.62 * dd * s125, 5.0 / 6.0));
    return out;
}

double pointing_fraction(double xi) {
    if (!(xi > 0.0)) throw DomainError("pointing_fraction: xi must be > 0");
    return xi * xi / (xi * xi + 1.0);
}

FsoChannelParams::FsoChannelParams(double cn2_in, double L_in, double D_in, double lambda_in,
                                   double xi_in, int t_in, double gbar2, double rytov)
    : cn2(cn2_in), L(L_in), D(D_in), lambda(lambda_in), xi(xi_in), t(t_in), gamma_bar2(gbar2),
      rytov_constant(rytov) {
    if (t != 1 && t != 2) throw DomainError("FsoChannelParams: detection type t must be 1 or 2");
    if (!(xi > 0.0)) throw DomainError("FsoChannelParams: xi must be > 0");
    if (!(gamma_bar2 > 0.0)) throw DomainError("FsoChannelParams: gamma_bar2 must be > 0");
    const TurbulenceDerived td = derive_turbulence(cn2, L, D, lambda, rytov_constant);
    sigma2_sq = td.sigma2_sq;
    d_ap = td.d_ap;
    a = td.a;
    b = td.b;
    d = pointing_fraction(xi);
    const double xi2 = xi * xi;
    kappa_t = (t == 1) ? gamma_bar2
                       : gamma_bar2 * a * b * xi2 * (xi2 + 2.0) /
                             ((a + 1.0) * (b + 1.0) * (xi2 + 1.0) * (xi2 + 1.0));
}

std::vector<double> FsoChannelParams::omega() const {
    std::vector<double> om(t);
    const double xi2 = xi * xi;
    for (int i = 0; i < t; ++i) om[i] = (xi2 + 1.0 + i) / t;
    return om;
}

std::vector<double> FsoChannelParams::tau(int j) const {
    std::vector<double> ta;
    ta.reserve(3 * t + 1);
    const double xi2 = xi * xi;
    for (int i = 0; i < t; ++i) ta.push_back((xi2 + i) / t);
    for (int i = 0; i < t; ++i) ta.push_back((a + i) / t);
    for (int i = 0; i < t; ++i) ta.push_back((b + i) / t);
    ta.push_back(static_cast<double>(j));
    return ta;
}

std::vector<double> FsoChannelParams::tau_no_pointing(int j) const {
    std::vector<double> ta;
    ta.reserve(2 * t + 1);
    for (int i = 0; i < t; ++i) ta.push_back((a + i) / t);
    for (int i = 0; i < t; ++i) ta.push_back((b + i) / t);
    ta.push_back(static_cast<double>(j));
    return ta;
}

double FsoChannelParams::kappa_t_no_pointing() const {
    return (t == 1) ? gamma_bar2 : gamma_bar2 * a * b / ((a + 1.0) * (b + 1.0));
}

double gg_pdf(const FsoChannelParams& fso, double gamma2) {
    if (!(gamma2 > 0.0)) throw DomainError("gg_pdf: gamma2 must be > 0");
    const double xi2 = fso.xi * fso.xi;
    const double arg = fso.d * fso.a * fso.b * std::pow(gamma2 / fso.kappa_t, 1.0 / fso.t);
    const specfun::MeijerGSpec spec(3, 0, {xi2 + 1.0}, {xi2, fso.a, fso.b});
    const specfun::GResult g = specfun::meijer_g(spec, arg);
    // assembled in the log domain: the gamma prefactors overflow for large a, b
    const double lpre = std::log(xi2) - std::log(static_cast<double>(fso.t)) -
                        std::lgamma(fso.a) - std::lgamma(fso.b) - std::log(gamma2);
    return g.sign * std::exp(lpre + g.log_abs);
}

double etamu_cdf(const EtaMuParams& rf, double gamma1) {
    if (!(gamma1 >= 0.0)) throw DomainError("etamu_cdf: gamma1 must be >= 0");
    if (gamma1 == 0.0) return 0.0;
    // extended precision: the alternating coefficients cancel by many orders
    // near the ends of the admissible eta range
    const long double h = (2.0L + 1.0L / rf.eta + static_cast<long double>(rf.eta)) / 4.0L;
    const long double H = (1.0L / rf.eta - static_cast<long double>(rf.eta)) / 4.0L;
    long double sum = 0.0L;
    for (int n = 0; n < 2; ++n) {
        const long double hpm = n == 0 ? h - H : h + H;
        const long double A = 2.0L * rf.mu * hpm / rf.gamma_bar1;
        const long double e = std::exp(-A * static_cast<long double>(gamma1));
        for (int k = 0; k < rf.mu; ++k) {
            long double ank = std::exp(
                static_cast<long double>(std::lgamma(rf.mu + k)) - k * std::log(std::abs(H)) -
                (rf.mu + k) * std::log(2.0L) -
                static_cast<long double>(std::lgamma(k + 1.0)) - (rf.mu - k) * std::log(hpm));
            int sign = n == 0 ? (k % 2 == 0 ? 1 : -1) : (rf.mu % 2 == 0 ? 1 : -1);
            if (H < 0.0L && k % 2 == 1) sign = -sign;
            long double pw = 1.0L;  // (A gamma)^l / l!
            for (int l = 0; l <= rf.mu - k - 1; ++l) {
                sum += sign * ank * pw * e;
                pw *= A * gamma1 / (l + 1.0L);
            }
        }
    }
    const long double hh = std::pow(h / std::abs(H), static_cast<long double>(rf.mu));
    const int sHh = (H >= 0.0L || rf.mu % 2 == 0) ? 1 : -1;
    const long double f =
        1.0L - sHh * hh * sum / std::exp(static_cast<long double>(std::lgamma(rf.mu)));
    return std::clamp(static_cast<double>(f), 0.0, 1.0);
}

double kappamu_pdf(const KappaMuParams& rf, double gamma1) {
    if (!(gamma1 > 0.0)) throw DomainError("kappamu_pdf: gamma1 must be > 0");
    const double mu = rf.mu, k = rf.kappa, g = rf.gamma_bar1;
    if (k == 0.0) {
        // gamma density with shape mu
        const double lf = mu * std::log(mu / g) + (mu - 1.0) * std::log(gamma1) -
                          mu * gamma1 / g - std::lgamma(mu);
        return std::exp(lf);
    }
    const double bessel_arg = 2.0 * mu * std::sqrt(k * (1.0 + k) * gamma1 / g);
    const double lf = std::log(mu) + 0.5 * (mu + 1.0) * std::log(1.0 + k) -
                      0.5 * (mu - 1.0) * std::log(k) - k * mu -
                      0.5 * (mu + 1.0) * std::log(g) + 0.5 * (mu - 1.0) * std::log(gamma1) -
                      mu * (1.0 + k) * gamma1 / g + specfun::bessel_i_ln(mu - 1.0, bessel_arg);
    return std::exp(lf);
}

double poisson_tail_bound(double lambda, int n) {
    // sum_{i>n} e^-l l^i/i!  <=  e^-l l^{n+1}/(n+1)! * 1/(1 - l/(n+2)), l < n+2
    if (lambda == 0.0) return 0.0;
    const double lw = -lambda + (n + 1.0) * std::log(lambda) - std::lgamma(n + 2.0);
    const double r = lambda / (n + 2.0);
    if (r >= 1.0) return 1.0;  // bound not yet useful
    return std::min(1.0, std::exp(lw) / (1.0 - r));
}

std::pair<double, int> kappamu_cdf(const KappaMuParams& rf, double gamma1, double tol) {
    if (!(gamma1 >= 0.0)) throw DomainError("kappamu_cdf: gamma1 must be >= 0");
    if (!(tol > 0.0)) throw DomainError("kappamu_cdf: tol must be > 0");
    if (gamma1 == 0.0) return {0.0, 1};
    const double lambda = rf.kappa * rf.mu;
    const double x = rf.A * gamma1;
    double value = 0.0;
    double lw = -lambda;  // log of the Poisson weight
    int terms = 0;
    for (int i = 0; i <= 200; ++i) {
        const double bracket = gamma_lower_reg(rf.mu + i, x);
        value += std::exp(lw) * bracket;
        ++terms;
        // P(mu+i, x) decreases in i, so the tail is below tail_mass * bracket
        if (poisson_tail_bound(lambda, i) * bracket < tol) break;
        lw += std::log(lambda) - std::log(i + 1.0);
    }
    return {std::min(value, 1.0), terms};
}

double nakagami_cdf(int m, double gamma_bar1, double gamma1) {
    if (m < 1) throw DomainError("nakagami_cdf: m must be a positive integer");
    if (!(gamma_bar1 > 0.0)) throw DomainError("nakagami_cdf: gamma_bar1 must be > 0");
    if (!(gamma1 >= 0.0)) throw DomainError("nakagami_cdf: gamma1 must be >= 0");
    return gamma_lower_reg(m, m * gamma1 / gamma_bar1);
}

}  // namespace linkmix::channels
