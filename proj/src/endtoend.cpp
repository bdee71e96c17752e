// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the linkmix authors

#include "linkmix/endtoend.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>

namespace linkmix::endtoend {

using channels::EtaMuParams;
using channels::FsoChannelParams;
using channels::KappaMuParams;
using specfun::GResult;
using specfun::MeijerGSpec;
using specfun::SignedLog;
using specfun::SignedLogSum;

namespace {

constexpr double kLn2Pi = 1.83787706640934548356065947281;

ModulationScheme validate(ModulationScheme m) {
    if (!(m.p > 0.0) || !(m.q > 0.0)) throw DomainError("ModulationScheme: p, q must be > 0");
    return m;
}

// log of the common closed-form prefactor xi^2 t^{a+b-2} / (Gamma(a) Gamma(b) (2 pi)^{t-1})
double log_fso_prefactor(const FsoChannelParams& fso) {
    return 2.0 * std::log(fso.xi) + (fso.a + fso.b - 2.0) * std::log(static_cast<double>(fso.t)) -
           std::lgamma(fso.a) - std::lgamma(fso.b) - (fso.t - 1) * kLn2Pi;
}

// (h/H)^mu / Gamma(mu) in signed-log form
SignedLog log_etamu_prefactor(const EtaMuParams& rf) {
    const double lg = rf.mu * (std::log(rf.h) - std::log(std::abs(rf.H))) - std::lgamma(rf.mu);
    const int sign = (rf.H >= 0.0 || rf.mu % 2 == 0) ? 1 : -1;
    return {lg, sign};
}

struct GCache {
    std::map<std::pair<int, long long>, GResult> store;
    std::vector<specfun::GDiagnostics>* diag = nullptr;

    // keyed by (j, extra) where extra disambiguates the BER upper parameter
    const GResult& get(int j, long long extra, const std::function<GResult()>& make) {
        const auto key = std::make_pair(j, extra);
        auto it = store.find(key);
        if (it == store.end()) {
            it = store.emplace(key, make()).first;
            if (diag != nullptr) diag->push_back(it->second.diag);
        }
        return it->second;
    }
};

EvalResult clamp_probability(double value, double err, int terms,
                             std::vector<specfun::GDiagnostics> diags, double upper = 1.0) {
    EvalResult out;
    out.raw_value = value;
    out.value = std::clamp(value, 0.0, upper);
    out.abs_error_est = err;
    out.terms_used = terms;
    out.diagnostics = std::move(diags);
    return out;
}

// ---- eta-mu/GG CDF ----------------------------------------------------------

EvalResult cdf_etamu_gg_impl(const EtaMuParams& rf, const FsoChannelParams& fso,
                             const SystemConfig& sys, double gamma) {
    if (!(gamma >= 0.0)) throw DomainError("cdf_etamu_gg: gamma must be >= 0");
    if (gamma == 0.0) return clamp_probability(0.0, 0.0, 0, {});
    if (std::min(rf.A[0], rf.A[1]) * gamma > 690.0) {
        return clamp_probability(1.0, 1e-250, 0, {});
    }
    const int t = fso.t;
    const double log_pref = log_fso_prefactor(fso);
    const SignedLog etapref = log_etamu_prefactor(rf);
    const std::vector<double> om = fso.omega();

    SignedLogSum sum;
    double err = 0.0;
    std::vector<specfun::GDiagnostics> diags;
    for (int n = 0; n < 2; ++n) {
        const double z = std::pow(fso.d * fso.a * fso.b, t) * rf.A[n] * sys.c * gamma /
                         (fso.kappa_t * std::pow(t, 2.0 * t));
        GCache cache;
        cache.diag = &diags;
        for (int k = 0; k < rf.mu; ++k) {
            const double ank = rf.a_nk(n, k);
            const double lank = std::log(std::abs(ank));
            const int sank = ank > 0.0 ? 1 : -1;
            for (int l = 0; l <= rf.mu - k - 1; ++l) {
                for (int j = 0; j <= l; ++j) {
                    const double lcoef = lank + (l - j) * std::log(rf.A[n] * gamma) -
                                         rf.A[n] * gamma - std::lgamma(j + 1.0) -
                                         std::lgamma(l - j + 1.0) + log_pref + etapref.log_abs;
                    if (lcoef < -745.0) continue;
                    const GResult& g = cache.get(j, 0, [&] {
                        return specfun::meijer_g(MeijerGSpec(3 * t + 1, 0, om, fso.tau(j)), z);
                    });
                    sum.add(lcoef + g.log_abs, sank * etapref.sign * g.sign);
                    err += std::exp(lcoef) * g.abs_err;
                }
            }
        }
    }
    const double F = 1.0 - sum.value();
    return clamp_probability(F, err, 0, std::move(diags));
}

// ---- kappa-mu/GG CDF --------------------------------------------------------

// shared driver for the kappa-mu Poisson chains: CDF, BER and asymptote all
// mix per-cluster-count brackets with Poisson weights and truncate on the
// certified tail bound (brackets decrease in the mixture index).
struct PoissonMixture {
    double lambda;
    double tol;
    // The brackets decrease in the mixture index, so the truncated tail lies
    // in [0, tail_mass * bracket_{i+1}]; the midpoint halves the bound. The
    // lookahead bracket costs one extra row whose G values are already cached.
    template <typename BracketFn>
    void run(BracketFn&& bracket_of, double& value, double& trunc_err, int& terms) {
        double lw = -lambda;
        double weight_sum = 0.0;
        double sum = 0.0;
        double next_bracket = 1.0;
        int i = 0;
        for (; i <= 200; ++i) {
            const double bracket = i == 0 ? bracket_of(0) : next_bracket;
            const double w = std::exp(lw);
            weight_sum += w;
            sum += w * bracket;
            next_bracket = std::max(bracket_of(i + 1), 0.0);
            const double tail_mass = std::max(0.0, 1.0 - weight_sum);
            if (tail_mass * next_bracket < 2.0 * tol || i == 200) break;
            lw += std::log(lambda) - std::log(i + 1.0);
        }
        const double tail_mass = std::max(0.0, 1.0 - weight_sum);
        const double half = 0.5 * tail_mass * next_bracket;
        value = sum + half;
        trunc_err = half;
        terms = i + 1;
    }
};

EvalResult cdf_kappamu_gg_impl(const KappaMuParams& rf, const FsoChannelParams& fso,
                               const SystemConfig& sys, double gamma, double tol) {
    if (!(gamma >= 0.0)) throw DomainError("cdf_kappamu_gg: gamma must be >= 0");
    if (!(tol > 0.0)) throw DomainError("cdf_kappamu_gg: tol must be > 0");
    if (gamma == 0.0) return clamp_probability(0.0, 0.0, 1, {});
    if (rf.A * gamma > 690.0) return clamp_probability(1.0, 1e-250, 1, {});
    const int t = fso.t;
    const double log_pref = log_fso_prefactor(fso);
    const std::vector<double> om = fso.omega();
    const double z = std::pow(fso.d * fso.a * fso.b, t) * rf.A * sys.c * gamma /
                     (fso.kappa_t * std::pow(t, 2.0 * t));
    GCache cache;
    std::vector<specfun::GDiagnostics> diags;
    cache.diag = &diags;
    double gerr = 0.0;

    // row(l) = sum_j (A gamma)^{l-j} / (j! (l-j)!) G_j ; complement_i adds rows
    // up to l = mu + i - 1
    std::vector<double> row_cache;
    auto row = [&](int l) {
        SignedLogSum r;
        for (int j = 0; j <= l; ++j) {
            const double lcoef = (l - j) * std::log(rf.A * gamma) - std::lgamma(j + 1.0) -
                                 std::lgamma(l - j + 1.0);
            const GResult& g = cache.get(j, 0, [&] {
                return specfun::meijer_g(MeijerGSpec(3 * t + 1, 0, om, fso.tau(j)), z);
            });
            r.add(lcoef + g.log_abs, g.sign);
            gerr += std::exp(lcoef + log_pref - rf.A * gamma) * g.abs_err;
        }
        return r.value();
    };
    double inner = 0.0;  // running sum of rows
    const double comp_scale = std::exp(log_pref - rf.A * gamma);
    auto bracket_of = [&](int i) {
        const int l_hi = rf.mu + i - 1;
        while (static_cast<int>(row_cache.size()) <= l_hi) {
            row_cache.push_back(row(static_cast<int>(row_cache.size())));
            inner += row_cache.back();
        }
        const double complement = comp_scale * inner;
        return std::clamp(1.0 - complement, 0.0, 1.0);
    };
    PoissonMixture mix{rf.kappa * rf.mu, tol};
    double value = 0.0, trunc_err = 0.0;
    int terms = 0;
    mix.run(bracket_of, value, trunc_err, terms);
    return clamp_probability(value, trunc_err + gerr, terms, std::move(diags));
}

// ---- PDFs -------------------------------------------------------------------

// per-(l, j) bracketed combination (A - (l-j)/gamma) G1 - G2/gamma, where G1 is
// the CDF kernel and G2 carries the argument derivative
void add_pdf_term(SignedLogSum& sum, double& err, double lcoef, int scoef, double A, int lmj,
                  double gamma, const GResult& g1, const GResult& g2) {
    const double factor = A - lmj / gamma;
    if (factor != 0.0) {
        sum.add(lcoef + std::log(std::abs(factor)) + g1.log_abs,
                scoef * g1.sign * (factor > 0.0 ? 1 : -1));
        err += std::exp(lcoef) * std::abs(factor) * g1.abs_err;
    }
    sum.add(lcoef - std::log(gamma) + g2.log_abs, -scoef * g2.sign);
    err += std::exp(lcoef) / gamma * g2.abs_err;
}

EvalResult pdf_etamu_gg_impl(const EtaMuParams& rf, const FsoChannelParams& fso,
                             const SystemConfig& sys, double gamma) {
    if (!(gamma > 0.0)) throw DomainError("pdf_etamu_gg: gamma must be > 0");
    const int t = fso.t;
    const double log_pref = log_fso_prefactor(fso);
    const SignedLog etapref = log_etamu_prefactor(rf);
    const std::vector<double> om = fso.omega();
    std::vector<double> om2{0.0};
    om2.insert(om2.end(), om.begin(), om.end());

    SignedLogSum sum;
    double err = 0.0;
    std::vector<specfun::GDiagnostics> diags;
    for (int n = 0; n < 2; ++n) {
        const double z = std::pow(fso.d * fso.a * fso.b, t) * rf.A[n] * sys.c * gamma /
                         (fso.kappa_t * std::pow(t, 2.0 * t));
        GCache c1, c2;
        c1.diag = &diags;
        c2.diag = &diags;
        for (int k = 0; k < rf.mu; ++k) {
            const double ank = rf.a_nk(n, k);
            const double lank = std::log(std::abs(ank));
            const int sank = ank > 0.0 ? 1 : -1;
            for (int l = 0; l <= rf.mu - k - 1; ++l) {
                for (int j = 0; j <= l; ++j) {
                    const double lcoef = lank + (l - j) * std::log(rf.A[n] * gamma) -
                                         rf.A[n] * gamma - std::lgamma(j + 1.0) -
                                         std::lgamma(l - j + 1.0) + log_pref + etapref.log_abs;
                    if (lcoef < -745.0) continue;
                    const GResult& g1 = c1.get(j, 0, [&] {
                        return specfun::meijer_g(MeijerGSpec(3 * t + 1, 0, om, fso.tau(j)), z);
                    });
                    const GResult& g2 = c2.get(j, 1, [&] {
                        std::vector<double> ta = fso.tau(j);
                        ta.push_back(1.0);
                        return specfun::meijer_g(MeijerGSpec(3 * t + 1, 1, om2, ta), z);
                    });
                    add_pdf_term(sum, err, lcoef, sank * etapref.sign, rf.A[n], l - j, gamma, g1,
                                 g2);
                }
            }
        }
    }
    EvalResult out;
    out.raw_value = sum.value();
    out.value = std::max(0.0, out.raw_value);
    out.abs_error_est = err;
    out.diagnostics = std::move(diags);
    return out;
}

EvalResult pdf_kappamu_gg_impl(const KappaMuParams& rf, const FsoChannelParams& fso,
                               const SystemConfig& sys, double gamma, double tol) {
    if (!(gamma > 0.0)) throw DomainError("pdf_kappamu_gg: gamma must be > 0");
    const int t = fso.t;
    const double log_pref = log_fso_prefactor(fso);
    const std::vector<double> om = fso.omega();
    std::vector<double> om2{0.0};
    om2.insert(om2.end(), om.begin(), om.end());
    const double z = std::pow(fso.d * fso.a * fso.b, t) * rf.A * sys.c * gamma /
                     (fso.kappa_t * std::pow(t, 2.0 * t));
    GCache c1, c2;
    std::vector<specfun::GDiagnostics> diags;
    c1.diag = &diags;
    c2.diag = &diags;
    double gerr = 0.0;

    std::vector<double> rows;  // per-l bracketed row values
    auto row = [&](int l) {
        SignedLogSum r;
        double rerr = 0.0;
        for (int j = 0; j <= l; ++j) {
            const double lcoef = (l - j) * std::log(rf.A * gamma) - std::lgamma(j + 1.0) -
                                 std::lgamma(l - j + 1.0);
            const GResult& g1 = c1.get(j, 0, [&] {
                return specfun::meijer_g(MeijerGSpec(3 * t + 1, 0, om, fso.tau(j)), z);
            });
            const GResult& g2 = c2.get(j, 1, [&] {
                std::vector<double> ta = fso.tau(j);
                ta.push_back(1.0);
                return specfun::meijer_g(MeijerGSpec(3 * t + 1, 1, om2, ta), z);
            });
            add_pdf_term(r, rerr, lcoef, 1, rf.A, l - j, gamma, g1, g2);
        }
        gerr += rerr * std::exp(log_pref - rf.A * gamma);
        return r.value();
    };
    double inner = 0.0;
    const double scale = std::exp(log_pref - rf.A * gamma);
    std::vector<double> row_cache;
    // conditional density of the (mu+i)-cluster branch; not monotone in i, so
    // truncate on the Poisson tail against the running maximum
    double max_bracket = 0.0;
    const double lambda = rf.kappa * rf.mu;
    double lw = -lambda, weight_sum = 0.0, sum = 0.0;
    int terms = 0;
    for (int i = 0; i <= 200; ++i) {
        const int l_hi = rf.mu + i - 1;
        while (static_cast<int>(row_cache.size()) <= l_hi) {
            row_cache.push_back(row(static_cast<int>(row_cache.size())));
            inner += row_cache.back();
        }
        const double bracket = scale * inner;
        max_bracket = std::max(max_bracket, std::abs(bracket));
        const double w = std::exp(lw);
        weight_sum += w;
        sum += w * bracket;
        terms = i + 1;
        const double tail_mass = std::max(0.0, 1.0 - weight_sum);
        if (tail_mass * max_bracket < tol || i == 200) {
            EvalResult out;
            out.raw_value = sum;
            out.value = std::max(0.0, sum);
            out.abs_error_est = tail_mass * max_bracket + gerr;
            out.terms_used = terms;
            out.diagnostics = std::move(diags);
            return out;
        }
        lw += std::log(lambda) - std::log(i + 1.0);
    }
    throw ConvergenceError("pdf_kappamu_gg: series cap reached");
}

// ---- BER --------------------------------------------------------------------

EvalResult ber_etamu_gg_impl(const EtaMuParams& rf, const FsoChannelParams& fso,
                             const SystemConfig& sys, const ModulationScheme& mod_in,
                             bool pointing) {
    const ModulationScheme mod = validate(mod_in);
    const int t = fso.t;
    const double p = mod.p, q = mod.q;
    const double kt = pointing ? fso.kappa_t : fso.kappa_t_no_pointing();
    const double dab = pointing ? fso.d * fso.a * fso.b : fso.a * fso.b;
    // prefactor: pointing keeps xi^2 t^{a+b-2}; the xi -> inf limit carries
    // t^{a+b-1} and no xi^2
    const double log_pref =
        (pointing ? 2.0 * std::log(fso.xi) + (fso.a + fso.b - 2.0) * std::log(double(t))
                  : (fso.a + fso.b - 1.0) * std::log(double(t))) -
        std::lgamma(fso.a) - std::lgamma(fso.b) - (t - 1) * kLn2Pi + p * std::log(q) -
        std::log(2.0) - std::lgamma(p);
    const SignedLog etapref = log_etamu_prefactor(rf);
    const std::vector<double> om = fso.omega();

    SignedLogSum sum;
    double err = 0.0;
    std::vector<specfun::GDiagnostics> diags;
    for (int n = 0; n < 2; ++n) {
        const double y = std::pow(dab, t) * rf.A[n] * sys.c /
                         (kt * std::pow(t, 2.0 * t) * (q + rf.A[n]));
        GCache cache;
        cache.diag = &diags;
        for (int k = 0; k < rf.mu; ++k) {
            const double ank = rf.a_nk(n, k);
            const double lank = std::log(std::abs(ank));
            const int sank = ank > 0.0 ? 1 : -1;
            for (int l = 0; l <= rf.mu - k - 1; ++l) {
                for (int j = 0; j <= l; ++j) {
                    const double lcoef = lank + (l - j) * std::log(rf.A[n]) +
                                         (j - p - l) * std::log(q + rf.A[n]) -
                                         std::lgamma(j + 1.0) - std::lgamma(l - j + 1.0) +
                                         log_pref + etapref.log_abs;
                    const double a1 = 1.0 + j - p - l;
                    const GResult& g = cache.get(j, l - j, [&] {
                        if (pointing) {
                            std::vector<double> av{a1};
                            av.insert(av.end(), om.begin(), om.end());
                            return specfun::meijer_g(MeijerGSpec(3 * t + 1, 1, av, fso.tau(j)), y);
                        }
                        return specfun::meijer_g(
                            MeijerGSpec(2 * t + 1, 1, {a1}, fso.tau_no_pointing(j)), y);
                    });
                    sum.add(lcoef + g.log_abs, sank * etapref.sign * g.sign);
                    err += std::exp(lcoef) * g.abs_err;
                }
            }
        }
    }
    return clamp_probability(0.5 - sum.value(), err, 0, std::move(diags), 0.5);
}

EvalResult ber_kappamu_gg_impl(const KappaMuParams& rf, const FsoChannelParams& fso,
                               const SystemConfig& sys, const ModulationScheme& mod_in, double tol,
                               bool pointing) {
    const ModulationScheme mod = validate(mod_in);
    if (!(tol > 0.0)) throw DomainError("ber_kappamu_gg: tol must be > 0");
    const int t = fso.t;
    const double p = mod.p, q = mod.q;
    const double kt = pointing ? fso.kappa_t : fso.kappa_t_no_pointing();
    const double dab = pointing ? fso.d * fso.a * fso.b : fso.a * fso.b;
    const double log_pref =
        (pointing ? 2.0 * std::log(fso.xi) + (fso.a + fso.b - 2.0) * std::log(double(t))
                  : (fso.a + fso.b - 1.0) * std::log(double(t))) -
        std::lgamma(fso.a) - std::lgamma(fso.b) - (t - 1) * kLn2Pi + p * std::log(q) -
        std::log(2.0) - std::lgamma(p);
    const std::vector<double> om = fso.omega();
    const double y =
        std::pow(dab, t) * rf.A * sys.c / (kt * std::pow(t, 2.0 * t) * (q + rf.A));
    GCache cache;
    std::vector<specfun::GDiagnostics> diags;
    cache.diag = &diags;
    double gerr = 0.0;

    auto row = [&](int l) {
        SignedLogSum r;
        for (int j = 0; j <= l; ++j) {
            const double lcoef = (l - j) * std::log(rf.A) + (j - p - l) * std::log(q + rf.A) -
                                 std::lgamma(j + 1.0) - std::lgamma(l - j + 1.0);
            const double a1 = 1.0 + j - p - l;
            const GResult& g = cache.get(j, l - j, [&] {
                if (pointing) {
                    std::vector<double> av{a1};
                    av.insert(av.end(), om.begin(), om.end());
                    return specfun::meijer_g(MeijerGSpec(3 * t + 1, 1, av, fso.tau(j)), y);
                }
                return specfun::meijer_g(MeijerGSpec(2 * t + 1, 1, {a1}, fso.tau_no_pointing(j)),
                                         y);
            });
            r.add(lcoef + g.log_abs, g.sign);
            gerr += std::exp(lcoef + log_pref) * g.abs_err;
        }
        return r.value();
    };
    std::vector<double> row_cache;
    double inner = 0.0;
    const double scale = std::exp(log_pref);
    auto bracket_of = [&](int i) {
        const int l_hi = rf.mu + i - 1;
        while (static_cast<int>(row_cache.size()) <= l_hi) {
            row_cache.push_back(row(static_cast<int>(row_cache.size())));
            inner += row_cache.back();
        }
        // conditional error rate of the (mu+i)-cluster branch
        return std::clamp(0.5 - scale * inner, 0.0, 0.5);
    };
    PoissonMixture mix{rf.kappa * rf.mu, tol};
    double value = 0.0, trunc_err = 0.0;
    int terms = 0;
    mix.run(bracket_of, value, trunc_err, terms);
    return clamp_probability(value, trunc_err + gerr, terms, std::move(diags), 0.5);
}

// ---- high-SNR asymptote -----------------------------------------------------

// sum_r z^{tau_r} prod_{rho != r} Gamma(tau_rho - tau_r) / prod_rho Gamma(omega_rho - tau_r)
SignedLog dominant_residue_sum(double z, const std::vector<double>& om,
                               const std::vector<double>& ta, double min_sep) {
    const double lnz = std::log(z);
    SignedLogSum s;
    for (size_t r = 0; r < ta.size(); ++r) {
        double lg = ta[r] * lnz;
        int sign = 1;
        bool zero = false;
        for (size_t rho = 0; rho < ta.size() && !zero; ++rho) {
            if (rho == r) continue;
            const double arg = ta[rho] - ta[r];
            if (arg < 0.5 && std::abs(arg - std::round(arg)) < min_sep) {
                throw PoleCollisionError(
                    "outage_asymptotic: gamma pole in the residue numerator (exponents separated "
                    "by an integer)");
            }
            const SignedLog g = specfun::lgamma_signed(arg);
            lg += g.log_abs;
            sign *= g.sign;
        }
        for (double w : om) {
            const double arg = w - ta[r];
            if (arg < 0.5 && std::abs(arg - std::round(arg)) < 1e-12) {
                zero = true;  // reciprocal gamma zero kills this residue
                break;
            }
            const SignedLog g = specfun::lgamma_signed(arg);
            lg -= g.log_abs;
            sign *= g.sign;
        }
        if (!zero) s.add(lg, sign);
    }
    return s.signed_log();
}

}  // namespace

ModulationScheme ModulationScheme::custom(double p, double q) {
    return validate({p, q, "custom"});
}

ModulationScheme ModulationScheme::by_name(const std::string& name) {
    if (name == "CBFSK") return cbfsk();
    if (name == "NBFSK") return nbfsk();
    if (name == "CBPSK") return cbpsk();
    if (name == "DBPSK") return dbpsk();
    throw DomainError("ModulationScheme: unknown scheme '" + name + "'");
}

EvalResult cdf_etamu_gg(const EtaMuParams& rf, const FsoChannelParams& fso,
                        const SystemConfig& sys, double gamma) {
    return cdf_etamu_gg_impl(rf, fso, sys, gamma);
}

EvalResult cdf_kappamu_gg(const KappaMuParams& rf, const FsoChannelParams& fso,
                          const SystemConfig& sys, double gamma, double tol) {
    return cdf_kappamu_gg_impl(rf, fso, sys, gamma, tol);
}

EvalResult pdf_etamu_gg(const EtaMuParams& rf, const FsoChannelParams& fso,
                        const SystemConfig& sys, double gamma) {
    return pdf_etamu_gg_impl(rf, fso, sys, gamma);
}

EvalResult pdf_kappamu_gg(const KappaMuParams& rf, const FsoChannelParams& fso,
                          const SystemConfig& sys, double gamma, double tol) {
    return pdf_kappamu_gg_impl(rf, fso, sys, gamma, tol);
}

EvalResult outage(const EtaMuParams& rf, const FsoChannelParams& fso, const SystemConfig& sys) {
    return cdf_etamu_gg(rf, fso, sys, sys.gamma_th);
}

EvalResult outage(const KappaMuParams& rf, const FsoChannelParams& fso, const SystemConfig& sys,
                  double tol) {
    return cdf_kappamu_gg(rf, fso, sys, sys.gamma_th, tol);
}

EvalResult outage(const RfParams& rf, const FsoChannelParams& fso, const SystemConfig& sys,
                  double tol) {
    if (const auto* em = std::get_if<EtaMuParams>(&rf)) return outage(*em, fso, sys);
    return outage(std::get<KappaMuParams>(rf), fso, sys, tol);
}

double outage_asymptotic_etamu(const EtaMuParams& rf, const FsoChannelParams& fso,
                               const SystemConfig& sys) {
    const int t = fso.t;
    const double gamma = sys.gamma_th;
    const double log_pref = log_fso_prefactor(fso);
    const SignedLog etapref = log_etamu_prefactor(rf);
    const std::vector<double> om = fso.omega();
    SignedLogSum sum;
    for (int n = 0; n < 2; ++n) {
        const double z = std::pow(fso.d * fso.a * fso.b, t) * rf.A[n] * sys.c * gamma /
                         (fso.kappa_t * std::pow(t, 2.0 * t));
        std::map<int, SignedLog> rcache;
        for (int k = 0; k < rf.mu; ++k) {
            const double ank = rf.a_nk(n, k);
            const double lank = std::log(std::abs(ank));
            const int sank = ank > 0.0 ? 1 : -1;
            for (int l = 0; l <= rf.mu - k - 1; ++l) {
                for (int j = 0; j <= l; ++j) {
                    auto it = rcache.find(j);
                    if (it == rcache.end()) {
                        it = rcache.emplace(j, dominant_residue_sum(z, om, fso.tau(j), 1e-6)).first;
                    }
                    const double lcoef = lank + (l - j) * std::log(rf.A[n] * gamma) -
                                         rf.A[n] * gamma - std::lgamma(j + 1.0) -
                                         std::lgamma(l - j + 1.0) + log_pref + etapref.log_abs;
                    sum.add(lcoef + it->second.log_abs, sank * etapref.sign * it->second.sign);
                }
            }
        }
    }
    return 1.0 - sum.value();
}

double outage_asymptotic_kappamu(const KappaMuParams& rf, const FsoChannelParams& fso,
                                 const SystemConfig& sys, double tol) {
    const int t = fso.t;
    const double gamma = sys.gamma_th;
    const double log_pref = log_fso_prefactor(fso);
    const std::vector<double> om = fso.omega();
    const double z = std::pow(fso.d * fso.a * fso.b, t) * rf.A * sys.c * gamma /
                     (fso.kappa_t * std::pow(t, 2.0 * t));
    std::map<int, SignedLog> rcache;
    auto rsum = [&](int j) -> const SignedLog& {
        auto it = rcache.find(j);
        if (it == rcache.end()) {
            it = rcache.emplace(j, dominant_residue_sum(z, om, fso.tau(j), 1e-6)).first;
        }
        return it->second;
    };
    std::vector<double> row_cache;
    double inner = 0.0;
    const double scale = std::exp(log_pref - rf.A * gamma);
    auto bracket_of = [&](int i) {
        const int l_hi = rf.mu + i - 1;
        while (static_cast<int>(row_cache.size()) <= l_hi) {
            const int l = static_cast<int>(row_cache.size());
            SignedLogSum r;
            for (int j = 0; j <= l; ++j) {
                const SignedLog& g = rsum(j);
                r.add((l - j) * std::log(rf.A * gamma) - std::lgamma(j + 1.0) -
                          std::lgamma(l - j + 1.0) + g.log_abs,
                      g.sign);
            }
            row_cache.push_back(r.value());
            inner += row_cache.back();
        }
        return std::clamp(1.0 - scale * inner, 0.0, 1.0);
    };
    PoissonMixture mix{rf.kappa * rf.mu, tol};
    double value = 0.0, trunc_err = 0.0;
    int terms = 0;
    mix.run(bracket_of, value, trunc_err, terms);
    (void)trunc_err;
    return value;
}

double outage_asymptotic(const RfParams& rf, const FsoChannelParams& fso, const SystemConfig& sys,
                         double tol) {
    if (const auto* em = std::get_if<EtaMuParams>(&rf)) {
        return outage_asymptotic_etamu(*em, fso, sys);
    }
    return outage_asymptotic_kappamu(std::get<KappaMuParams>(rf), fso, sys, tol);
}

EvalResult ber_etamu_gg(const EtaMuParams& rf, const FsoChannelParams& fso,
                        const SystemConfig& sys, const ModulationScheme& mod) {
    return ber_etamu_gg_impl(rf, fso, sys, mod, true);
}

EvalResult ber_kappamu_gg(const KappaMuParams& rf, const FsoChannelParams& fso,
                          const SystemConfig& sys, const ModulationScheme& mod, double tol) {
    return ber_kappamu_gg_impl(rf, fso, sys, mod, tol, true);
}

EvalResult ber(const RfParams& rf, const FsoChannelParams& fso, const SystemConfig& sys,
               const ModulationScheme& mod, double tol) {
    if (const auto* em = std::get_if<EtaMuParams>(&rf)) return ber_etamu_gg(*em, fso, sys, mod);
    return ber_kappamu_gg(std::get<KappaMuParams>(rf), fso, sys, mod, tol);
}

EvalResult ber_no_pointing_etamu(const EtaMuParams& rf, const FsoChannelParams& fso,
                                 const SystemConfig& sys, const ModulationScheme& mod) {
    return ber_etamu_gg_impl(rf, fso, sys, mod, false);
}

EvalResult ber_no_pointing_kappamu(const KappaMuParams& rf, const FsoChannelParams& fso,
                                   const SystemConfig& sys, const ModulationScheme& mod,
                                   double tol) {
    return ber_kappamu_gg_impl(rf, fso, sys, mod, tol, false);
}

double mellin_exp_g_integral(double alpha, double sigma, int u, int v, double omega,
                             const MeijerGSpec& spec) {
    if (!(sigma > 0.0)) throw DomainError("mellin_exp_g_integral: sigma must be > 0");
    if (!(omega > 0.0)) throw DomainError("mellin_exp_g_integral: omega must be > 0");
    if (u < 1 || v < 1 || std::gcd(u, v) != 1) {
        throw DomainError("mellin_exp_g_integral: u, v must be positive coprime integers");
    }
    // convergence at infinity: the algebraic part of G grows like z^{a_k - 1}
    // over the first n upper parameters
    for (int k = 0; k < spec.n(); ++k) {
        if (!(alpha > static_cast<double>(u) / v * (spec.a()[k] - 1.0))) {
            throw ConvergenceError("mellin_exp_g_integral: integral diverges at infinity");
        }
    }
    const int m = spec.m(), n = spec.n(), p = spec.p(), q = spec.q();
    double s = 0.0;
    for (double aj : spec.a()) s += 1.0 - aj;
    for (double bj : spec.b()) s -= 1.0 - bj;
    s += 0.5 * (q - p) + 1.0;
    const double cstar = m + n - 0.5 * (p + q);

    auto delta_block = [&](int count, double x) {
        // 1 - Delta(count, 1 - x) = {1 - (1-x+i)/count : i = 0..count-1}
        std::vector<double> out(count);
        for (int i = 0; i < count; ++i) out[i] = 1.0 - (1.0 - x + i) / count;
        return out;
    };
    std::vector<double> A;
    for (double aj : spec.a()) {
        const auto blk = delta_block(v, aj);
        A.insert(A.end(), blk.begin(), blk.end());
    }
    std::vector<double> B = delta_block(u, alpha);
    for (int j = 0; j < m; ++j) {
        const auto blk = delta_block(v, spec.b()[j]);
        B.insert(B.end(), blk.begin(), blk.end());
    }
    for (int j = m; j < q; ++j) {
        const auto blk = delta_block(v, spec.b()[j]);
        B.insert(B.end(), blk.begin(), blk.end());
    }
    const double arg = std::pow(omega, v) * std::pow(sigma, u) /
                       (std::pow(static_cast<double>(u), u) *
                        std::pow(static_cast<double>(v), v * (q - p)));
    const MeijerGSpec big(v * m + u, v * n, A, B);
    const specfun::GResult g = specfun::meijer_g(big, arg);
    const double lpre = s * std::log(static_cast<double>(v)) +
                        (alpha - 0.5) * std::log(static_cast<double>(u)) -
                        alpha * std::log(sigma) -
                        (0.5 * (u - 1) + cstar * (v - 1)) * kLn2Pi;
    return g.sign * std::exp(lpre + g.log_abs);
}

}  // namespace linkmix::endtoend
