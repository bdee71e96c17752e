// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the linkmix authors

#include "linkmix/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <vector>

#include "linkmix/quadrature.hpp"

namespace linkmix::oracles {

using channels::EtaMuParams;
using channels::FsoChannelParams;
using channels::KappaMuParams;

double sample_etamu(const EtaMuParams& rf, rng::SplitMix64& stream) {
    const double u = stream.gamma(rf.mu);
    const double v = stream.gamma(rf.mu);
    return rf.gamma_bar1 * (rf.eta * u + v) / (rf.mu * (1.0 + rf.eta));
}

double sample_kappamu_real(double kappa, double mu, double gamma_bar1, rng::SplitMix64& stream) {
    const int n = stream.poisson(kappa * mu);
    const double A = mu * (1.0 + kappa) / gamma_bar1;
    return stream.gamma(mu + n) / A;
}

double sample_kappamu(const KappaMuParams& rf, rng::SplitMix64& stream) {
    return sample_kappamu_real(rf.kappa, rf.mu, rf.gamma_bar1, stream);
}

double sample_gg_pointing(const FsoChannelParams& fso, rng::SplitMix64& stream) {
    const double x = stream.gamma(fso.a) / fso.a;  // unit mean
    const double y = stream.gamma(fso.b) / fso.b;
    const double pl = std::pow(stream.uniform(), 1.0 / (fso.xi * fso.xi));
    const double irr = x * y * pl;
    return fso.kappa_t * std::pow(irr / fso.d, static_cast<double>(fso.t));
}

namespace {

constexpr std::int64_t kBlockSize = 1 << 16;

struct BlockMoments {
    double sum = 0.0;
    double sum_sq = 0.0;
    std::int64_t n = 0;
};

// evaluates fn on every end-to-end SNR sample of a block; blocks are keyed by
// index so any stream assignment reproduces the same numbers
template <typename Fn>
BlockMoments run_block(const endtoend::RfParams& rf, const FsoChannelParams& fso,
                       const endtoend::SystemConfig& sys, std::uint64_t seed,
                       std::int64_t block_index, std::int64_t count, const Fn& fn) {
    rng::SplitMix64 g = rng::SplitMix64::stream(seed, static_cast<std::uint64_t>(block_index));
    BlockMoments bm;
    const bool is_etamu = std::holds_alternative<EtaMuParams>(rf);
    for (std::int64_t i = 0; i < count; ++i) {
        const double g1 = is_etamu ? sample_etamu(std::get<EtaMuParams>(rf), g)
                                   : sample_kappamu(std::get<KappaMuParams>(rf), g);
        const double g2 = sample_gg_pointing(fso, g);
        const double geq = g1 * g2 / (sys.c + g2);
        const double v = fn(geq);
        bm.sum += v;
        bm.sum_sq += v * v;
        bm.n += 1;
    }
    return bm;
}

template <typename Fn>
Estimate mc_run(const endtoend::RfParams& rf, const FsoChannelParams& fso,
                const endtoend::SystemConfig& sys, const McConfig& mc, const Fn& fn) {
    if (mc.n_samples < 1000) throw DomainError("McConfig: n_samples must be >= 1000");
    if (mc.n_streams < 1) throw DomainError("McConfig: n_streams must be >= 1");
    const std::int64_t n_blocks = (mc.n_samples + kBlockSize - 1) / kBlockSize;
    std::vector<BlockMoments> blocks(n_blocks);
    auto block_count = [&](std::int64_t b) {
        return std::min(kBlockSize, mc.n_samples - b * kBlockSize);
    };
    if (mc.n_streams == 1 || n_blocks == 1) {
        for (std::int64_t b = 0; b < n_blocks; ++b) {
            blocks[b] = run_block(rf, fso, sys, mc.seed, b, block_count(b), fn);
        }
    } else {
        const int lanes = std::min<std::int64_t>(mc.n_streams, n_blocks);
        std::vector<std::future<void>> futs;
        futs.reserve(lanes);
        for (int lane = 0; lane < lanes; ++lane) {
            futs.push_back(std::async(std::launch::async, [&, lane] {
                for (std::int64_t b = lane; b < n_blocks; b += lanes) {
                    blocks[b] = run_block(rf, fso, sys, mc.seed, b, block_count(b), fn);
                }
            }));
        }
        for (auto& f : futs) f.get();
    }
    // merge in block order
    double sum = 0.0, sum_sq = 0.0;
    std::int64_t n = 0;
    for (const BlockMoments& bm : blocks) {
        sum += bm.sum;
        sum_sq += bm.sum_sq;
        n += bm.n;
    }
    Estimate out;
    out.n = n;
    out.value = sum / static_cast<double>(n);
    const double var = std::max(0.0, sum_sq / n - out.value * out.value);
    out.std_error = std::sqrt(var / static_cast<double>(n));
    return out;
}

}  // namespace

Estimate mc_outage(const endtoend::RfParams& rf, const FsoChannelParams& fso,
                   const endtoend::SystemConfig& sys, const McConfig& mc) {
    const double th = sys.gamma_th;
    Estimate e = mc_run(rf, fso, sys, mc, [th](double geq) { return geq < th ? 1.0 : 0.0; });
    // binomial standard error
    e.std_error = std::sqrt(std::max(0.0, e.value * (1.0 - e.value)) / static_cast<double>(e.n));
    return e;
}

Estimate mc_ber(const endtoend::RfParams& rf, const FsoChannelParams& fso,
                const endtoend::SystemConfig& sys, const endtoend::ModulationScheme& mod,
                const McConfig& mc) {
    const double p = mod.p, q = mod.q;
    return mc_run(rf, fso, sys, mc, [p, q](double geq) {
        return 0.5 * specfun::gamma_upper_reg(p, q * geq);
    });
}

namespace {

// leftward span that covers the second integrand bump, where the RF CDF factor
// transitions: gamma2 near gamma c / (upper quantile of the RF law)
double rf_transition_span(const std::function<double(double)>& rf_cdf, double gamma, double c,
                          double center) {
    double x99 = 1.0;
    for (int i = 0; i < 80 && rf_cdf(x99) < 1.0 - 1e-10; ++i) x99 *= 2.0;
    const double u_lo = std::log(gamma * c / x99) - 3.0;
    return std::max(8.0, center - u_lo);
}

}  // namespace

Estimate quad_cdf(const std::function<double(double)>& rf_cdf, const FsoChannelParams& fso,
                  const endtoend::SystemConfig& sys, double gamma, double abs_tol) {
    if (!(gamma >= 0.0)) throw DomainError("quad_cdf: gamma must be >= 0");
    Estimate out;
    if (gamma == 0.0) return out;
    auto f = [&](double u) {
        const double g2 = std::exp(u);
        return rf_cdf(gamma * (sys.c + g2) / g2) * channels::gg_pdf(fso, g2) * g2;
    };
    const double center = std::log(fso.gamma_bar2);
    const double span = rf_transition_span(rf_cdf, gamma, sys.c, center);
    const quadrature::QuadResult r =
        quadrature::integrate_line(f, center, abs_tol, 400000, span, 0.0);
    if (r.abs_err > 1e-5) throw ConvergenceError("quad_cdf: error estimate stalled above 1e-5");
    out.value = std::clamp(r.value, 0.0, 1.0);
    out.std_error = r.abs_err;
    out.n = r.evals;
    return out;
}

Estimate quad_cdf_no_pointing(const std::function<double(double)>& rf_cdf,
                              const FsoChannelParams& fso, const endtoend::SystemConfig& sys,
                              double gamma, double abs_tol) {
    if (!(gamma >= 0.0)) throw DomainError("quad_cdf_no_pointing: gamma must be >= 0");
    Estimate out;
    if (gamma == 0.0) return out;
    const double kt = fso.kappa_t_no_pointing();
    const specfun::MeijerGSpec spec(2, 0, {}, {fso.a, fso.b});
    const double lpre = -std::log(static_cast<double>(fso.t)) - std::lgamma(fso.a) -
                        std::lgamma(fso.b);
    auto pdf = [&](double g2) {
        const double arg = fso.a * fso.b * std::pow(g2 / kt, 1.0 / fso.t);
        const specfun::GResult g = specfun::meijer_g(spec, arg);
        return g.sign * std::exp(lpre + g.log_abs - std::log(g2));
    };
    auto f = [&](double u) {
        const double g2 = std::exp(u);
        return rf_cdf(gamma * (sys.c + g2) / g2) * pdf(g2) * g2;
    };
    const double center = std::log(kt);
    const double span = rf_transition_span(rf_cdf, gamma, sys.c, center);
    const quadrature::QuadResult r =
        quadrature::integrate_line(f, center, abs_tol, 400000, span, 0.0);
    out.value = std::clamp(r.value, 0.0, 1.0);
    out.std_error = r.abs_err;
    out.n = r.evals;
    return out;
}

Estimate quad_ber(const std::function<double(double)>& cdf, const endtoend::ModulationScheme& mod,
                  double abs_tol) {
    const double p = mod.p, q = mod.q;
    if (!(p > 0.0 && q > 0.0)) throw DomainError("quad_ber: p, q must be > 0");
    // gamma = e^v absorbs the fractional-power endpoint behaviour of F at 0
    auto f = [&](double v) {
        const double g = std::exp(v);
        return std::exp(-q * g + p * v) * cdf(g);
    };
    const quadrature::QuadResult r = quadrature::integrate_line(f, -std::log(q), abs_tol);
    Estimate out;
    const double scale = std::exp(p * std::log(q) - std::lgamma(p)) * 0.5;
    out.value = std::clamp(scale * r.value, 0.0, 0.5);
    out.std_error = scale * r.abs_err;
    out.n = r.evals;
    return out;
}

}  // namespace linkmix::oracles
