// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the linkmix authors

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "linkmix/endtoend.hpp"
#include "linkmix/oracles.hpp"
#include "linkmix/quadrature.hpp"
#include "testlib.hpp"

using namespace linkmix;
using namespace linkmix::channels;
using namespace linkmix::endtoend;

namespace {
FsoChannelParams fig_fso(double cn2, int t, double gbar2_db, double xi = 1.1) {
    return FsoChannelParams(cn2, 4000.0, 0.01, 1550e-9, xi, t, std::pow(10.0, gbar2_db / 10.0));
}
const SystemConfig kSys(1.0, 1.0);  // c = 1, gamma_th = 0 dB
}  // namespace

TEST_CASE("eta-mu/GG CDF: lower limit and quadrature match") {
    const EtaMuParams rf(0.9, 1, 10.0);
    const FsoChannelParams fso = fig_fso(1e-15, 1, 10.0);
    CHECK(cdf_etamu_gg(rf, fso, kSys, 1e-9).value < 1e-3);
    CHECK(cdf_etamu_gg(rf, fso, kSys, 0.0).value == 0.0);
    const double closed = cdf_etamu_gg(rf, fso, kSys, 1.0).value;
    const auto quad = oracles::quad_cdf([&](double g) { return etamu_cdf(rf, g); }, fso, kSys, 1.0);
    CHECK(std::abs(closed - quad.value) < 1e-5);
}

TEST_CASE("eta-mu/GG CDF within 3 SE of Monte-Carlo") {
    const EtaMuParams rf(0.9, 1, 10.0);
    const FsoChannelParams fso = fig_fso(1e-15, 1, 10.0);
    const double closed = cdf_etamu_gg(rf, fso, kSys, 1.0).value;
    const auto mc = oracles::mc_outage(RfParams(rf), fso, kSys, {42, 1000000, 1});
    CHECK(std::abs(closed - mc.value) < 3.0 * mc.std_error);
}

TEST_CASE("kappa-mu/GG CDF: limits, truncation, quadrature match") {
    const KappaMuParams rf(3.0, 2, 10.0);
    // mid-sweep point of the kappa-mu outage figure
    const FsoChannelParams fso = fig_fso(1e-15, 1, 30.0);
    CHECK(cdf_kappamu_gg(rf, fso, kSys, 1e7).value == doctest::Approx(1.0).epsilon(1e-9));
    const EvalResult r = cdf_kappamu_gg(rf, fso, kSys, 1.0, 1e-6);
    CHECK(r.terms_used <= 10);
    const auto quad = oracles::quad_cdf([&](double g) { return kappamu_cdf(rf, g, 1e-10).first; },
                                        fso, kSys, 1.0);
    CHECK(std::abs(r.value - quad.value) < 1e-5);
    // the certified bound must hold against the oracle
    CHECK(std::abs(r.value - quad.value) < r.abs_error_est + quad.std_error + 1e-12);
}

TEST_CASE("kappa-mu reduction to the Nakagami display") {
    const FsoChannelParams fso = fig_fso(1e-15, 1, 15.0);
    for (int m : {1, 2, 3}) {
        const KappaMuParams rf(1e-9, m, 10.0);
        for (double g : {0.3, 1.0, 3.0}) {
            const double kmu = cdf_kappamu_gg(rf, fso, kSys, g, 1e-12).value;
            const double nak = testlib::nakagami_gg_cdf(m, 10.0, fso, 1.0, g);
            CHECK(std::abs(kmu - nak) <= 1e-8 * std::max(kmu, 1e-30));
        }
    }
}

TEST_CASE("t=2 closed form against quadrature") {
    const EtaMuParams rf(0.9, 2, 10.0);
    const FsoChannelParams fso = fig_fso(1e-15, 2, 20.0);
    const double closed = cdf_etamu_gg(rf, fso, kSys, 1.0).value;
    const auto quad = oracles::quad_cdf([&](double g) { return etamu_cdf(rf, g); }, fso, kSys, 1.0);
    CHECK(std::abs(closed - quad.value) < 1e-5);
    const KappaMuParams rk(3.0, 2, 10.0);
    const double closed_k = cdf_kappamu_gg(rk, fso, kSys, 1.0, 1e-8).value;
    const auto quad_k = oracles::quad_cdf(
        [&](double g) { return kappamu_cdf(rk, g, 1e-12).first; }, fso, kSys, 1.0);
    CHECK(std::abs(closed_k - quad_k.value) < 1e-5);
}

TEST_CASE("PDF is the CDF derivative and normalizes") {
    const EtaMuParams rf(0.9, 1, 10.0);
    const FsoChannelParams fso = fig_fso(1e-15, 1, 10.0);
    for (double g : {0.1, 1.0, 10.0}) {
        const double h = 1e-5 * g;
        const double fd = (cdf_etamu_gg(rf, fso, kSys, g + h).value -
                           cdf_etamu_gg(rf, fso, kSys, g - h).value) /
                          (2.0 * h);
        const double pdf = pdf_etamu_gg(rf, fso, kSys, g).value;
        CHECK(std::abs(fd - pdf) <= std::max(1e-6, 1e-4 * pdf));
    }
    auto f = [&](double u) {
        const double g = std::exp(u);
        return pdf_etamu_gg(rf, fso, kSys, g).value * g;
    };
    const auto norm = quadrature::integrate_line(f, 0.0, 1e-7, 2000000);
    CHECK(norm.value == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("kappa-mu PDF consistency at the Fig. 3 point") {
    const KappaMuParams rf(3.0, 2, 10.0);
    const FsoChannelParams fso = fig_fso(1e-15, 1, 10.0);
    for (double g : {0.5, 1.0, 5.0}) {
        const double h = 1e-5 * g;
        const double fd = (cdf_kappamu_gg(rf, fso, kSys, g + h, 1e-10).value -
                           cdf_kappamu_gg(rf, fso, kSys, g - h, 1e-10).value) /
                          (2.0 * h);
        const double pdf = pdf_kappamu_gg(rf, fso, kSys, g, 1e-10).value;
        CHECK(std::abs(fd - pdf) <= std::max(1e-6, 1e-4 * pdf));
    }
}

TEST_CASE("PDF matches numerically differentiated quadrature-oracle CDF") {
    const EtaMuParams rf(0.9, 1, 10.0);
    const FsoChannelParams fso = fig_fso(1e-15, 1, 10.0);
    for (double g : {0.1, 1.0, 10.0}) {
        const double h = 1e-4 * g;
        auto cdf = [&](double x) {
            return oracles::quad_cdf([&](double y) { return etamu_cdf(rf, y); }, fso, kSys, x)
                .value;
        };
        const double fd = (cdf(g + h) - cdf(g - h)) / (2.0 * h);
        const double pdf = pdf_etamu_gg(rf, fso, kSys, g).value;
        CHECK(std::abs(fd - pdf) <= std::max(2e-5, 1e-3 * pdf));
    }
}

TEST_CASE("outage basics and monotonicity in the FSO SNR") {
    const EtaMuParams rf(0.9, 2, 10.0);
    // gamma_th -> 0 drives the outage to zero
    const FsoChannelParams fso = fig_fso(1e-15, 1, 10.0);
    CHECK(outage(rf, fso, SystemConfig(1.0, 1e-8)).value < 1e-4);
    double prev = 1.1;
    for (double db = 0.0; db <= 50.0; db += 5.0) {
        const double p = outage(rf, fig_fso(1e-15, 1, db), kSys).value;
        CHECK(p < prev);
        prev = p;
    }
}

TEST_CASE("outage within 3 SE of Monte-Carlo at the Fig. 2 weak-turbulence point") {
    const EtaMuParams rf(0.9, 2, 10.0);
    const FsoChannelParams fso = fig_fso(1e-15, 1, 30.0);
    const double closed = outage(rf, fso, kSys).value;
    const auto mc = oracles::mc_outage(RfParams(rf), fso, kSys, {42, 1000000, 1});
    CHECK(std::abs(closed - mc.value) < 3.0 * mc.std_error);
}

TEST_CASE("outage within 3 SE of Monte-Carlo at the Fig. 4 point") {
    const EtaMuParams rf(0.5, 3, 100.0);  // gamma_bar1 = 20 dB
    const FsoChannelParams fso = fig_fso(9e-15, 1, 10.0);
    const double closed = outage(rf, fso, kSys).value;
    const auto mc = oracles::mc_outage(RfParams(rf), fso, kSys, {42, 1000000, 1});
    CHECK(std::abs(closed - mc.value) < 3.0 * mc.std_error);
}

TEST_CASE("asymptote structure: tau bookkeeping") {
    const FsoChannelParams f1 = fig_fso(1e-15, 1, 10.0);
    CHECK(f1.tau(2).size() == 4);
    CHECK(f1.tau(2) == std::vector<double>{1.2100000000000002, f1.a, f1.b, 2.0});
    const FsoChannelParams f2 = fig_fso(1e-15, 2, 10.0);
    CHECK(f2.tau(0).size() == 7);
    CHECK(f2.omega().size() == 2);
}

TEST_CASE("asymptote accuracy trend over the high-SNR range") {
    // the dominant-residue truncation converges like 1/kappa_t; the relative
    // deviation must fall monotonically across 40..80 dB
    for (auto [eta, mu] : {std::pair{0.9, 1}, {0.5, 2}}) {
        const EtaMuParams rf(eta, mu, 10.0);
        double prev = 1e300;
        for (double db = 40.0; db <= 80.0; db += 10.0) {
            const FsoChannelParams fso = fig_fso(1e-15, 1, db);
            const double exact = outage(rf, fso, kSys).value;
            const double asym = outage_asymptotic_etamu(rf, fso, kSys);
            const double rel = std::abs(asym - exact) / exact;
            CHECK(rel < prev);
            prev = rel;
        }
        // < 5% at 60 dB for these parameter sets
        const FsoChannelParams fso = fig_fso(1e-15, 1, 60.0);
        const double exact = outage(rf, fso, kSys).value;
        const double asym = outage_asymptotic_etamu(rf, fso, kSys);
        CHECK(std::abs(asym - exact) / exact < 0.05);
    }
}

TEST_CASE("kappa-mu asymptote approaches the exact outage") {
    const KappaMuParams rf(3.0, 2, 10.0);
    double prev = 1e300;
    for (double db = 40.0; db <= 80.0; db += 10.0) {
        const FsoChannelParams fso = fig_fso(1e-15, 1, db);
        const double exact = outage(rf, fso, kSys, 1e-10).value;
        const double asym = outage_asymptotic_kappamu(rf, fso, kSys, 1e-10);
        const double rel = std::abs(asym - exact) / exact;
        CHECK(rel < prev);
        prev = rel;
    }
}

TEST_CASE("asymptote pole collision reported") {
    // xi = 1 makes xi^2 = 1 coincide with the j = 1 exponent
    const EtaMuParams rf(0.9, 2, 10.0);
    const FsoChannelParams fso = fig_fso(1e-15, 1, 40.0, 1.0);
    CHECK_THROWS_AS(outage_asymptotic_etamu(rf, fso, kSys), PoleCollisionError);
}

TEST_CASE("BER: worst case at vanishing RF SNR") {
    const EtaMuParams rf(0.9, 1, 1e-6);
    const FsoChannelParams fso = fig_fso(1e-15, 1, 10.0);
    const double b = ber_etamu_gg(rf, fso, kSys, ModulationScheme::nbfsk()).value;
    CHECK(b == doctest::Approx(0.5).epsilon(1e-4));
}

TEST_CASE("BER matches quadrature of the unified integral at the Fig. 5 point") {
    const EtaMuParams rf(0.5, 3, 100.0);  // 20 dB
    const FsoChannelParams fso = fig_fso(9e-15, 1, 10.0);
    for (const auto& mod : {ModulationScheme::cbfsk(), ModulationScheme::nbfsk()}) {
        const double closed = ber_etamu_gg(rf, fso, kSys, mod).value;
        auto cdf = [&](double g) { return cdf_etamu_gg(rf, fso, kSys, g).value; };
        const auto quad = oracles::quad_ber(cdf, mod);
        CHECK(std::abs(closed - quad.value) < 1e-5);
    }
}

TEST_CASE("kappa-mu BER against quadrature") {
    const KappaMuParams rf(3.0, 2, 10.0);
    const FsoChannelParams fso = fig_fso(9e-15, 1, 10.0);
    const ModulationScheme mod = ModulationScheme::cbfsk();
    const double closed = ber_kappamu_gg(rf, fso, kSys, mod, 1e-8).value;
    auto cdf = [&](double g) { return cdf_kappamu_gg(rf, fso, kSys, g, 1e-9).value; };
    const auto quad = oracles::quad_ber(cdf, mod);
    CHECK(std::abs(closed - quad.value) < 1e-5);
}

TEST_CASE("CBFSK beats NBFSK across the Fig. 5 sweep") {
    const FsoChannelParams fso = fig_fso(9e-15, 1, 10.0);
    for (double db = 0.0; db <= 40.0; db += 5.0) {
        const EtaMuParams rf(0.5, 3, std::pow(10.0, db / 10.0));
        const EvalResult c = ber_etamu_gg(rf, fso, kSys, ModulationScheme::cbfsk());
        const EvalResult n = ber_etamu_gg(rf, fso, kSys, ModulationScheme::nbfsk());
        CHECK(c.value + c.abs_error_est < n.value - n.abs_error_est);
    }
}

TEST_CASE("no-pointing BER is the xi -> infinity limit") {
    const EtaMuParams rf(0.5, 3, 100.0);
    for (int t : {1, 2}) {
        const FsoChannelParams fso = fig_fso(9e-15, t, 10.0);
        const FsoChannelParams fso_big_xi = fig_fso(9e-15, t, 10.0, 1e3);
        const ModulationScheme mod = ModulationScheme::dbpsk();
        const double lim = ber_no_pointing_etamu(rf, fso, kSys, mod).value;
        const double big = ber_etamu_gg(rf, fso_big_xi, kSys, mod).value;
        CHECK(std::abs(big - lim) <= 1e-3 * lim);
    }
}

TEST_CASE("no-pointing BER against quadrature with the pure gamma-gamma density") {
    const EtaMuParams rf(0.5, 3, 100.0);
    const ModulationScheme mod = ModulationScheme::dbpsk();
    for (int t : {1, 2}) {
        const FsoChannelParams fso = fig_fso(9e-15, t, 10.0);
        const double closed = ber_no_pointing_etamu(rf, fso, kSys, mod).value;
        auto cdf = [&](double g) {
            return oracles::quad_cdf_no_pointing([&](double y) { return etamu_cdf(rf, y); }, fso,
                                                 kSys, g)
                .value;
        };
        const auto quad = oracles::quad_ber(cdf, mod, 1e-8);
        CHECK(std::abs(closed - quad.value) < 1e-5);
    }
}

TEST_CASE("pointing errors cost BER pointwise") {
    const FsoChannelParams fso = fig_fso(9e-15, 1, 10.0);
    for (double db = 0.0; db <= 40.0; db += 10.0) {
        const EtaMuParams rf(0.5, 3, std::pow(10.0, db / 10.0));
        const double with_pe = ber_etamu_gg(rf, fso, kSys, ModulationScheme::nbfsk()).value;
        const double without = ber_no_pointing_etamu(rf, fso, kSys, ModulationScheme::nbfsk()).value;
        CHECK(without <= with_pe);
    }
}

TEST_CASE("power-exponential-G integral identity") {
    using specfun::MeijerGSpec;
    // u = v = 1 with the exponential kernel: direct quadrature reference
    const MeijerGSpec expg(1, 0, {}, {0.0});
    const double alpha = 0.7, sigma = 1.3, om = 0.9;
    const double closed = mellin_exp_g_integral(alpha, sigma, 1, 1, om, expg);
    auto f = [&](double v) {
        const double x = std::exp(v);
        return std::pow(x, -alpha) * std::exp(-sigma / x - om * x);
    };
    const auto quad = quadrature::integrate_line(f, 0.0, 1e-12);
    CHECK(closed == doctest::Approx(quad.value).epsilon(1e-8));

    // alpha = 0, sigma -> 0 approaches the Mellin transform at the origin
    const MeijerGSpec gg(2, 0, {}, {1.8, 0.9});
    const double lim = mellin_exp_g_integral(0.0, 1e-14, 2, 3, 1.0, gg);
    const double mellin = 1.5 * std::tgamma(1.8) * std::tgamma(0.9);  // (v/u) Gamma(b1) Gamma(b2)
    CHECK(lim == doctest::Approx(mellin).epsilon(1e-5));

    CHECK_THROWS_AS(mellin_exp_g_integral(0.5, 1.0, 2, 4, 1.0, expg), DomainError);  // not coprime
}

TEST_CASE("modulation table") {
    CHECK(ModulationScheme::by_name("CBFSK").p == 0.5);
    CHECK(ModulationScheme::by_name("CBFSK").q == 0.5);
    CHECK(ModulationScheme::by_name("NBFSK").p == 1.0);
    CHECK(ModulationScheme::by_name("CBPSK").q == 1.0);
    CHECK(ModulationScheme::by_name("DBPSK").p == 1.0);
    CHECK_THROWS_AS(ModulationScheme::by_name("QPSK"), DomainError);
    CHECK_THROWS_AS(ModulationScheme::custom(-1.0, 1.0), DomainError);
}

TEST_CASE("boundary behaviour across parameter draws") {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int s = 0; s < 4; ++s) {
        const double gbar1 = 5.0 + 20.0 * u(gen);
        const EtaMuParams rf(0.2 + 0.6 * u(gen), 1 + static_cast<int>(gen() % 2), gbar1);
        const FsoChannelParams fso = fig_fso(s % 2 ? 1e-15 : 9e-15, 1 + (s % 2), 10.0);
        CHECK(cdf_etamu_gg(rf, fso, kSys, 1e-9).value < 1e-3);
        CHECK(cdf_etamu_gg(rf, fso, kSys, 1e9 * gbar1).value > 1.0 - 1e-3);
    }
}
