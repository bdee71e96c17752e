// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the linkmix authors

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "linkmix/channels.hpp"
#include "linkmix/quadrature.hpp"
#include "linkmix/rng.hpp"
#include "linkmix/oracles.hpp"
#include "testlib.hpp"

using namespace linkmix;
using namespace linkmix::channels;

namespace {
FsoChannelParams fig_fso(double cn2, int t, double gbar2, double xi = 1.1) {
    return FsoChannelParams(cn2, 4000.0, 0.01, 1550e-9, xi, t, gbar2);
}
}  // namespace

TEST_CASE("derive_turbulence matches the frozen high-precision references") {
    const TurbulenceDerived w = derive_turbulence(1e-15, 4000.0, 0.01, 1550e-9);
    CHECK(w.sigma2_sq == doctest::Approx(0.1011341787311553246024).epsilon(1e-13));
    CHECK(w.d_ap == doctest::Approx(0.159171054610202727713).epsilon(1e-13));
    CHECK(w.a == doctest::Approx(19.84477104392481305974).epsilon(1e-13));
    CHECK(w.b == doctest::Approx(19.30735405248250890052).epsilon(1e-13));
    const TurbulenceDerived m = derive_turbulence(9e-15, 4000.0, 0.01, 1550e-9);
    CHECK(m.sigma2_sq == doctest::Approx(0.9102076085803979214218).epsilon(1e-13));
    CHECK(m.a == doctest::Approx(2.986658950118018145115).epsilon(1e-13));
    CHECK(m.b == doctest::Approx(2.721922342703810155916).epsilon(1e-13));
    const TurbulenceDerived s = derive_turbulence(3e-14, 4000.0, 0.01, 1550e-9);
    CHECK(s.a == doctest::Approx(8.286368058910204594093).epsilon(1e-13));
    CHECK(s.b == doctest::Approx(5.206010560369394170424).epsilon(1e-13));
}

TEST_CASE("derive_turbulence structure") {
    const TurbulenceDerived w1 = derive_turbulence(1e-15, 4000.0, 0.01, 1550e-9);
    const TurbulenceDerived w2 = derive_turbulence(2e-15, 4000.0, 0.01, 1550e-9);
    CHECK(w2.sigma2_sq == doctest::Approx(2.0 * w1.sigma2_sq).epsilon(1e-14));
    const TurbulenceDerived strong = derive_turbulence(3e-14, 4000.0, 0.01, 1550e-9);
    CHECK(strong.a < w1.a);  // stronger turbulence lowers a
    CHECK_THROWS_AS(derive_turbulence(-1e-15, 4000.0, 0.01, 1550e-9), DomainError);
    CHECK_THROWS_AS(derive_turbulence(1e-15, 0.0, 0.01, 1550e-9), DomainError);
}

TEST_CASE("pointing_fraction") {
    CHECK(pointing_fraction(1.1) == doctest::Approx(1.21 / 2.21).epsilon(1e-15));
    CHECK(pointing_fraction(1.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(pointing_fraction(1e8) > 1.0 - 1e-8);
    CHECK_THROWS_AS(pointing_fraction(0.0), DomainError);
}

TEST_CASE("gg_pdf normalization and mean") {
    for (int t : {1, 2}) {
        for (double cn2 : {1e-15, 3e-14}) {
            const FsoChannelParams fso = fig_fso(cn2, t, 10.0);
            auto f = [&](double u) {
                const double g2 = std::exp(u);
                return gg_pdf(fso, g2) * g2;
            };
            const auto norm = quadrature::integrate_line(f, std::log(fso.gamma_bar2), 1e-9);
            CHECK(norm.value == doctest::Approx(1.0).epsilon(1e-6));
            if (t == 1) {
                auto fm = [&](double u) {
                    const double g2 = std::exp(u);
                    return g2 * gg_pdf(fso, g2) * g2;
                };
                const auto mean = quadrature::integrate_line(fm, std::log(fso.gamma_bar2), 1e-8);
                CHECK(mean.value == doctest::Approx(fso.gamma_bar2).epsilon(1e-5));
            }
        }
    }
}

TEST_CASE("etamu_cdf exact coefficients and limits") {
    const EtaMuParams rf(0.5, 3, 10.0);
    CHECK(rf.h == doctest::Approx(1.125).epsilon(1e-15));
    CHECK(rf.H == doctest::Approx(0.375).epsilon(1e-15));
    CHECK(etamu_cdf(rf, 0.0) == 0.0);
    CHECK(etamu_cdf(rf, 1e9) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("etamu_cdf against a 1e7-sample empirical CDF") {
    const EtaMuParams rf(0.5, 3, 10.0);
    rng::SplitMix64 g = rng::SplitMix64::stream(2024, 0);
    const int n = 10000000;
    int below1 = 0, below5 = 0, below15 = 0;
    for (int i = 0; i < n; ++i) {
        const double x = oracles::sample_etamu(rf, g);
        below1 += x < 1.0;
        below5 += x < 5.0;
        below15 += x < 15.0;
    }
    auto near = [&](int count, double gamma) {
        const double p = etamu_cdf(rf, gamma);
        const double se = std::sqrt(p * (1.0 - p) / n);
        CHECK(std::abs(count / static_cast<double>(n) - p) < 4.0 * se + 1e-9);
    };
    near(below1, 1.0);
    near(below5, 5.0);
    near(below15, 15.0);
}

TEST_CASE("etamu_cdf eta <-> 1/eta symmetry") {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> ed(0.05, 0.95), gd(1.0, 40.0);
    for (int i = 0; i < 200; ++i) {
        const double eta = ed(gen);
        const int mu = 1 + static_cast<int>(gen() % 4);
        const EtaMuParams a(eta, mu, 10.0), b(1.0 / eta, mu, 10.0);
        const double g = gd(gen);
        CHECK(etamu_cdf(a, g) == doctest::Approx(etamu_cdf(b, g)).epsilon(1e-10));
    }
}

TEST_CASE("etamu rejects the singular region around eta = 1") {
    CHECK_THROWS_AS(EtaMuParams(1.0, 2, 10.0), DomainError);
    CHECK_THROWS_AS(EtaMuParams(1.0005, 2, 10.0), DomainError);
    CHECK_NOTHROW(EtaMuParams(1.002, 2, 10.0));
}

TEST_CASE("etamu_cdf numerical derivative is nonnegative") {
    std::mt19937_64 gen(31);
    std::uniform_real_distribution<double> ed(0.1, 0.9);
    for (int s = 0; s < 20; ++s) {
        const EtaMuParams rf(ed(gen), 1 + static_cast<int>(gen() % 4), 5.0 + 10.0 * ed(gen));
        for (double g = 0.05; g < 80.0; g *= 1.35) {
            const double h = 1e-5 * g;
            const double d = (etamu_cdf(rf, g + h) - etamu_cdf(rf, g - h)) / (2.0 * h);
            CHECK(d >= -1e-9);
        }
    }
}

TEST_CASE("kappamu_pdf reduces to the exponential density at kappa -> 0, mu = 1") {
    const KappaMuParams rf(1e-12, 1, 10.0);
    for (double g = 0.1; g < 50.0; g *= 2.0) {
        CHECK(kappamu_pdf(rf, g) ==
              doctest::Approx(std::exp(-g / 10.0) / 10.0).epsilon(1e-8));
    }
}

TEST_CASE("kappamu_pdf normalization") {
    const KappaMuParams rf(3.0, 2, 10.0);
    auto f = [&](double u) {
        const double g = std::exp(u);
        return kappamu_pdf(rf, g) * g;
    };
    const auto norm = quadrature::integrate_line(f, std::log(10.0), 1e-9);
    CHECK(norm.value == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("kappamu_cdf truncation and quadrature consistency") {
    const KappaMuParams rf(3.0, 2, 10.0);
    const auto [v, terms] = kappamu_cdf(rf, 1.0, 1e-6);
    CHECK(terms <= 10);
    // independent route: integrate the pdf
    auto f = [&](double u) {
        const double g = std::exp(u);
        return kappamu_pdf(rf, g) * g;
    };
    double acc = 0.0;
    for (double lo = std::log(1e-9); lo < 0.0; lo += 0.5) {
        acc += quadrature::integrate(f, lo, std::min(0.0, lo + 0.5), 1e-11).value;
    }
    CHECK(v == doctest::Approx(acc).epsilon(1e-6));
    CHECK(kappamu_cdf(rf, 0.0, 1e-6).first == 0.0);
    // kappa = 0 collapses to a single term
    const KappaMuParams r0(0.0, 2, 10.0);
    const auto [v0, t0] = kappamu_cdf(r0, 1.0, 1e-6);
    CHECK(t0 == 1);
    CHECK(v0 == doctest::Approx(1.0 - specfun::gamma_upper_reg(2.0, r0.A)).epsilon(1e-12));
}

TEST_CASE("nakagami_cdf basics and the kappa -> 0 limit") {
    CHECK(nakagami_cdf(1, 10.0, 1.0) == doctest::Approx(1.0 - std::exp(-0.1)).epsilon(1e-14));
    CHECK(nakagami_cdf(3, 10.0, 0.0) == 0.0);
    const KappaMuParams rf(1e-9, 3, 10.0);
    for (double g = 0.1; g < 100.0; g *= 1.8) {
        CHECK(std::abs(kappamu_cdf(rf, g, 1e-12).first - nakagami_cdf(3, 10.0, g)) < 1e-6);
    }
}

TEST_CASE("CDF families are proper distribution functions on random draws") {
    std::mt19937_64 gen(41);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int s = 0; s < 20; ++s) {
        const double gbar = 2.0 + 28.0 * u(gen);
        const int mu = 1 + static_cast<int>(gen() % 3);
        double eta = 0.1 + 0.8 * u(gen);
        const EtaMuParams em(eta, mu, gbar);
        const KappaMuParams km(3.0 * u(gen), mu, gbar);
        double prev_e = 0.0, prev_k = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const double g = 1e-3 * std::pow(10.0 * gbar / 1e-3, i / 999.0);
            const double ce = etamu_cdf(em, g);
            const double ck = kappamu_cdf(km, g, 1e-10).first;
            CHECK(ce >= prev_e - 1e-12);
            CHECK(ck >= prev_k - 1e-12);
            CHECK(ce <= 1.0);
            CHECK(ck <= 1.0);
            prev_e = ce;
            prev_k = ck;
        }
        CHECK(etamu_cdf(em, 1e9 * gbar) > 1.0 - 1e-3);
        CHECK(kappamu_cdf(km, 1e9 * gbar, 1e-10).first > 1.0 - 1e-3);
    }
}
