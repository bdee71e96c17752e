// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the linkmix authors

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "linkmix/channels.hpp"
#include "linkmix/config.hpp"
#include "linkmix/endtoend.hpp"
#include "linkmix/log.hpp"
#include "linkmix/oracles.hpp"
#include "linkmix/sweep.hpp"
#include "linkmix/table.hpp"
#include "linkmix/version.hpp"

namespace {

using namespace linkmix;

struct CommonOpts {
    std::string config_path;
    std::string out_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> samples;
    std::optional<double> tol;
    bool no_mc = false;
    bool no_quad = false;
    bool verbose = false;
};

void apply_overrides(sweep::SweepConfig& cfg, const CommonOpts& opts) {
    if (opts.seed) cfg.oracles.seed = *opts.seed;
    if (opts.samples) cfg.oracles.mc_samples = *opts.samples;
    if (opts.tol) cfg.tol = *opts.tol;
    if (opts.no_mc) cfg.oracles.mc = false;
    if (opts.no_quad) cfg.oracles.quad = false;
    if (opts.verbose) log::set_level(log::Level::debug);
}

void emit(const table::ResultTable& t, const CommonOpts& opts) {
    if (opts.out_path.empty()) {
        std::cout << table::to_csv(t);
    } else {
        table::write_csv(t, opts.out_path);
        std::fprintf(stderr, "wrote %s (%zu rows)\n", opts.out_path.c_str(), t.rows.size());
    }
}

sweep::SweepConfig load_config(const CommonOpts& opts) {
    if (opts.config_path.empty()) {
        throw std::runtime_error("this subcommand requires --config <path.ini>");
    }
    return sweep::config_from_ini(config::Ini::parse_file(opts.config_path));
}

int run_selftest();

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mixed RF/FSO dual-hop link performance calculator"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    CommonOpts opts;
    app.add_option("--config", opts.config_path, "INI config file");
    app.add_option("--out", opts.out_path, "output CSV path (stdout when omitted)");
    app.add_option("--seed", opts.seed, "Monte-Carlo seed");
    app.add_option("--samples", opts.samples, "Monte-Carlo sample count");
    app.add_option("--tol", opts.tol, "series truncation tolerance");
    app.add_flag("--no-mc", opts.no_mc, "disable the Monte-Carlo oracle columns");
    app.add_flag("--no-quad", opts.no_quad, "disable the quadrature oracle columns");
    app.add_flag("--verbose", opts.verbose, "kernel diagnostics on stderr");

    auto* eval = app.add_subcommand("eval", "single-point evaluation from a config");
    auto* sweep_cmd = app.add_subcommand("sweep", "parameter sweep from a config");
    auto* figure = app.add_subcommand("figure", "figure-reproduction presets");
    std::string fig_name;
    figure->add_option("name", fig_name, "fig2|fig3|fig4|fig5")->required();
    auto* converge = app.add_subcommand("converge", "kappa-mu truncation report");
    auto* selftest = app.add_subcommand("selftest", "run the built-in invariant checks");

    CLI11_PARSE(app, argc, argv);

    try {
        if (eval->parsed()) {
            sweep::SweepConfig cfg = load_config(opts);
            apply_overrides(cfg, opts);
            cfg.stop = cfg.start;  // single point
            emit(sweep::run_sweep(cfg), opts);
        } else if (sweep_cmd->parsed()) {
            sweep::SweepConfig cfg = load_config(opts);
            apply_overrides(cfg, opts);
            emit(sweep::run_sweep(cfg), opts);
        } else if (figure->parsed()) {
            sweep::SweepConfig cfg = sweep::preset(fig_name);
            if (!opts.config_path.empty()) {
                cfg = sweep::config_from_ini(config::Ini::parse_file(opts.config_path));
            }
            apply_overrides(cfg, opts);
            emit(sweep::run_sweep(cfg), opts);
        } else if (converge->parsed()) {
            sweep::SweepConfig cfg =
                opts.config_path.empty() ? sweep::preset("fig3") : load_config(opts);
            apply_overrides(cfg, opts);
            emit(sweep::convergence_report(cfg), opts);
        } else if (selftest->parsed()) {
            if (opts.verbose) log::set_level(log::Level::debug);
            return run_selftest();
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}

namespace {

int run_selftest() {
    int failures = 0;
    auto check = [&](const char* name, bool ok) {
        std::printf("[%s] %s\n", ok ? "PASS" : "FAIL", name);
        if (!ok) ++failures;
    };

    using channels::EtaMuParams;
    using channels::FsoChannelParams;
    using channels::KappaMuParams;

    // kernel identities
    {
        bool ok = true;
        const specfun::MeijerGSpec exp_spec(1, 0, {}, {0.0});
        for (double z : {1e-6, 1e-3, 1.0, 10.0, 100.0}) {
            const double v = specfun::meijer_g(exp_spec, z).value;
            ok = ok && std::abs(v - std::exp(-z)) <= 1e-10 * std::exp(-z);
        }
        check("meijer-g exponential identity", ok);
        const specfun::MeijerGSpec k_spec(2, 0, {}, {0.5, -0.5});
        const double v = specfun::meijer_g(k_spec, 1.0).value;
        check("meijer-g bessel-k identity", std::abs(v - 0.2797317636330448545692) < 1e-10);
    }
    // marginal CDF shapes
    {
        const EtaMuParams rf(0.5, 3, 10.0);
        bool ok = channels::etamu_cdf(rf, 0.0) == 0.0 && channels::etamu_cdf(rf, 1e9) > 1 - 1e-9;
        double prev = 0.0;
        for (double g = 0.1; g < 100.0; g *= 1.5) {
            const double c = channels::etamu_cdf(rf, g);
            ok = ok && c >= prev;
            prev = c;
        }
        check("eta-mu CDF monotone with correct limits", ok);
        const KappaMuParams rk(2.0, 2, 10.0);
        ok = true;
        prev = 0.0;
        for (double g = 0.1; g < 100.0; g *= 1.5) {
            const double c = channels::kappamu_cdf(rk, g, 1e-10).first;
            ok = ok && c >= prev && c <= 1.0;
            prev = c;
        }
        check("kappa-mu CDF monotone in [0,1]", ok);
    }
    // reduction: kappa->0 equals Nakagami
    {
        const KappaMuParams rk(1e-9, 3, 8.0);
        bool ok = true;
        for (double g = 0.25; g < 64.0; g *= 2.0) {
            ok = ok && std::abs(channels::kappamu_cdf(rk, g, 1e-12).first -
                                channels::nakagami_cdf(3, 8.0, g)) < 1e-6;
        }
        check("kappa-mu -> Nakagami reduction", ok);
    }
    // end-to-end CDF against the quadrature oracle at one point
    {
        const EtaMuParams rf(0.9, 2, 10.0);
        const FsoChannelParams fso(1e-15, 4000.0, 0.01, 1550e-9, 1.1, 1, 10.0);
        const endtoend::SystemConfig sys(1.0, 1.0);
        const double closed = endtoend::outage(rf, fso, sys).value;
        const double quad =
            oracles::quad_cdf([&](double g) { return channels::etamu_cdf(rf, g); }, fso, sys,
                              sys.gamma_th)
                .value;
        check("closed form vs quadrature oracle", std::abs(closed - quad) < 1e-5);
    }
    std::printf("%s\n", failures == 0 ? "selftest: all checks passed" : "selftest: FAILURES");
    return failures == 0 ? 0 : 1;
}

}  // namespace
