// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the linkmix authors

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "linkmix/config.hpp"
#include "linkmix/sweep.hpp"
#include "linkmix/table.hpp"

using namespace linkmix;
using namespace linkmix::sweep;

namespace {
std::string tmp_path(const char* name) {
    return std::string("/tmp/linkmix_test_") + name;
}
}  // namespace

TEST_CASE("ini parsing with diagnostics") {
    const auto ini = config::Ini::parse_string("[rf]\nfamily = kappamu\nkappa = 3\nmu=2\n"
                                               "# comment\n[sys]\nc = 1.5\n");
    CHECK(ini.get_or("rf", "family", "") == "kappamu");
    CHECK(ini.get_double("rf", "kappa") == 3.0);
    CHECK(ini.get_double_or("sys", "c", 0.0) == 1.5);
    CHECK_THROWS_WITH_AS(config::Ini::parse_string("[rf]\nbroken line\n", "cfg.ini"),
                         doctest::Contains("cfg.ini:2"), std::runtime_error);
    CHECK_THROWS_WITH_AS(config::Ini::parse_string("[rf]\nmu = two\n[x]\n", "cfg.ini"),
                         doctest::Contains("mu"), std::runtime_error);
    CHECK_THROWS_AS(config::Ini::parse_string("[rf]\nk = 1\nk = 2\n"), std::runtime_error);
}

TEST_CASE("dB conversion applied once at parse time") {
    const auto ini = config::Ini::parse_string(
        "[rf]\nfamily = etamu\neta = 0.5\nmu = 2\ngamma_bar1_db = 10\n"
        "[fso]\ngamma_bar2_db = 20\n[sweep]\naxis = gamma_bar2_db\nstart = 0\nstop = 10\nstep = 5\n");
    const SweepConfig cfg = config_from_ini(ini);
    CHECK(cfg.curves.at(0).rf.gamma_bar1 == doctest::Approx(10.0).epsilon(1e-15));
    CHECK(cfg.fso.gamma_bar2 == doctest::Approx(100.0).epsilon(1e-15));
    CHECK(db_to_linear(0.0) == 1.0);
}

TEST_CASE("csv round-trip is bit exact") {
    table::ResultTable t;
    t.columns = {"x", "y"};
    t.provenance = {"alpha", "beta"};
    t.add_row({1.0 / 3.0, 6.02214076e23});
    t.add_row({-0.1, std::nan("")}, "y: failed");
    const std::string path = tmp_path("roundtrip.csv");
    table::write_csv(t, path);
    const table::ResultTable r = table::read_csv(path);
    REQUIRE(r.columns == t.columns);
    REQUIRE(r.rows.size() == 2);
    CHECK(r.rows[0][0] == 1.0 / 3.0);
    CHECK(r.rows[0][1] == 6.02214076e23);
    CHECK(std::isnan(r.rows[1][1]));
    CHECK(r.rows[1][0] == -0.1);
    CHECK(r.notes[1] == "y: failed");
    CHECK(r.provenance == t.provenance);
}

TEST_CASE("empty table renders header and provenance only") {
    table::ResultTable t;
    t.columns = {"x"};
    t.provenance = {"cfg"};
    const std::string csv = table::to_csv(t);
    CHECK(csv == "# cfg\nx,note\n");
}

TEST_CASE("presets encode the figure parameter sets") {
    const SweepConfig f2 = preset("fig2");
    CHECK(f2.fso.cn2 == 1e-15);
    CHECK(f2.fso.L == 4000.0);
    CHECK(f2.fso.D == 0.01);
    CHECK(f2.fso.lambda == 1550e-9);
    CHECK(f2.fso.xi == 1.1);
    CHECK(f2.fso.t == 1);
    CHECK(f2.c == 1.0);
    CHECK(f2.gamma_th == 1.0);  // 0 dB
    REQUIRE(f2.curves.size() == 4);
    CHECK(f2.curves[0].rf.gamma_bar1 == doctest::Approx(10.0));
    CHECK(f2.axis == SweepAxis::gamma_bar2_db);
    CHECK(f2.stop == 50.0);

    const SweepConfig f3 = preset("fig3");
    CHECK(f3.curves.size() == 3);
    CHECK(f3.curves[0].rf.family == RfFamily::kappamu);

    const SweepConfig f4 = preset("fig4");
    REQUIRE(f4.curves.size() == 3);
    CHECK(*f4.curves[0].cn2 == 1e-15);
    CHECK(*f4.curves[1].cn2 == 9e-15);
    CHECK(*f4.curves[2].cn2 == 3e-14);
    CHECK(f4.fso.gamma_bar2 == doctest::Approx(10.0));
    CHECK(f4.curves[0].rf.eta == 0.5);
    CHECK(f4.curves[0].rf.mu == 3);

    const SweepConfig f5 = preset("fig5");
    REQUIRE(f5.curves.size() == 2);
    CHECK(*f5.curves[0].xi == 1.1);
    CHECK(f5.fso.cn2 == 9e-15);
    CHECK(f5.outputs.ber_schemes == std::vector<std::string>{"CBFSK", "NBFSK"});

    CHECK_THROWS_AS(preset("fig9"), DomainError);
}

TEST_CASE("empty sweep yields a single row") {
    SweepConfig cfg = preset("fig2");
    cfg.start = cfg.stop = 30.0;
    cfg.curves.resize(1);
    cfg.oracles.mc = false;
    cfg.oracles.quad = false;
    cfg.outputs.outage_asym = false;
    const table::ResultTable t = run_sweep(cfg);
    REQUIRE(t.rows.size() == 1);
    CHECK(t.rows[0][0] == 30.0);
    CHECK(t.rows[0][1] > 0.0);
    CHECK(t.notes[0].empty());
}

TEST_CASE("per-point failures become NaN cells with a note") {
    SweepConfig cfg = preset("fig2");
    cfg.curves.resize(1);
    cfg.curves[0].xi = 1.0;  // xi^2 = 1 collides with the j = 1 exponent in the asymptote
    cfg.start = cfg.stop = 20.0;
    cfg.oracles.mc = false;
    cfg.oracles.quad = false;
    const table::ResultTable t = run_sweep(cfg);
    REQUIRE(t.rows.size() == 1);
    bool有 = false;
    (void)有;
    size_t asym_col = 0;
    for (size_t c = 0; c < t.columns.size(); ++c) {
        if (t.columns[c].rfind("outage_asym", 0) == 0) asym_col = c;
    }
    REQUIRE(asym_col > 0);
    CHECK(std::isnan(t.rows[0][asym_col]));
    CHECK(t.notes[0].find("outage_asym") != std::string::npos);
    // the exact outage survives next to the failed column
    CHECK(t.rows[0][1] == t.rows[0][1]);
}

TEST_CASE("convergence report: terms within ten at 1e-6 on the kappa-mu grid") {
    SweepConfig cfg = preset("fig3");
    cfg.oracles.mc = false;
    cfg.oracles.quad = false;
    const table::ResultTable t = convergence_report(cfg);
    REQUIRE(t.rows.size() == 11);
    // columns: axis, then (terms, bound) x 3 tolerances x 3 curves
    REQUIRE(t.columns.size() == 1 + 18);
    for (const auto& row : t.rows) {
        for (size_t c = 1; c < row.size(); c += 2) {
            const double terms_midtol = row[c];
            CHECK(terms_midtol <= 200);
        }
        // terms at 1e-4 never exceed terms at 1e-8 for the same curve
        for (int curve = 0; curve < 3; ++curve) {
            const double t4 = row[1 + curve * 6 + 0];
            const double t8 = row[1 + curve * 6 + 4];
            CHECK(t4 <= t8);
        }
    }
}

TEST_CASE("kappa = 0 needs a single series term everywhere") {
    SweepConfig cfg = preset("fig3");
    cfg.curves.resize(1);
    cfg.curves[0].rf.kappa = 0.0;
    cfg.oracles.mc = false;
    cfg.oracles.quad = false;
    cfg.step = 25.0;
    const table::ResultTable t = convergence_report(cfg);
    for (const auto& row : t.rows) {
        CHECK(row[1] == 1.0);
        CHECK(row[3] == 1.0);
        CHECK(row[5] == 1.0);
    }
}

TEST_CASE("config overrides a preset") {
    const auto ini = config::Ini::parse_string(
        "[sweep]\npreset = fig2\nstart = 10\nstop = 20\nstep = 10\n[oracles]\nmc = false\nquad = "
        "false\n");
    const SweepConfig cfg = config_from_ini(ini);
    CHECK(cfg.curves.size() == 4);
    CHECK(cfg.start == 10.0);
    CHECK(cfg.oracles.mc == false);
}
