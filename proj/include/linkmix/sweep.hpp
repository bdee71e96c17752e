// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the linkmix authors

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "linkmix/config.hpp"
#include "linkmix/endtoend.hpp"
#include "linkmix/table.hpp"

namespace linkmix::sweep {

enum class RfFamily { etamu, kappamu };

struct RfSpec {
    RfFamily family = RfFamily::etamu;
    double eta = 0.5;        // etamu only
    double kappa = 1.5;      // kappamu only
    int mu = 1;
    double gamma_bar1 = 10.0;  // linear
};

struct FsoSpec {
    double cn2 = 1e-15;
    double L = 4000.0;
    double D = 0.01;
    double lambda = 1550e-9;
    double xi = 1.1;
    int t = 1;
    double gamma_bar2 = 10.0;  // linear
    double rytov_constant = 0.492;
};

/// One plotted curve: an RF parameter set plus optional per-curve channel
/// overrides (turbulence strength for the weak-to-strong figures, pointing
/// ratio for the modulation figure).
struct CurveSpec {
    std::string label;
    RfSpec rf;
    std::optional<double> cn2;
    std::optional<double> xi;
};

enum class SweepAxis { gamma_bar1_db, gamma_bar2_db, xi, cn2 };

struct OutputSpec {
    bool outage = true;
    bool outage_asym = false;
    std::vector<std::string> ber_schemes;  // by ModulationScheme::by_name
    std::vector<double> cdf_at;            // extra CDF evaluations, linear gamma
    std::vector<double> pdf_at;
};

struct OracleSpec {
    bool mc = true;
    std::int64_t mc_samples = 1000000;
    std::uint64_t seed = 42;
    int n_streams = 1;
    bool quad = true;
};

struct SweepConfig {
    std::vector<CurveSpec> curves;
    FsoSpec fso;
    double c = 1.0;
    double gamma_th = 1.0;  // linear
    SweepAxis axis = SweepAxis::gamma_bar2_db;
    double start = 0.0;
    double stop = 50.0;
    double step = 5.0;
    OutputSpec outputs;
    OracleSpec oracles;
    double tol = 1e-6;
    int threads = 0;  // 0 = hardware concurrency
    std::string name = "sweep";

    void validate() const;
};

/// Build a SweepConfig from an INI config (see README for the schema).
SweepConfig config_from_ini(const config::Ini& ini);

/// Figure-reproduction presets; name is one of fig2, fig3, fig4, fig5.
SweepConfig preset(const std::string& name);

/// Run every requested output and oracle over the sweep grid. Per-point
/// failures become NaN cells with a note; the sweep itself never aborts.
table::ResultTable run_sweep(const SweepConfig& cfg);

/// Kappa-mu series truncation report: terms used and the achieved error bound
/// at tolerances 1e-4, 1e-6, 1e-8 for every sweep point.
table::ResultTable convergence_report(const SweepConfig& cfg);

double db_to_linear(double db);
double linear_to_db(double v);

}  // namespace linkmix::sweep
