// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the linkmix authors

#pragma once

#include <string>
#include <vector>

namespace linkmix::table {

/// Sweep output: one row per sweep point, one column per requested quantity,
/// plus a free-text note cell that records per-point failures.
struct ResultTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::vector<std::string> notes;        // one per row; empty when clean
    std::vector<std::string> provenance;   // echoed as leading '#' lines

    void add_row(std::vector<double> row, std::string note = "");
};

/// Render as CSV: provenance block as '#' comments, header row, then data
/// rows with 17 significant digits and '.' decimal separator.
std::string to_csv(const ResultTable& table);

/// Write to_csv(table) to path; errors carry the path context.
void write_csv(const ResultTable& table, const std::string& path);

/// Parse a CSV produced by write_csv (round-trip checks and golden tests).
ResultTable read_csv(const std::string& path);

}  // namespace linkmix::table
