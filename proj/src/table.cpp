// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the linkmix authors

#include "linkmix/table.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "linkmix/errors.hpp"

namespace linkmix::table {

void ResultTable::add_row(std::vector<double> row, std::string note) {
    if (row.size() != columns.size()) {
        throw DomainError("ResultTable: row width does not match the column count");
    }
    rows.push_back(std::move(row));
    notes.push_back(std::move(note));
}

namespace {

std::string quote_if_needed(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string format_value(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

std::string to_csv(const ResultTable& table) {
    std::ostringstream os;
    for (const std::string& line : table.provenance) os << "# " << line << "\n";
    for (size_t c = 0; c < table.columns.size(); ++c) {
        os << (c ? "," : "") << quote_if_needed(table.columns[c]);
    }
    os << ",note\n";
    for (size_t r = 0; r < table.rows.size(); ++r) {
        for (size_t c = 0; c < table.rows[r].size(); ++c) {
            os << (c ? "," : "") << format_value(table.rows[r][c]);
        }
        os << "," << quote_if_needed(table.notes[r]) << "\n";
    }
    return os.str();
}

void write_csv(const ResultTable& table, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("write_csv: cannot open '" + path + "' for writing");
    f << to_csv(table);
    if (!f) throw std::runtime_error("write_csv: write failed for '" + path + "'");
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

ResultTable read_csv(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("read_csv: cannot open '" + path + "'");
    ResultTable t;
    std::string line;
    bool header_seen = false;
    while (std::getline(f, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            t.provenance.push_back(line.size() > 2 ? line.substr(2) : "");
            continue;
        }
        std::vector<std::string> cells = split_csv_line(line);
        if (!header_seen) {
            header_seen = true;
            if (!cells.empty() && cells.back() == "note") cells.pop_back();
            t.columns = cells;
            continue;
        }
        std::vector<double> row;
        std::string note;
        for (size_t c = 0; c < cells.size(); ++c) {
            if (c < t.columns.size()) {
                row.push_back(cells[c] == "nan" ? std::nan("") : std::stod(cells[c]));
            } else {
                note = cells[c];
            }
        }
        t.add_row(std::move(row), std::move(note));
    }
    return t;
}

}  // namespace linkmix::table
