// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the linkmix authors

#include "linkmix/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace linkmix::config {

namespace {

std::string trim(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

[[noreturn]] void fail(const std::string& origin, int line_no, const std::string& msg) {
    std::ostringstream os;
    os << origin << ":" << line_no << ": " << msg;
    throw std::runtime_error(os.str());
}

}  // namespace

Ini Ini::parse_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("config: cannot open '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_string(ss.str(), path);
}

Ini Ini::parse_string(const std::string& text, const std::string& origin) {
    Ini ini;
    ini.origin_ = origin;
    std::istringstream is(text);
    std::string line, section;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']') fail(origin, line_no, "unterminated section header");
            section = trim(t.substr(1, t.size() - 2));
            if (section.empty()) fail(origin, line_no, "empty section name");
            ini.sections_[section];
            continue;
        }
        const size_t eq = t.find('=');
        if (eq == std::string::npos) fail(origin, line_no, "expected key = value: '" + t + "'");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty()) fail(origin, line_no, "empty key");
        auto& sec = ini.sections_[section];
        if (sec.count(key)) fail(origin, line_no, "duplicate key '" + key + "'");
        sec[key] = value;
    }
    return ini;
}

bool Ini::has(const std::string& section, const std::string& key) const {
    const auto s = sections_.find(section);
    return s != sections_.end() && s->second.count(key) > 0;
}

std::optional<std::string> Ini::get(const std::string& section, const std::string& key) const {
    const auto s = sections_.find(section);
    if (s == sections_.end()) return std::nullopt;
    const auto k = s->second.find(key);
    if (k == s->second.end()) return std::nullopt;
    return k->second;
}

std::string Ini::get_or(const std::string& section, const std::string& key,
                        const std::string& fallback) const {
    return get(section, key).value_or(fallback);
}

double Ini::get_double(const std::string& section, const std::string& key) const {
    const auto v = get(section, key);
    if (!v) {
        throw std::runtime_error(origin_ + ": missing required key [" + section + "] " + key);
    }
    try {
        size_t pos = 0;
        const double d = std::stod(*v, &pos);
        if (pos != v->size()) throw std::invalid_argument("trailing characters");
        return d;
    } catch (const std::exception&) {
        throw std::runtime_error(origin_ + ": key [" + section + "] " + key +
                                 " is not a number: '" + *v + "'");
    }
}

double Ini::get_double_or(const std::string& section, const std::string& key,
                          double fallback) const {
    return has(section, key) ? get_double(section, key) : fallback;
}

int Ini::get_int_or(const std::string& section, const std::string& key, int fallback) const {
    if (!has(section, key)) return fallback;
    const double d = get_double(section, key);
    const int i = static_cast<int>(d);
    if (static_cast<double>(i) != d) {
        throw std::runtime_error(origin_ + ": key [" + section + "] " + key +
                                 " must be an integer");
    }
    return i;
}

bool Ini::get_bool_or(const std::string& section, const std::string& key, bool fallback) const {
    const auto v = get(section, key);
    if (!v) return fallback;
    std::string s = *v;
    std::transform(s.begin(), s.end(), s.begin(), ::tolower);
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    throw std::runtime_error(origin_ + ": key [" + section + "] " + key +
                             " is not a boolean: '" + *v + "'");
}

}  // namespace linkmix::config
