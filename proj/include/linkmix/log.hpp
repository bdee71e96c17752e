// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the linkmix authors

#pragma once

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <mutex>
#include <utility>

namespace linkmix::log {

enum class Level : int { error = 0, info = 1, debug = 2 };

namespace detail {
inline Level& level_ref() {
    static Level lvl = [] {
        const char* env = std::getenv("LINKMIX_LOG");
        if (env == nullptr) return Level::error;
        if (std::strcmp(env, "debug") == 0) return Level::debug;
        if (std::strcmp(env, "info") == 0) return Level::info;
        return Level::error;
    }();
    return lvl;
}
inline std::mutex& mutex_ref() {
    static std::mutex m;
    return m;
}
}  // namespace detail

inline Level level() { return detail::level_ref(); }
inline void set_level(Level lvl) { detail::level_ref() = lvl; }
inline bool enabled(Level lvl) { return static_cast<int>(lvl) <= static_cast<int>(level()); }

template <typename... Args>
void emit(Level lvl, const char* fmt, Args&&... args) {
    if (!enabled(lvl)) return;
    std::lock_guard<std::mutex> lock(detail::mutex_ref());
    const char* tag = lvl == Level::error ? "error" : (lvl == Level::info ? "info" : "debug");
    std::fprintf(stderr, "[linkmix %s] ", tag);
    std::fprintf(stderr, fmt, std::forward<Args>(args)...);
    std::fputc('\n', stderr);
}

template <typename... Args>
void debug(const char* fmt, Args&&... args) { emit(Level::debug, fmt, std::forward<Args>(args)...); }
template <typename... Args>
void info(const char* fmt, Args&&... args) { emit(Level::info, fmt, std::forward<Args>(args)...); }
template <typename... Args>
void error(const char* fmt, Args&&... args) { emit(Level::error, fmt, std::forward<Args>(args)...); }

}  // namespace linkmix::log
