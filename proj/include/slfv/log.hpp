#pragma once

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

namespace slfv::log {

enum class Level : int { error = 0, warn = 1, info = 2, debug = 3 };

/// Log level is read once from the SLFV_LOG environment variable
/// (error|warn|info|debug). Default: warn.
inline Level level() {
    static Level lvl = [] {
        const char* env = std::getenv("SLFV_LOG");
        if (env == nullptr) return Level::warn;
        if (std::strcmp(env, "error") == 0) return Level::error;
        if (std::strcmp(env, "warn") == 0) return Level::warn;
        if (std::strcmp(env, "info") == 0) return Level::info;
        if (std::strcmp(env, "debug") == 0) return Level::debug;
        return Level::warn;
    }();
    return lvl;
}

inline void emit(Level lvl, const char* tag, const std::string& msg) {
    if (static_cast<int>(lvl) <= static_cast<int>(level()))
        std::fprintf(stderr, "[slfv:%s] %s\n", tag, msg.c_str());
}

inline void error(const std::string& msg) { emit(Level::error, "error", msg); }
inline void warn(const std::string& msg) { emit(Level::warn, "warn", msg); }
inline void info(const std::string& msg) { emit(Level::info, "info", msg); }
inline void debug(const std::string& msg) { emit(Level::debug, "debug", msg); }

} // namespace slfv::log
