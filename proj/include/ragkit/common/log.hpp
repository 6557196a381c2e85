#pragma once
// Minimal logging: warnings and info to stderr, silenceable for tests.

#include <iostream>
#include <mutex>
#include <string>

namespace ragkit::util {

enum class LogLevel { Debug = 0, Info = 1, Warn = 2, Silent = 3 };

inline LogLevel& log_threshold() {
    static LogLevel level = LogLevel::Warn;
    return level;
}

inline void log(LogLevel level, const std::string& message) {
    if (level < log_threshold()) return;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    const char* tag = level == LogLevel::Warn ? "warn" : level == LogLevel::Info ? "info" : "debug";
    std::cerr << "[ragkit " << tag << "] " << message << "\n";
}

inline void warn(const std::string& message) { log(LogLevel::Warn, message); }
inline void info(const std::string& message) { log(LogLevel::Info, message); }

}  // namespace ragkit::util
