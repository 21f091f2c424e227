#pragma once

#include <sstream>
#include <string>

namespace thinstrip::log {

enum class Level { error = 0, info = 1, debug = 2 };

// Level comes from THINSTRIP_LOG (error|info|debug) on first use; default info.
Level level();
void set_level(Level lvl);
void write(Level lvl, const std::string& msg);

template <typename... Args>
void emit(Level lvl, Args&&... args) {
    if (lvl > level()) return;
    std::ostringstream os;
    (os << ... << args);
    write(lvl, os.str());
}

template <typename... Args>
void error(Args&&... args) {
    emit(Level::error, std::forward<Args>(args)...);
}
template <typename... Args>
void info(Args&&... args) {
    emit(Level::info, std::forward<Args>(args)...);
}
template <typename... Args>
void debug(Args&&... args) {
    emit(Level::debug, std::forward<Args>(args)...);
}

}  // namespace thinstrip::log
