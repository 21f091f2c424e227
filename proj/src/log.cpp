#include "thinstrip/log.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <mutex>

namespace thinstrip::log {

namespace {

Level parse_env() {
    const char* v = std::getenv("THINSTRIP_LOG");
    if (!v) return Level::info;
    if (std::strcmp(v, "error") == 0) return Level::error;
    if (std::strcmp(v, "info") == 0) return Level::info;
    if (std::strcmp(v, "debug") == 0) return Level::debug;
    std::fprintf(stderr, "[thinstrip] unknown THINSTRIP_LOG value '%s', using 'info'\n", v);
    return Level::info;
}

std::atomic<int> g_level{-1};
std::mutex g_mutex;

}  // namespace

Level level() {
    int l = g_level.load(std::memory_order_relaxed);
    if (l < 0) {
        l = static_cast<int>(parse_env());
        g_level.store(l, std::memory_order_relaxed);
    }
    return static_cast<Level>(l);
}

void set_level(Level lvl) { g_level.store(static_cast<int>(lvl), std::memory_order_relaxed); }

void write(Level lvl, const std::string& msg) {
    static const char* names[] = {"error", "info", "debug"};
    std::lock_guard<std::mutex> lk(g_mutex);
    std::fprintf(stderr, "[thinstrip:%s] %s\n", names[static_cast<int>(lvl)], msg.c_str());
}

}  // namespace thinstrip::log
