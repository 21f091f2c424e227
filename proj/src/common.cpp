#include "thinstrip/common.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdio>

namespace thinstrip {

double trapezoid(std::span<const double> x, std::span<const double> f) {
    assert(x.size() == f.size());
    double s = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) {
        s += 0.5 * (x[i] - x[i - 1]) * (f[i] + f[i - 1]);
    }
    return s;
}

double trapezoid_norm(const GridFunction& f) {
    double s = 0.0;
    for (std::size_t i = 1; i < f.grid.size(); ++i) {
        const double a = f.values[i - 1], b = f.values[i];
        s += 0.5 * (f.grid[i] - f.grid[i - 1]) * (a * a + b * b);
    }
    return std::sqrt(std::max(0.0, s));
}

GridFunction resample_linear(const GridFunction& f, std::span<const double> new_grid) {
    GridFunction out;
    out.grid.assign(new_grid.begin(), new_grid.end());
    out.values.resize(new_grid.size());
    const auto& xs = f.grid;
    for (std::size_t i = 0; i < new_grid.size(); ++i) {
        const double x = new_grid[i];
        if (xs.empty() || x < xs.front() || x > xs.back()) {
            out.values[i] = 0.0;
            continue;
        }
        auto it = std::upper_bound(xs.begin(), xs.end(), x);
        if (it == xs.begin()) {
            out.values[i] = f.values.front();
            continue;
        }
        std::size_t hi = static_cast<std::size_t>(it - xs.begin());
        if (hi >= xs.size()) hi = xs.size() - 1;
        const std::size_t lo = hi - 1;
        const double w = (xs[hi] == xs[lo]) ? 0.0 : (x - xs[lo]) / (xs[hi] - xs[lo]);
        out.values[i] = (1.0 - w) * f.values[lo] + w * f.values[hi];
    }
    return out;
}

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace thinstrip
