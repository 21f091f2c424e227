#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace thinstrip {

// Error taxonomy mirrors the CLI exit codes: config (2), validation (3),
// solver (4). Everything else is a plain logic error.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A real-valued function sampled on a 1D grid (grid strictly increasing).
struct GridFunction {
    std::vector<double> grid;
    std::vector<double> values;

    std::size_t size() const { return grid.size(); }
};

/// Trapezoid rule for samples on a (possibly non-uniform) grid.
double trapezoid(std::span<const double> x, std::span<const double> f);

/// L2(grid) norm via the trapezoid rule.
double trapezoid_norm(const GridFunction& f);

/// Piecewise-linear resampling onto a new grid; values outside the source
/// grid are taken as zero. Resampling is always this explicit call, never
/// hidden inside a distance computation.
GridFunction resample_linear(const GridFunction& f, std::span<const double> new_grid);

/// Shortest double-to-text round-trip formatting (17 significant digits).
std::string format_g17(double v);

}  // namespace thinstrip
