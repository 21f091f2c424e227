#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "thinstrip/common.hpp"

namespace thinstrip {

enum class ProfileKind { smooth_poly, broken_line, custom_piecewise };
enum class Side { left, right, two_sided };

/// One polynomial piece of a custom_piecewise profile: sum_k coeffs[k] * x^k
/// on [x_lo, x_hi].
struct PolyPiece {
    double x_lo = 0.0;
    double x_hi = 0.0;
    std::vector<double> coeffs;
};

// Width profile h on [-a, b]: a unique global maximum M at x = 0 and the
// one-sided expansion h = M - c±|x|^m + K±|x|^{m+1} near 0. Closed-form
// parametrized families only, so derivatives are exact. K± is signed
// internally (the lower bracket profile needs -K); user-facing configs
// restrict it to K >= 0.
struct WidthProfile {
    ProfileKind kind = ProfileKind::smooth_poly;
    double max_width = 1.0;      // M
    double contact_order = 2.0;  // m >= 1
    double c_plus = 1.0;
    double c_minus = 1.0;
    double corr_plus = 0.0;   // K+
    double corr_minus = 0.0;  // K-
    double a = 1.0;           // interval [-a, b]
    double b = 1.0;
    std::vector<PolyPiece> pieces;  // custom_piecewise only

    /// h vanishes at an endpoint (the remark-1 case; rejected by the direct
    /// 2D solver, handled through the bracket path).
    bool vanishing_ends() const;
    /// h' jumps at x = 0 (m = 1, or a piecewise kink).
    bool kink_at_origin() const;

    std::string describe() const;
};

double eval_h(const WidthProfile& p, double x);
double eval_h_prime(const WidthProfile& p, double x, Side side = Side::two_sided);

/// v(x) = (pi^2/3 + 1/4) h'(x)^2 / h(x)^2.
double v_potential(const WidthProfile& p, double x, Side side = Side::two_sided);

/// W_eps(x) = (pi^2/eps^2)(1/h^2 - 1/M^2) + v(x); nonnegative, zero only
/// where h = M and h' = 0.
double W_potential(const WidthProfile& p, double eps, double x, Side side = Side::two_sided);

/// Limit potential q(x) = 2 pi^2 M^-3 c± |x|^m.
double q_limit(const WidthProfile& p, double x);

/// Scaling exponent 2/(m+2).
double alpha(const WidthProfile& p);

/// min over the grid of pi^2 (1/h^2 - 1/M^2) / |x|^m, the eps-independent
/// part of W_eps scaled by |x|^m. Positive for any profile with a unique
/// maximum; nonpositive values throw ValidationError.
double sigma_diagnostic(const WidthProfile& p, std::span<const double> grid);

struct BracketPair {
    WidthProfile upper;  // h+ on [-a, b]
    WidthProfile lower;  // h- on [-eta, eta]
    double remainder_bound = 0.0;  // K actually used
    double eta_tilde = 0.0;
};

/// Two-sided sandwich h- <= h <= h+ with identical (M, m, c±) and the
/// corrections ±K|x|^{m+1}. K defaults to a remainder bound fitted on a fine
/// grid; eta_tilde defaults to 90% of the positivity radius of h-.
BracketPair bracket_profiles(const WidthProfile& p,
                             std::optional<double> K = std::nullopt,
                             std::optional<double> eta_tilde = std::nullopt);

struct ValidationReport {
    bool pass = false;
    bool remark1 = false;  // endpoints vanish
    double sigma = 0.0;
    std::vector<std::string> issues;
};

/// Conditions (i)-(ii) on a fine grid: unique maximum at 0, positivity
/// (or endpoint-only vanishing), expansion consistency, sigma > 0.
ValidationReport validate_profile(const WidthProfile& p, int grid_points = 4001);

}  // namespace thinstrip
