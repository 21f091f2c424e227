#include "thinstrip/profile.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace thinstrip {

namespace {

constexpr double kPi = std::numbers::pi;

void check_domain(const WidthProfile& p, double x) {
    const double slack = 1e-12 * (p.a + p.b);
    if (x < -p.a - slack || x > p.b + slack) {
        throw std::domain_error("x = " + format_g17(x) + " outside profile interval [" +
                                format_g17(-p.a) + ", " + format_g17(p.b) + "]");
    }
}

const PolyPiece& find_piece(const WidthProfile& p, double x, Side side) {
    for (std::size_t i = 0; i < p.pieces.size(); ++i) {
        const auto& pc = p.pieces[i];
        const bool last = (i + 1 == p.pieces.size());
        if (x < pc.x_lo) continue;
        if (x < pc.x_hi || last) return pc;
        if (x == pc.x_hi) {
            // breakpoint: side decides (right continues into the next piece)
            if (side == Side::left) return pc;
            continue;
        }
    }
    throw std::domain_error("x = " + format_g17(x) + " not covered by any piece");
}

double poly_eval(const std::vector<double>& c, double x) {
    double v = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) v = v * x + c[k];
    return v;
}

double poly_eval_deriv(const std::vector<double>& c, double x) {
    double v = 0.0;
    for (std::size_t k = c.size(); k-- > 1;) v = v * x + c[k] * static_cast<double>(k);
    return v;
}

double closed_form_h(const WidthProfile& p, double x) {
    const double ax = std::fabs(x);
    const double c = (x >= 0.0) ? p.c_plus : p.c_minus;
    const double K = (x >= 0.0) ? p.corr_plus : p.corr_minus;
    const double m = p.contact_order;
    return p.max_width - c * std::pow(ax, m) + K * std::pow(ax, m + 1.0);
}

double closed_form_h_prime(const WidthProfile& p, double x, bool from_right) {
    const double ax = std::fabs(x);
    const double sgn = from_right ? 1.0 : -1.0;
    const double c = from_right ? p.c_plus : p.c_minus;
    const double K = from_right ? p.corr_plus : p.corr_minus;
    const double m = p.contact_order;
    const double dm = (m == 1.0) ? 1.0 : m * std::pow(ax, m - 1.0);
    return sgn * (-c * dm + K * (m + 1.0) * std::pow(ax, m));
}

}  // namespace

bool WidthProfile::vanishing_ends() const {
    const double tol = 1e-12 * max_width;
    return eval_h(*this, -a) <= tol || eval_h(*this, b) <= tol;
}

bool WidthProfile::kink_at_origin() const {
    if (kind == ProfileKind::custom_piecewise) {
        const double dl = eval_h_prime(*this, 0.0, Side::left);
        const double dr = eval_h_prime(*this, 0.0, Side::right);
        return std::fabs(dl - dr) > 1e-10 * (1.0 + std::fabs(dl) + std::fabs(dr));
    }
    return contact_order == 1.0;
}

std::string WidthProfile::describe() const {
    std::ostringstream os;
    switch (kind) {
        case ProfileKind::smooth_poly: os << "smooth_poly"; break;
        case ProfileKind::broken_line: os << "broken_line"; break;
        case ProfileKind::custom_piecewise: os << "custom_piecewise"; break;
    }
    os << " M=" << max_width << " m=" << contact_order << " c+=" << c_plus
       << " c-=" << c_minus;
    if (corr_plus != 0.0 || corr_minus != 0.0) os << " K+=" << corr_plus << " K-=" << corr_minus;
    os << " I=[" << -a << "," << b << "]";
    return os.str();
}

double eval_h(const WidthProfile& p, double x) {
    check_domain(p, x);
    if (p.kind == ProfileKind::custom_piecewise) {
        return poly_eval(find_piece(p, x, Side::two_sided).coeffs, x);
    }
    return closed_form_h(p, x);
}

double eval_h_prime(const WidthProfile& p, double x, Side side) {
    check_domain(p, x);
    if (p.kind == ProfileKind::custom_piecewise) {
        if (side == Side::two_sided) {
            const double dl = poly_eval_deriv(find_piece(p, x, Side::left).coeffs, x);
            const double dr = poly_eval_deriv(find_piece(p, x, Side::right).coeffs, x);
            if (std::fabs(dl - dr) > 1e-10 * (1.0 + std::fabs(dl) + std::fabs(dr))) {
                throw std::domain_error("derivative undefined at x = " + format_g17(x) +
                                        " (one-sided values differ); pass a side");
            }
            return dr;
        }
        return poly_eval_deriv(find_piece(p, x, side).coeffs, x);
    }
    if (x == 0.0) {
        if (side == Side::two_sided) {
            if (p.kink_at_origin()) {
                throw std::domain_error("derivative undefined at the x=0 kink; pass a side");
            }
            return 0.0;  // m > 1: both one-sided limits vanish
        }
        return closed_form_h_prime(p, 0.0, side == Side::right);
    }
    return closed_form_h_prime(p, x, x > 0.0);
}

double v_potential(const WidthProfile& p, double x, Side side) {
    const double h = eval_h(p, x);
    if (h <= 0.0) {
        throw SolverError("v(x) singular: h(" + format_g17(x) + ") = " + format_g17(h));
    }
    const double hp = eval_h_prime(p, x, side);
    return (kPi * kPi / 3.0 + 0.25) * (hp * hp) / (h * h);
}

double W_potential(const WidthProfile& p, double eps, double x, Side side) {
    if (eps <= 0.0) throw std::domain_error("eps must be positive");
    const double h = eval_h(p, x);
    if (h <= 0.0) {
        throw SolverError("W_eps(x) singular: h(" + format_g17(x) + ") = " + format_g17(h));
    }
    const double M = p.max_width;
    const double gap = 1.0 / (h * h) - 1.0 / (M * M);
    return (kPi * kPi / (eps * eps)) * gap + v_potential(p, x, side);
}

double q_limit(const WidthProfile& p, double x) {
    if (x == 0.0) return 0.0;
    const double c = (x > 0.0) ? p.c_plus : p.c_minus;
    const double M = p.max_width;
    return 2.0 * kPi * kPi * c * std::pow(std::fabs(x), p.contact_order) / (M * M * M);
}

double alpha(const WidthProfile& p) { return 2.0 / (p.contact_order + 2.0); }

double sigma_diagnostic(const WidthProfile& p, std::span<const double> grid) {
    if (grid.empty()) throw std::domain_error("sigma_diagnostic: empty grid");
    const double M = p.max_width;
    double best = std::numeric_limits<double>::infinity();
    double best_x = 0.0;
    for (double x : grid) {
        if (x == 0.0) throw std::domain_error("sigma_diagnostic: grid must avoid x = 0");
        const double h = eval_h(p, x);
        if (h <= 0.0) {
            throw ValidationError("sigma_diagnostic: h <= 0 at x = " + format_g17(x));
        }
        const double val =
            kPi * kPi * (1.0 / (h * h) - 1.0 / (M * M)) / std::pow(std::fabs(x), p.contact_order);
        if (val < best) {
            best = val;
            best_x = x;
        }
    }
    if (!(best > 0.0)) {
        throw ValidationError("sigma_diagnostic nonpositive (" + format_g17(best) + ") at x = " +
                              format_g17(best_x) + ": profile violates condition (i)");
    }
    return best;
}

BracketPair bracket_profiles(const WidthProfile& p, std::optional<double> K_opt,
                             std::optional<double> eta_opt) {
    const double M = p.max_width;
    const double m = p.contact_order;

    double K;
    if (K_opt) {
        K = *K_opt;
        if (K < 0.0) throw std::domain_error("bracket remainder bound K must be >= 0");
    } else {
        // Fit the remainder bound |M - h - c|x|^m| / |x|^{m+1} on a fine grid.
        K = 0.0;
        const int n = 4000;
        for (int i = 1; i <= n; ++i) {
            const double t = static_cast<double>(i) / n;
            for (double x : {-p.a * t, p.b * t}) {
                const double c = (x > 0.0) ? p.c_plus : p.c_minus;
                const double rem =
                    std::fabs(M - eval_h(p, x) - c * std::pow(std::fabs(x), m));
                K = std::max(K, rem / std::pow(std::fabs(x), m + 1.0));
            }
        }
    }

    BracketPair out;
    out.remainder_bound = K;

    WidthProfile base = p;
    base.kind = (p.kind == ProfileKind::custom_piecewise) ? ProfileKind::smooth_poly : p.kind;
    if (base.kind == ProfileKind::broken_line && K != 0.0) base.kind = ProfileKind::smooth_poly;
    base.pieces.clear();

    out.upper = base;
    out.upper.corr_plus = K;
    out.upper.corr_minus = K;

    // Positivity radius of h- = M - c|x|^m - K|x|^{m+1} per side, by bisection.
    auto root = [&](double c, double limit) {
        auto hm = [&](double x) { return M - c * std::pow(x, m) - K * std::pow(x, m + 1.0); };
        if (hm(limit) > 0.0) return limit;
        double lo = 0.0, hi = limit;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            (hm(mid) > 0.0 ? lo : hi) = mid;
        }
        return lo;
    };
    double eta;
    if (eta_opt) {
        eta = *eta_opt;
        if (eta <= 0.0 || eta > std::min(p.a, p.b)) {
            throw std::domain_error("eta_tilde must lie in (0, min(a,b)]");
        }
    } else {
        const double r = std::min(root(p.c_plus, p.b), root(p.c_minus, p.a));
        eta = 0.9 * std::min(r, std::min(p.a, p.b));
    }
    out.eta_tilde = eta;

    out.lower = base;
    out.lower.corr_plus = -K;
    out.lower.corr_minus = -K;
    out.lower.a = eta;
    out.lower.b = eta;

    // h- must stay positive on its segment, and the sandwich must hold.
    const int ng = 1000;
    for (int i = 0; i <= ng; ++i) {
        const double x = -eta + (2.0 * eta) * i / ng;
        if (eval_h(out.lower, x) <= 0.0) {
            throw ValidationError("bracket lower profile nonpositive at x = " + format_g17(x) +
                                  "; shrink eta_tilde");
        }
        if (eval_h(out.lower, x) > eval_h(p, x) + 1e-12 * M) {
            throw ValidationError("bracket construction failed: h- > h at x = " + format_g17(x) +
                                  " (expansion remainder not of order m+1; increase K)");
        }
    }
    for (int i = 0; i <= ng; ++i) {
        const double x = -p.a + (p.a + p.b) * i / ng;
        if (eval_h(out.upper, x) < eval_h(p, x) - 1e-12 * M) {
            throw ValidationError("bracket construction failed: h+ < h at x = " + format_g17(x) +
                                  " (expansion remainder not of order m+1; increase K)");
        }
        if (x != 0.0 && eval_h(out.upper, x) >= M) {
            throw ValidationError("bracket upper profile reaches the maximum at x = " +
                                  format_g17(x) + "; remainder bound too large for this interval");
        }
    }
    return out;
}

ValidationReport validate_profile(const WidthProfile& p, int grid_points) {
    ValidationReport rep;
    auto fail = [&rep](std::string msg) { rep.issues.push_back(std::move(msg)); };

    if (!(p.max_width > 0.0)) fail("M must be positive");
    if (!(p.contact_order >= 1.0)) fail("contact order m must be >= 1");
    if (!(p.c_plus > 0.0) || !(p.c_minus > 0.0)) fail("c+ and c- must be positive");
    if (!(p.a > 0.0) || !(p.b > 0.0)) fail("interval bounds a, b must be positive");
    if (!rep.issues.empty()) return rep;

    const double M = p.max_width;
    const double tol = 1e-9 * M;
    if (std::fabs(eval_h(p, 0.0) - M) > tol) {
        fail("h(0) = " + format_g17(eval_h(p, 0.0)) + " differs from M = " + format_g17(M));
    }

    // condition (i): unique global maximum at 0; positivity (interior at least)
    std::vector<double> max_hits;
    bool interior_nonpos = false;
    double worst_x = 0.0;
    const int n = grid_points;
    for (int i = 0; i <= n; ++i) {
        const double x = -p.a + (p.a + p.b) * i / n;
        if (std::fabs(x) < 0.5 * (p.a + p.b) / n) continue;
        const double h = eval_h(p, x);
        if (h >= M - tol) max_hits.push_back(x);
        const bool endpoint = (i == 0 || i == n);
        if (h <= 0.0 && !endpoint) {
            interior_nonpos = true;
            worst_x = x;
        }
    }
    if (!max_hits.empty()) {
        std::string msg = "h attains its maximum away from 0 at x = ";
        for (std::size_t i = 0; i < max_hits.size() && i < 8; ++i) {
            if (i) msg += ", ";
            msg += format_g17(max_hits[i]);
        }
        fail(msg);
    }
    if (interior_nonpos) fail("h <= 0 in the interior at x = " + format_g17(worst_x));
    rep.remark1 = p.vanishing_ends();

    // condition (ii): expansion consistency near 0. The remainder
    // h - (M - c|x|^m) must be O(|x|^{m+1}): its ratio to |x|^{m+1} near 0
    // must not exceed the bound fitted on a moderate range.
    {
        double K_far = 0.0, K_near = 0.0;
        const double reach = 0.25 * std::min(p.a, p.b);
        for (int i = 1; i <= 400; ++i) {
            const double t = reach * i / 400.0;
            for (double x : {-t, t}) {
                const double c = (x > 0.0) ? p.c_plus : p.c_minus;
                const double rem = std::fabs(M - eval_h(p, x) - c * std::pow(std::fabs(x), p.contact_order));
                const double ratio = rem / std::pow(std::fabs(x), p.contact_order + 1.0);
                if (t > 0.5 * reach) K_far = std::max(K_far, ratio);
                else K_near = std::max(K_near, ratio);
            }
        }
        if (K_near > 4.0 * K_far + 1e-6) {
            fail("expansion remainder is not O(|x|^{m+1}) near 0 (ratio grows from " +
                 format_g17(K_far) + " to " + format_g17(K_near) + ")");
        }
    }

    // sigma diagnostic on a grid that avoids 0 and vanishing endpoints
    try {
        std::vector<double> grid;
        for (int i = 1; i < 200; ++i) {
            grid.push_back(-p.a + (p.a + p.b) * (i + 0.5) / 200.0);
        }
        rep.sigma = sigma_diagnostic(p, grid);
    } catch (const ValidationError& e) {
        fail(e.what());
    }

    rep.pass = rep.issues.empty();
    return rep;
}

}  // namespace thinstrip
