#include <cmath>
#include <cstddef>

#include "thinstrip/kernels.hpp"

namespace thinstrip::kernels::detail {

double dot_scalar(const double* x, const double* y, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
    return s;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scal_scalar(double* x, double a, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

void sbmv_scalar(int n, int p, const double* band, const double* x, double* y) {
    const double* d0 = band;
    for (int i = 0; i < n; ++i) y[i] = d0[i] * x[i];
    for (int r = 1; r <= p; ++r) {
        const double* dr = band + static_cast<std::size_t>(r) * n;
        const int len = n - r;
        for (int i = 0; i < len; ++i) {
            y[i + r] += dr[i] * x[i];
            y[i] += dr[i] * x[i + r];
        }
    }
}

// Pivot-sign count: q_0 = d_0 - s, q_i = (d_i - s) - e2_{i-1}/q_{i-1}.
// The number of negative q_i equals the number of eigenvalues below s.
// Pivots with |q| < pivmin are clamped to -pivmin (counts the shift as
// above such an eigenvalue consistently); a zero off-diagonal entry splits
// the matrix and restarts the recurrence.
void sturm_counts_scalar(const double* diag, const double* off2, std::size_t n,
                         double pivmin, const double* shifts, int* counts,
                         std::size_t nshift) {
    for (std::size_t k = 0; k < nshift; ++k) {
        const double s = shifts[k];
        int cnt = 0;
        double q = diag[0] - s;
        if (!(std::fabs(q) >= pivmin)) q = -pivmin;
        if (q < 0.0) ++cnt;
        for (std::size_t i = 1; i < n; ++i) {
            if (off2[i - 1] == 0.0) {
                q = diag[i] - s;
            } else {
                q = (diag[i] - s) - off2[i - 1] / q;
            }
            if (!(std::fabs(q) >= pivmin)) q = -pivmin;
            if (q < 0.0) ++cnt;
        }
        counts[k] = cnt;
    }
}

}  // namespace thinstrip::kernels::detail
