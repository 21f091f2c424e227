#pragma once

#include <cstddef>
#include <span>

// Vector and band arithmetic used by the eigensolvers. Every operation has a
// scalar reference implementation and, on x86-64 with AVX2, a vectorized
// variant selected once at startup. kernels_test checks the two against each
// other; sturm_counts is bit-identical by construction (same per-lane
// operation order, no re-association), the reductions agree to rounding.

namespace thinstrip::kernels {

enum class Isa { scalar, avx2 };

/// Currently dispatched instruction set.
Isa active_isa();

/// Force a specific implementation (tests); returns false if unsupported
/// on this machine.
bool set_isa(Isa isa);

const char* isa_name(Isa isa);

double dot(std::span<const double> x, std::span<const double> y);
double nrm2(std::span<const double> x);

/// y += a*x
void axpy(double a, std::span<const double> x, std::span<double> y);

/// x *= a
void scal(std::span<double> x, double a);

/// y = A*x for a symmetric band matrix in diagonal-packed storage:
/// band[r*n + i] = A(i+r, i) for r = 0..p, i = 0..n-1-r.
void sbmv(int n, int p, const double* band, const double* x, double* y);

/// For each shift, the number of eigenvalues of the symmetric tridiagonal
/// matrix (diag, offdiag) strictly below that shift, via the Sturm / LDL
/// pivot-sign recurrence. off2 holds the squared off-diagonal entries.
/// pivmin guards against division blow-up; pass sturm_pivmin(off2).
void sturm_counts(std::span<const double> diag, std::span<const double> off2,
                  double pivmin, std::span<const double> shifts, std::span<int> counts);

/// LAPACK-style minimal pivot magnitude for the Sturm recurrence.
double sturm_pivmin(std::span<const double> off2);

namespace detail {
// Scalar reference implementations (always available; used directly by the
// equivalence tests).
double dot_scalar(const double* x, const double* y, std::size_t n);
void axpy_scalar(double a, const double* x, double* y, std::size_t n);
void scal_scalar(double* x, double a, std::size_t n);
void sbmv_scalar(int n, int p, const double* band, const double* x, double* y);
void sturm_counts_scalar(const double* diag, const double* off2, std::size_t n,
                         double pivmin, const double* shifts, int* counts, std::size_t nshift);
#if defined(THINSTRIP_HAVE_AVX2)
double dot_avx2(const double* x, const double* y, std::size_t n);
void axpy_avx2(double a, const double* x, double* y, std::size_t n);
void scal_avx2(double* x, double a, std::size_t n);
void sbmv_avx2(int n, int p, const double* band, const double* x, double* y);
void sturm_counts_avx2(const double* diag, const double* off2, std::size_t n,
                       double pivmin, const double* shifts, int* counts, std::size_t nshift);
#endif
}  // namespace detail

}  // namespace thinstrip::kernels
