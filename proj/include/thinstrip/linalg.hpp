#pragma once

#include <span>
#include <vector>

#include "thinstrip/common.hpp"

namespace thinstrip {

struct SymTridiagonal {
    std::vector<double> diag;
    std::vector<double> offdiag;  // size diag.size() - 1

    int size() const { return static_cast<int>(diag.size()); }
};

/// Symmetric band matrix, diagonal-packed: band[r*n + i] = A(i+r, i) for
/// r = 0..halfbw, i = 0..n-1-r. Entries outside the band are exactly zero.
struct SymBanded {
    int n = 0;
    int halfbw = 0;
    std::vector<double> band;

    SymBanded() = default;
    SymBanded(int n_, int halfbw_)
        : n(n_), halfbw(halfbw_), band(static_cast<std::size_t>(halfbw_ + 1) * n_, 0.0) {}

    double& at(int r, int i) { return band[static_cast<std::size_t>(r) * n + i]; }
    double at(int r, int i) const { return band[static_cast<std::size_t>(r) * n + i]; }

    static SymBanded identity(int n);

    /// y = A x
    void multiply(std::span<const double> x, std::span<double> y) const;

    double norm_inf() const;
};

struct EigenPair {
    double value = 0.0;
    std::vector<double> vector;
};

struct Spectrum {
    std::vector<EigenPair> pairs;
    /// Pair i numerically coincides with a neighbor (ordering tie broken by
    /// factorization index).
    std::vector<bool> degenerate;
    /// Solver residuals, one per pair (semantics depend on the producer).
    std::vector<double> residuals;
    int iterations = 0;

    int size() const { return static_cast<int>(pairs.size()); }
    double value(int j) const { return pairs[j].value; }
};

/// Eigenvalue count strictly below sigma (Sturm / LDL pivot signs).
int sturm_count_below(const SymTridiagonal& T, double sigma);

/// k smallest eigenpairs, ascending. Bisection to relative 1e-12, inverse
/// iteration (max 5 sweeps) with Rayleigh-quotient refinement, and a
/// Sturm-count certificate that exactly k eigenvalues lie below
/// lambda_k + gap/2.
Spectrum tridiag_eigs(const SymTridiagonal& T, int k);

/// LDL^T factorization of A - sigma*B inside the band, no pivoting.
/// negative_pivots is the inertia: the number of generalized eigenvalues of
/// (A, B) below sigma when B is positive definite.
class BandedLDLT {
  public:
    BandedLDLT(const SymBanded& A, double sigma, const SymBanded* B = nullptr);

    int negative_pivots() const { return neg_; }
    int size() const { return n_; }

    void solve_in_place(std::span<double> b) const;
    std::vector<double> solve(std::span<const double> b) const;

  private:
    int n_ = 0;
    int p_ = 0;
    int neg_ = 0;
    std::vector<double> fac_;
};

/// Convenience wrapper matching the factor-and-report-inertia contract.
BandedLDLT banded_ldlt(const SymBanded& A, double sigma, const SymBanded* B = nullptr);

struct LanczosOptions {
    int max_iterations = 200;
    /// Re-verified true residual target: ||A v - lambda B v||_{B^-1} <= tol*|lambda|.
    double tol = 1e-9;
};

/// k eigenvalues of A v = lambda B v nearest sigma from above, ascending,
/// with B-orthonormal eigenvectors. Shift-invert Lanczos with full
/// reorthogonalization; B must be symmetric positive definite.
Spectrum shift_invert_lanczos(const SymBanded& A, const SymBanded& B, double sigma, int k,
                              const LanczosOptions& opts = {});

}  // namespace thinstrip
