// AVX2 variants. Compiled with -mavx2 -mfma; only ever called after the
// runtime dispatch confirmed support. sturm_counts mirrors the scalar
// recurrence lane-by-lane (sub/div/blend only, no re-association), so its
// integer results are bit-identical to the reference.

#if defined(THINSTRIP_HAVE_AVX2)

#include <immintrin.h>

#include <cmath>
#include <cstddef>

#include "thinstrip/kernels.hpp"

namespace thinstrip::kernels::detail {

double dot_avx2(const double* x, const double* y, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    }
    __m256d acc = _mm256_add_pd(acc0, acc1);
    __m128d lo = _mm256_castpd256_pd128(acc);
    __m128d hi = _mm256_extractf128_pd(acc, 1);
    lo = _mm_add_pd(lo, hi);
    double s = _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
    for (; i < n; ++i) s += x[i] * y[i];
    return s;
}

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
    const __m256d av = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d yv = _mm256_loadu_pd(y + i);
        yv = _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), yv);
        _mm256_storeu_pd(y + i, yv);
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

void scal_avx2(double* x, double a, std::size_t n) {
    const __m256d av = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(x + i, _mm256_mul_pd(av, _mm256_loadu_pd(x + i)));
    }
    for (; i < n; ++i) x[i] *= a;
}

void sbmv_avx2(int n, int p, const double* band, const double* x, double* y) {
    const double* d0 = band;
    int i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(y + i, _mm256_mul_pd(_mm256_loadu_pd(d0 + i), _mm256_loadu_pd(x + i)));
    }
    for (; i < n; ++i) y[i] = d0[i] * x[i];
    for (int r = 1; r <= p; ++r) {
        const double* dr = band + static_cast<std::size_t>(r) * n;
        const int len = n - r;
        int j = 0;
        for (; j + 4 <= len; j += 4) {
            const __m256d b = _mm256_loadu_pd(dr + j);
            __m256d yhi = _mm256_loadu_pd(y + j + r);
            yhi = _mm256_fmadd_pd(b, _mm256_loadu_pd(x + j), yhi);
            _mm256_storeu_pd(y + j + r, yhi);
            __m256d ylo = _mm256_loadu_pd(y + j);
            ylo = _mm256_fmadd_pd(b, _mm256_loadu_pd(x + j + r), ylo);
            _mm256_storeu_pd(y + j, ylo);
        }
        for (; j < len; ++j) {
            y[j + r] += dr[j] * x[j];
            y[j] += dr[j] * x[j + r];
        }
    }
}

void sturm_counts_avx2(const double* diag, const double* off2, std::size_t n,
                       double pivmin, const double* shifts, int* counts,
                       std::size_t nshift) {
    const __m256d piv = _mm256_set1_pd(pivmin);
    const __m256d negpiv = _mm256_set1_pd(-pivmin);
    const __m256d zero = _mm256_setzero_pd();
    const __m256d absmask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
    std::size_t k = 0;
    for (; k + 4 <= nshift; k += 4) {
        const __m256d s = _mm256_loadu_pd(shifts + k);
        __m256i cnt = _mm256_setzero_si256();
        __m256d q = _mm256_sub_pd(_mm256_set1_pd(diag[0]), s);
        __m256d small = _mm256_cmp_pd(_mm256_and_pd(q, absmask), piv, _CMP_NGE_UQ);
        q = _mm256_blendv_pd(q, negpiv, small);
        __m256d neg = _mm256_cmp_pd(q, zero, _CMP_LT_OQ);
        cnt = _mm256_sub_epi64(cnt, _mm256_castpd_si256(neg));
        for (std::size_t i = 1; i < n; ++i) {
            const __m256d di = _mm256_sub_pd(_mm256_set1_pd(diag[i]), s);
            if (off2[i - 1] == 0.0) {
                q = di;
            } else {
                q = _mm256_sub_pd(di, _mm256_div_pd(_mm256_set1_pd(off2[i - 1]), q));
            }
            small = _mm256_cmp_pd(_mm256_and_pd(q, absmask), piv, _CMP_NGE_UQ);
            q = _mm256_blendv_pd(q, negpiv, small);
            neg = _mm256_cmp_pd(q, zero, _CMP_LT_OQ);
            cnt = _mm256_sub_epi64(cnt, _mm256_castpd_si256(neg));
        }
        alignas(32) long long out[4];
        _mm256_store_si256(reinterpret_cast<__m256i*>(out), cnt);
        for (int l = 0; l < 4; ++l) counts[k + l] = static_cast<int>(out[l]);
    }
    if (k < nshift) {
        sturm_counts_scalar(diag, off2, n, pivmin, shifts + k, counts + k, nshift - k);
    }
}

}  // namespace thinstrip::kernels::detail

#endif  // THINSTRIP_HAVE_AVX2
