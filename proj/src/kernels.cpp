#include "thinstrip/kernels.hpp"

#include <cassert>
#include <cmath>
#include <limits>

#include "thinstrip/log.hpp"

namespace thinstrip::kernels {

namespace {

using detail::axpy_scalar;
using detail::dot_scalar;
using detail::sbmv_scalar;
using detail::scal_scalar;
using detail::sturm_counts_scalar;

struct Ops {
    double (*dot)(const double*, const double*, std::size_t);
    void (*axpy)(double, const double*, double*, std::size_t);
    void (*scal)(double*, double, std::size_t);
    void (*sbmv)(int, int, const double*, const double*, double*);
    void (*sturm)(const double*, const double*, std::size_t, double, const double*, int*, std::size_t);
};

constexpr Ops kScalarOps{dot_scalar, axpy_scalar, scal_scalar, sbmv_scalar, sturm_counts_scalar};

#if defined(THINSTRIP_HAVE_AVX2)
constexpr Ops kAvx2Ops{detail::dot_avx2, detail::axpy_avx2, detail::scal_avx2,
                       detail::sbmv_avx2, detail::sturm_counts_avx2};
#endif

bool avx2_supported() {
#if defined(THINSTRIP_HAVE_AVX2)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

struct Dispatch {
    Ops ops;
    Isa isa;
    Dispatch() {
        if (avx2_supported()) {
#if defined(THINSTRIP_HAVE_AVX2)
            ops = kAvx2Ops;
            isa = Isa::avx2;
            log::debug("kernels: dispatching to avx2");
            return;
#endif
        }
        ops = kScalarOps;
        isa = Isa::scalar;
        log::debug("kernels: dispatching to scalar");
    }
};

Dispatch& dispatch() {
    static Dispatch d;
    return d;
}

}  // namespace

Isa active_isa() { return dispatch().isa; }

bool set_isa(Isa isa) {
    if (isa == Isa::scalar) {
        dispatch().ops = kScalarOps;
        dispatch().isa = Isa::scalar;
        return true;
    }
#if defined(THINSTRIP_HAVE_AVX2)
    if (isa == Isa::avx2 && avx2_supported()) {
        dispatch().ops = kAvx2Ops;
        dispatch().isa = Isa::avx2;
        return true;
    }
#endif
    return false;
}

const char* isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

double dot(std::span<const double> x, std::span<const double> y) {
    assert(x.size() == y.size());
    return dispatch().ops.dot(x.data(), y.data(), x.size());
}

double nrm2(std::span<const double> x) {
    return std::sqrt(dispatch().ops.dot(x.data(), x.data(), x.size()));
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
    assert(x.size() == y.size());
    dispatch().ops.axpy(a, x.data(), y.data(), x.size());
}

void scal(std::span<double> x, double a) { dispatch().ops.scal(x.data(), a, x.size()); }

void sbmv(int n, int p, const double* band, const double* x, double* y) {
    dispatch().ops.sbmv(n, p, band, x, y);
}

void sturm_counts(std::span<const double> diag, std::span<const double> off2,
                  double pivmin, std::span<const double> shifts, std::span<int> counts) {
    assert(off2.size() + 1 == diag.size() || (diag.size() == 1 && off2.empty()));
    assert(shifts.size() == counts.size());
    dispatch().ops.sturm(diag.data(), off2.data(), diag.size(), pivmin, shifts.data(),
                         counts.data(), shifts.size());
}

double sturm_pivmin(std::span<const double> off2) {
    double m = 1.0;
    for (double e : off2) m = std::max(m, e);
    return std::numeric_limits<double>::min() * m;
}

}  // namespace thinstrip::kernels
