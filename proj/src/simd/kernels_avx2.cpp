// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include "memsteer/simd/kernels.hpp"

#include <immintrin.h>

namespace memsteer::simd::avx2 {

namespace {

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d pair = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

} // namespace

double dot(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    __m256d acc2 = _mm256_setzero_pd();
    __m256d acc3 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 16 <= n; i += 16) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
        acc2 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 8), _mm256_loadu_pd(b + i + 8), acc2);
        acc3 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 12), _mm256_loadu_pd(b + i + 12), acc3);
    }
    for (; i + 4 <= n; i += 4)
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    double acc = hsum(_mm256_add_pd(_mm256_add_pd(acc0, acc1), _mm256_add_pd(acc2, acc3)));
    for (; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

std::complex<double> dot_conj(const double* ar, const double* ai,
                              const double* br, const double* bi, std::size_t n) {
    __m256d re0 = _mm256_setzero_pd();
    __m256d re1 = _mm256_setzero_pd();
    __m256d im0 = _mm256_setzero_pd();
    __m256d im1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256d xr0 = _mm256_loadu_pd(ar + i);
        const __m256d xi0 = _mm256_loadu_pd(ai + i);
        const __m256d yr0 = _mm256_loadu_pd(br + i);
        const __m256d yi0 = _mm256_loadu_pd(bi + i);
        const __m256d xr1 = _mm256_loadu_pd(ar + i + 4);
        const __m256d xi1 = _mm256_loadu_pd(ai + i + 4);
        const __m256d yr1 = _mm256_loadu_pd(br + i + 4);
        const __m256d yi1 = _mm256_loadu_pd(bi + i + 4);
        re0 = _mm256_fmadd_pd(xr0, yr0, _mm256_fmadd_pd(xi0, yi0, re0));
        re1 = _mm256_fmadd_pd(xr1, yr1, _mm256_fmadd_pd(xi1, yi1, re1));
        im0 = _mm256_fmadd_pd(xi0, yr0, _mm256_fnmadd_pd(xr0, yi0, im0));
        im1 = _mm256_fmadd_pd(xi1, yr1, _mm256_fnmadd_pd(xr1, yi1, im1));
    }
    double re = hsum(_mm256_add_pd(re0, re1));
    double im = hsum(_mm256_add_pd(im0, im1));
    for (; i < n; ++i) {
        re += ar[i] * br[i] + ai[i] * bi[i];
        im += ai[i] * br[i] - ar[i] * bi[i];
    }
    return {re, im};
}

void axpy_conj(std::complex<double> c, const double* zr, const double* zi,
               double* yr, double* yi, std::size_t n) {
    const __m256d cr = _mm256_set1_pd(c.real());
    const __m256d ci = _mm256_set1_pd(c.imag());
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d r = _mm256_loadu_pd(zr + i);
        const __m256d m = _mm256_loadu_pd(zi + i);
        const __m256d re = _mm256_fmadd_pd(cr, r, _mm256_fmadd_pd(ci, m, _mm256_loadu_pd(yr + i)));
        const __m256d im = _mm256_fmadd_pd(ci, r, _mm256_fnmadd_pd(cr, m, _mm256_loadu_pd(yi + i)));
        _mm256_storeu_pd(yr + i, re);
        _mm256_storeu_pd(yi + i, im);
    }
    for (; i < n; ++i) {
        yr[i] += c.real() * zr[i] + c.imag() * zi[i];
        yi[i] += c.imag() * zr[i] - c.real() * zi[i];
    }
}

} // namespace memsteer::simd::avx2
