#include "memsteer/simd/kernels.hpp"

namespace memsteer::simd::scalar {

double dot(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

std::complex<double> dot_conj(const double* ar, const double* ai,
                              const double* br, const double* bi, std::size_t n) {
    double re = 0.0;
    double im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        re += ar[i] * br[i] + ai[i] * bi[i];
        im += ai[i] * br[i] - ar[i] * bi[i];
    }
    return {re, im};
}

void axpy_conj(std::complex<double> c, const double* zr, const double* zi,
               double* yr, double* yi, std::size_t n) {
    const double cr = c.real();
    const double ci = c.imag();
    for (std::size_t i = 0; i < n; ++i) {
        yr[i] += cr * zr[i] + ci * zi[i];
        yi[i] += ci * zr[i] - cr * zi[i];
    }
}

} // namespace memsteer::simd::scalar
