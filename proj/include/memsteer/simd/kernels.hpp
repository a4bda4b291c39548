#pragma once
// Data-parallel inner loops shared by the Volterra stepper, the Gram assembly
// and the density reconstruction.
//
// Each kernel has a scalar reference implementation and, on x86-64, an
// AVX2+FMA variant. The variant is picked once at runtime from the CPU
// features (overridable with MEMSTEER_SIMD=scalar|avx2 or set_backend()).
// Results from different backends agree to rounding, not bit-for-bit; a given
// backend is deterministic and independent of thread count.

#include <complex>
#include <cstddef>
#include <string_view>

namespace memsteer::simd {

enum class Backend { scalar, avx2 };

struct KernelTable {
    // sum_i a[i] * b[i]
    double (*dot)(const double* a, const double* b, std::size_t n);
    // sum_i (ar[i] + i ai[i]) * conj(br[i] + i bi[i])
    std::complex<double> (*dot_conj)(const double* ar, const double* ai,
                                     const double* br, const double* bi, std::size_t n);
    // y += c * conj(z), elementwise over split real/imaginary arrays
    void (*axpy_conj)(std::complex<double> c, const double* zr, const double* zi,
                      double* yr, double* yi, std::size_t n);
};

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
std::complex<double> dot_conj(const double* ar, const double* ai,
                              const double* br, const double* bi, std::size_t n);
void axpy_conj(std::complex<double> c, const double* zr, const double* zi,
               double* yr, double* yi, std::size_t n);
} // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define MEMSTEER_HAVE_AVX2_KERNELS 1
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
std::complex<double> dot_conj(const double* ar, const double* ai,
                              const double* br, const double* bi, std::size_t n);
void axpy_conj(std::complex<double> c, const double* zr, const double* zi,
               double* yr, double* yi, std::size_t n);
} // namespace avx2
#endif

bool backend_supported(Backend backend) noexcept;
Backend best_backend() noexcept;
Backend active_backend() noexcept;
// Throws memsteer::Error(invalid_argument) when the CPU lacks the features.
void set_backend(Backend backend);
const KernelTable& table(Backend backend);
const KernelTable& active() noexcept;

std::string_view backend_name(Backend backend) noexcept;
Backend parse_backend(std::string_view name);

} // namespace memsteer::simd
