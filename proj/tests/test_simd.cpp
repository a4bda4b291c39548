#include "doctest.h"

#include <complex>

#include "memsteer/errors.hpp"
#include "memsteer/kernel.hpp"
#include "memsteer/simd/kernels.hpp"
#include "memsteer/volterra.hpp"
#include "support.hpp"

using namespace memsteer;
using test_support::random_vector;

namespace {

struct BackendGuard {
    simd::Backend saved = simd::active_backend();
    ~BackendGuard() { simd::set_backend(saved); }
};

} // namespace

TEST_SUITE("simd") {

TEST_CASE("scalar kernels match naive loops") {
    const auto& k = simd::table(simd::Backend::scalar);
    const auto a = random_vector(37, 1), b = random_vector(37, 2), c = random_vector(37, 3), d = random_vector(37, 4);
    double dot = 0.0;
    std::complex<double> dc{0.0, 0.0};
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        dc += std::complex<double>(a[i], b[i]) * std::conj(std::complex<double>(c[i], d[i]));
    }
    CHECK(k.dot(a.data(), b.data(), a.size()) == doctest::Approx(dot).epsilon(1e-14));
    const auto got = k.dot_conj(a.data(), b.data(), c.data(), d.data(), a.size());
    CHECK(got.real() == doctest::Approx(dc.real()).epsilon(1e-14));
    CHECK(got.imag() == doctest::Approx(dc.imag()).epsilon(1e-14));

    std::vector<double> yr(a.size(), 0.5), yi(a.size(), -0.25);
    const std::complex<double> coef{0.3, -1.7};
    k.axpy_conj(coef, c.data(), d.data(), yr.data(), yi.data(), a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto expect = std::complex<double>(0.5, -0.25) + coef * std::conj(std::complex<double>(c[i], d[i]));
        CHECK(yr[i] == doctest::Approx(expect.real()).epsilon(1e-15));
        CHECK(yi[i] == doctest::Approx(expect.imag()).epsilon(1e-15));
    }
}

TEST_CASE("avx2 kernels agree with scalar across lengths and tails") {
    if (!simd::backend_supported(simd::Backend::avx2)) {
        MESSAGE("avx2 not supported on this CPU; skipped");
        return;
    }
    const auto& s = simd::table(simd::Backend::scalar);
    const auto& v = simd::table(simd::Backend::avx2);
    for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 15u, 16u, 17u, 31u, 64u, 67u, 1000u, 4097u}) {
        CAPTURE(n);
        const auto a = random_vector(n, 10 + n), b = random_vector(n, 20 + n);
        const auto c = random_vector(n, 30 + n), d = random_vector(n, 40 + n);
        double scale = 0.0;
        for (std::size_t i = 0; i < n; ++i) scale += std::abs(a[i] * b[i]) + std::abs(c[i] * d[i]);
        scale = std::max(scale, 1.0);
        CHECK(std::abs(s.dot(a.data(), b.data(), n) - v.dot(a.data(), b.data(), n)) <= 1e-14 * scale);
        const auto x = s.dot_conj(a.data(), b.data(), c.data(), d.data(), n);
        const auto y = v.dot_conj(a.data(), b.data(), c.data(), d.data(), n);
        CHECK(std::abs(x - y) <= 1e-14 * scale);

        std::vector<double> yr1(n, 0.1), yi1(n, 0.2), yr2(n, 0.1), yi2(n, 0.2);
        s.axpy_conj({1.25, -0.5}, c.data(), d.data(), yr1.data(), yi1.data(), n);
        v.axpy_conj({1.25, -0.5}, c.data(), d.data(), yr2.data(), yi2.data(), n);
        CHECK(test_support::max_abs_diff(yr1, yr2) <= 1e-15);
        CHECK(test_support::max_abs_diff(yi1, yi2) <= 1e-15);
    }
}

TEST_CASE("mode solver agrees across backends and is deterministic per backend") {
    if (!simd::backend_supported(simd::Backend::avx2)) return;
    BackendGuard guard;
    const TimeGrid grid = make_grid(7.0, 2048);
    const KernelSpec kernel = build_kernel(ExponentialKernel{1.0, 1.0}, grid);

    simd::set_backend(simd::Backend::scalar);
    const ModeSolution a = solve_mode(5, kernel, grid);
    simd::set_backend(simd::Backend::avx2);
    const ModeSolution b = solve_mode(5, kernel, grid);
    const ModeSolution c = solve_mode(5, kernel, grid);

    const double scale = test_support::max_abs(a.z);
    CHECK(test_support::max_abs_diff(a.z, b.z) <= 1e-10 * scale);
    CHECK(test_support::max_abs_diff(a.dz, b.dz) <= 1e-10 * test_support::max_abs(a.dz));
    CHECK(b.z == c.z);
    CHECK(b.dz == c.dz);
}

TEST_CASE("backend names parse and unknown names are rejected") {
    CHECK(simd::parse_backend("scalar") == simd::Backend::scalar);
    CHECK(simd::parse_backend("auto") == simd::best_backend());
    CHECK(simd::backend_name(simd::Backend::avx2) == "avx2");
    CHECK_THROWS_AS(simd::parse_backend("neon"), Error);
    CHECK(simd::backend_supported(simd::Backend::scalar));
}

}
