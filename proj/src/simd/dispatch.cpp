#include "memsteer/simd/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

#include "memsteer/errors.hpp"

namespace memsteer::simd {

namespace {

constexpr KernelTable scalar_table{&scalar::dot, &scalar::dot_conj, &scalar::axpy_conj};
#ifdef MEMSTEER_HAVE_AVX2_KERNELS
constexpr KernelTable avx2_table{&avx2::dot, &avx2::dot_conj, &avx2::axpy_conj};
#endif

Backend initial_backend() {
    if (const char* env = std::getenv("MEMSTEER_SIMD"); env != nullptr && *env != '\0') {
        const Backend requested = parse_backend(env);
        if (backend_supported(requested)) return requested;
    }
    return best_backend();
}

std::atomic<Backend>& current() {
    static std::atomic<Backend> backend{initial_backend()};
    return backend;
}

} // namespace

bool backend_supported(Backend backend) noexcept {
    switch (backend) {
    case Backend::scalar:
        return true;
    case Backend::avx2:
#ifdef MEMSTEER_HAVE_AVX2_KERNELS
        return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
        return false;
#endif
    }
    return false;
}

Backend best_backend() noexcept {
    return backend_supported(Backend::avx2) ? Backend::avx2 : Backend::scalar;
}

Backend active_backend() noexcept { return current().load(std::memory_order_relaxed); }

void set_backend(Backend backend) {
    if (!backend_supported(backend))
        throw Error(Errc::invalid_argument, "simd",
                    std::string("backend '") + std::string(backend_name(backend)) +
                        "' is not supported on this CPU");
    current().store(backend, std::memory_order_relaxed);
}

const KernelTable& table(Backend backend) {
    if (!backend_supported(backend))
        throw Error(Errc::invalid_argument, "simd", "backend not supported on this CPU");
#ifdef MEMSTEER_HAVE_AVX2_KERNELS
    if (backend == Backend::avx2) return avx2_table;
#endif
    return scalar_table;
}

const KernelTable& active() noexcept {
#ifdef MEMSTEER_HAVE_AVX2_KERNELS
    if (active_backend() == Backend::avx2) return avx2_table;
#endif
    return scalar_table;
}

std::string_view backend_name(Backend backend) noexcept {
    return backend == Backend::avx2 ? "avx2" : "scalar";
}

Backend parse_backend(std::string_view name) {
    if (name == "scalar") return Backend::scalar;
    if (name == "avx2") return Backend::avx2;
    if (name == "auto") return best_backend();
    throw Error(Errc::invalid_argument, "simd", "unknown backend '" + std::string(name) + "'");
}

} // namespace memsteer::simd
