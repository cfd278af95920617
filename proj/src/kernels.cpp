#include "rankarena/kernels.hpp"

namespace rankarena::kernels {

namespace {

Backend detect_backend() {
#if defined(RANKARENA_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
    if (__builtin_cpu_supports("avx2")) {
        return Backend::Avx2;
    }
#endif
    return Backend::Scalar;
}

Backend& backend_slot() {
    static Backend backend = detect_backend();
    return backend;
}

} // namespace

bool avx2_supported() {
#if defined(RANKARENA_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
    return __builtin_cpu_supports("avx2") != 0;
#else
    return false;
#endif
}

Backend active_backend() {
    return backend_slot();
}

void set_backend(Backend backend) {
    if (backend == Backend::Avx2 && !avx2_supported()) {
        backend = Backend::Scalar;
    }
    backend_slot() = backend;
}

double dot(const double* a, const double* b, std::size_t n) {
#if defined(RANKARENA_HAVE_AVX2)
    if (backend_slot() == Backend::Avx2) {
        return detail::dot_avx2(a, b, n);
    }
#endif
    return detail::dot_scalar(a, b, n);
}

double norm_sq(const double* v, std::size_t n) {
    return dot(v, v, n);
}

double signflip_sum(const double* d, std::size_t n, const std::uint64_t* bits) {
#if defined(RANKARENA_HAVE_AVX2)
    if (backend_slot() == Backend::Avx2) {
        return detail::signflip_sum_avx2(d, n, bits);
    }
#endif
    return detail::signflip_sum_scalar(d, n, bits);
}

} // namespace rankarena::kernels
