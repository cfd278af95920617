#if defined(RANKARENA_HAVE_AVX2)

#include <immintrin.h>

#include "rankarena/kernels.hpp"

namespace rankarena::kernels::detail {

namespace {

// Sign masks for every 4-bit flip pattern; lane j is negated iff bit j is set.
alignas(32) constexpr std::uint64_t kSignMask[16][4] = {
    {0x0, 0x0, 0x0, 0x0},
    {0x8000000000000000ULL, 0x0, 0x0, 0x0},
    {0x0, 0x8000000000000000ULL, 0x0, 0x0},
    {0x8000000000000000ULL, 0x8000000000000000ULL, 0x0, 0x0},
    {0x0, 0x0, 0x8000000000000000ULL, 0x0},
    {0x8000000000000000ULL, 0x0, 0x8000000000000000ULL, 0x0},
    {0x0, 0x8000000000000000ULL, 0x8000000000000000ULL, 0x0},
    {0x8000000000000000ULL, 0x8000000000000000ULL, 0x8000000000000000ULL, 0x0},
    {0x0, 0x0, 0x0, 0x8000000000000000ULL},
    {0x8000000000000000ULL, 0x0, 0x0, 0x8000000000000000ULL},
    {0x0, 0x8000000000000000ULL, 0x0, 0x8000000000000000ULL},
    {0x8000000000000000ULL, 0x8000000000000000ULL, 0x0, 0x8000000000000000ULL},
    {0x0, 0x0, 0x8000000000000000ULL, 0x8000000000000000ULL},
    {0x8000000000000000ULL, 0x0, 0x8000000000000000ULL, 0x8000000000000000ULL},
    {0x0, 0x8000000000000000ULL, 0x8000000000000000ULL, 0x8000000000000000ULL},
    {0x8000000000000000ULL, 0x8000000000000000ULL, 0x8000000000000000ULL,
     0x8000000000000000ULL},
};

} // namespace

double dot_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    const std::size_t nv = n & ~std::size_t(3);
    for (std::size_t i = 0; i < nv; i += 4) {
        const __m256d va = _mm256_loadu_pd(a + i);
        const __m256d vb = _mm256_loadu_pd(b + i);
        acc = _mm256_add_pd(acc, _mm256_mul_pd(va, vb));
    }
    alignas(32) double lane[4];
    _mm256_store_pd(lane, acc);
    double tail = 0.0;
    for (std::size_t i = nv; i < n; ++i) {
        tail += a[i] * b[i];
    }
    return ((lane[0] + lane[1]) + (lane[2] + lane[3])) + tail;
}

double signflip_sum_avx2(const double* d, std::size_t n, const std::uint64_t* bits) {
    __m256d acc = _mm256_setzero_pd();
    const std::size_t nv = n & ~std::size_t(3);
    for (std::size_t i = 0; i < nv; i += 4) {
        const std::uint64_t nib = (bits[i >> 6] >> (i & 63)) & 0xF;
        const __m256d mask =
            _mm256_load_pd(reinterpret_cast<const double*>(kSignMask[nib]));
        const __m256d vd = _mm256_loadu_pd(d + i);
        acc = _mm256_add_pd(acc, _mm256_xor_pd(vd, mask));
    }
    alignas(32) double lane[4];
    _mm256_store_pd(lane, acc);
    double tail = 0.0;
    for (std::size_t i = nv; i < n; ++i) {
        const std::uint64_t bit = (bits[i >> 6] >> (i & 63)) & 1;
        tail += bit ? -d[i] : d[i];
    }
    return ((lane[0] + lane[1]) + (lane[2] + lane[3])) + tail;
}

} // namespace rankarena::kernels::detail

#endif // RANKARENA_HAVE_AVX2
