#include "rankarena/kernels.hpp"

namespace rankarena::kernels::detail {

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double acc0 = 0.0, acc1 = 0.0, acc2 = 0.0, acc3 = 0.0;
    const std::size_t nv = n & ~std::size_t(3);
    for (std::size_t i = 0; i < nv; i += 4) {
        acc0 += a[i] * b[i];
        acc1 += a[i + 1] * b[i + 1];
        acc2 += a[i + 2] * b[i + 2];
        acc3 += a[i + 3] * b[i + 3];
    }
    double tail = 0.0;
    for (std::size_t i = nv; i < n; ++i) {
        tail += a[i] * b[i];
    }
    return ((acc0 + acc1) + (acc2 + acc3)) + tail;
}

double signflip_sum_scalar(const double* d, std::size_t n, const std::uint64_t* bits) {
    double acc0 = 0.0, acc1 = 0.0, acc2 = 0.0, acc3 = 0.0;
    const std::size_t nv = n & ~std::size_t(3);
    for (std::size_t i = 0; i < nv; i += 4) {
        // n is stepped in multiples of 4, so the nibble never straddles words.
        const std::uint64_t nib = (bits[i >> 6] >> (i & 63)) & 0xF;
        acc0 += (nib & 1) ? -d[i] : d[i];
        acc1 += (nib & 2) ? -d[i + 1] : d[i + 1];
        acc2 += (nib & 4) ? -d[i + 2] : d[i + 2];
        acc3 += (nib & 8) ? -d[i + 3] : d[i + 3];
    }
    double tail = 0.0;
    for (std::size_t i = nv; i < n; ++i) {
        const std::uint64_t bit = (bits[i >> 6] >> (i & 63)) & 1;
        tail += bit ? -d[i] : d[i];
    }
    return ((acc0 + acc1) + (acc2 + acc3)) + tail;
}

} // namespace rankarena::kernels::detail
