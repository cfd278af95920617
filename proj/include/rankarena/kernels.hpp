#pragma once

#include <cstddef>
#include <cstdint>

namespace rankarena::kernels {

enum class Backend { Scalar, Avx2 };

// Both backends use the same 4-lane accumulation scheme (four partial sums
// combined as ((l0+l1)+(l2+l3)) plus a scalar tail), so results are
// bit-identical regardless of which one is active. Kernel translation units
// are compiled with -ffp-contract=off to keep that guarantee.

/// Dot product over double arrays.
double dot(const double* a, const double* b, std::size_t n);

/// Squared L2 norm, dot(v, v).
double norm_sq(const double* v, std::size_t n);

/// Sum of +/- d[i] where the sign of element i comes from bit i of `bits`
/// (LSB-first within each 64-bit word; a set bit negates). `bits` must hold
/// at least (n + 63) / 64 words.
double signflip_sum(const double* d, std::size_t n, const std::uint64_t* bits);

bool avx2_supported();
Backend active_backend();

/// Test hook. Requests for an unsupported backend fall back to Scalar.
void set_backend(Backend backend);

namespace detail {
double dot_scalar(const double* a, const double* b, std::size_t n);
double signflip_sum_scalar(const double* d, std::size_t n, const std::uint64_t* bits);
#if defined(RANKARENA_HAVE_AVX2)
double dot_avx2(const double* a, const double* b, std::size_t n);
double signflip_sum_avx2(const double* d, std::size_t n, const std::uint64_t* bits);
#endif
} // namespace detail

} // namespace rankarena::kernels
