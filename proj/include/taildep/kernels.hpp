#pragma once

#include <cstddef>
#include <cstdint>

// Data-parallel inner loops behind the chi-matrix builders. Each kernel has
// a scalar reference implementation and may have ISA-specific variants; the
// unqualified entry points dispatch to the best variant available at runtime.
//
// All variants of a kernel are bit-exact equals of the scalar reference.
// For the floating-point reductions this is guaranteed by a fixed summation
// order that every variant must implement:
//   - four interleaved partial sums s0..s3 over the first n - n%4 elements
//     (lane l accumulates indices i with i % 4 == l),
//   - combined as (s0 + s2) + (s1 + s3),
//   - the remaining n % 4 elements appended left to right.

namespace taildep::kernels {

enum class Isa { scalar, avx2 };

/// Variant selected by runtime dispatch (CPU detection, overridable via the
/// TAILDEP_ISA environment variable or set_isa()).
Isa active_isa();

/// Force a variant; returns false (and leaves dispatch unchanged) if the
/// requested ISA is not supported on this CPU.
bool set_isa(Isa isa);

bool avx2_available();

/// popcount(a[i] & b[i]) summed over nwords 64-bit words.
std::uint64_t co_count(const std::uint64_t* a, const std::uint64_t* b, std::size_t nwords);

/// sum_i min(x[i], y[i]) in the fixed reduction order above.
double min_sum(const double* x, const double* y, std::size_t n);

/// sum_i max(x[i], y[i]) in the fixed reduction order above.
double max_sum(const double* x, const double* y, std::size_t n);

namespace scalar {
std::uint64_t co_count(const std::uint64_t* a, const std::uint64_t* b, std::size_t nwords);
double min_sum(const double* x, const double* y, std::size_t n);
double max_sum(const double* x, const double* y, std::size_t n);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
std::uint64_t co_count(const std::uint64_t* a, const std::uint64_t* b, std::size_t nwords);
double min_sum(const double* x, const double* y, std::size_t n);
double max_sum(const double* x, const double* y, std::size_t n);
}  // namespace avx2
#endif

}  // namespace taildep::kernels
