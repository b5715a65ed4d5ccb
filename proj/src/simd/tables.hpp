#pragma once

#include "chiral/simd.hpp"

namespace chiral::simd::detail {

extern const KernelTable scalar_table;
#if defined(__x86_64__) || defined(_M_X64)
extern const KernelTable avx2_table;
#endif
#if defined(__aarch64__)
extern const KernelTable neon_table;
#endif

}  // namespace chiral::simd::detail
