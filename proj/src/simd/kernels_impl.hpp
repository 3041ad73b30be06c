#pragma once

#include "pdelearn/simd/kernels.hpp"

namespace pdelearn::simd::detail {

// Tables defined in the ISA-specific translation units. Each returns nullptr
// when that TU was built without the corresponding instruction set.
const KernelTable* avx2_table();
const KernelTable* neon_table();

}  // namespace pdelearn::simd::detail
