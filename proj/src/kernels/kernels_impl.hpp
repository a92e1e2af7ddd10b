#pragma once

#include "fracpce/kernels.hpp"

namespace fracpce::kernels::detail {

KernelTable scalar_table();
#ifdef FRACPCE_HAVE_AVX2
KernelTable avx2_table();
#endif

}  // namespace fracpce::kernels::detail
