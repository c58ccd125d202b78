// Stand-in for targets where the AVX2 lane is not built.

#include "qv/kernels.hpp"

namespace qv::kernels::detail {

const Ops* avx2_table() { return nullptr; }

}  // namespace qv::kernels::detail
