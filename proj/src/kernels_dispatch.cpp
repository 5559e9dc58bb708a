#include "mbow/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace mbow::kernels {
namespace {

const Ops& select() {
    if (const char* forced = std::getenv("MBOW_KERNELS")) {
        if (std::strcmp(forced, "scalar") == 0) return scalar_ops();
        if (std::strcmp(forced, "avx2") == 0 && avx2_ops()) return *avx2_ops();
        if (std::strcmp(forced, "neon") == 0 && neon_ops()) return *neon_ops();
        return scalar_ops();
    }
    if (const Ops* ops = avx2_ops()) return *ops;
    if (const Ops* ops = neon_ops()) return *ops;
    return scalar_ops();
}

}  // namespace

const Ops& active() {
    static const Ops& ops = select();
    return ops;
}

}  // namespace mbow::kernels
