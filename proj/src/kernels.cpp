#include "g5/kernels.hpp"

#include <cstdlib>

namespace g5::kern {
namespace {

struct Selection {
    const Ops* ops;
    std::string lane;
};

Selection select() {
    const char* env = std::getenv("G5_KERNELS");
    std::string want = env ? env : "auto";
#if defined(G5_HAVE_AVX2)
    bool cpu_ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    if (want == "avx2" || (want != "scalar" && cpu_ok))
        return {&avx2_ops(), "avx2"};
#endif
    return {&scalar_ops(), "scalar"};
}

const Selection& selection() {
    static const Selection s = select();
    return s;
}

}  // namespace

const Ops& ops() { return *selection().ops; }
const std::string& active_lane() { return selection().lane; }

}  // namespace g5::kern
