#include "confound/error.hpp"
#include "confound/kernels.hpp"

#include <cstdlib>
#include <string>

namespace confound::kernels {

namespace {

constexpr KernelTable kScalarTable{Isa::Scalar,          scalar::sum,         scalar::dot,
                                   scalar::window_max_deviation, scalar::max_inplace,
                                   scalar::residual};

#ifdef CONFOUND_HAVE_AVX2_KERNELS
constexpr KernelTable kAvx2Table{Isa::Avx2,          avx2::sum,         avx2::dot,
                                 avx2::window_max_deviation, avx2::max_inplace,
                                 avx2::residual};
#endif

const KernelTable& select() {
    if (const char* env = std::getenv("CONFOUND_SIMD"); env && std::string(env) == "scalar")
        return kScalarTable;
    if (isa_supported(Isa::Avx2)) return table(Isa::Avx2);
    return kScalarTable;
}

}  // namespace

std::string_view to_string(Isa isa) noexcept {
    switch (isa) {
        case Isa::Scalar: return "scalar";
        case Isa::Avx2: return "avx2";
    }
    return "unknown";
}

bool isa_supported(Isa isa) noexcept {
    switch (isa) {
        case Isa::Scalar: return true;
        case Isa::Avx2:
#ifdef CONFOUND_HAVE_AVX2_KERNELS
            return __builtin_cpu_supports("avx2");
#else
            return false;
#endif
    }
    return false;
}

const KernelTable& table(Isa isa) {
    if (!isa_supported(isa))
        throw Error(ErrorCode::InvalidArgument,
                    "kernel variant not supported on this CPU: " + std::string(to_string(isa)));
#ifdef CONFOUND_HAVE_AVX2_KERNELS
    if (isa == Isa::Avx2) return kAvx2Table;
#endif
    return kScalarTable;
}

const KernelTable& active() {
    static const KernelTable& chosen = select();
    return chosen;
}

}  // namespace confound::kernels
