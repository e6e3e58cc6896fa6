#include "cas/kernels.hpp"
#include "cas/detail/exp_core.hpp"

#include <cstdlib>
#include <string>

namespace cas::kernels {

namespace {

using detail::exp_scalar;

void exp_v_scalar(const double* x, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = exp_scalar(x[i]);
}

double dot_exp_scalar(const double* w, const double* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += w[i] * exp_scalar(x[i]);
    return acc;
}

void exp_ray_scalar(const double* w, const double* c, double z, std::size_t n,
                    double* value, double* slope) {
    double v = 0.0, s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = w[i] * exp_scalar(c[i] * z);
        v += e;
        s += c[i] * e;
    }
    *value = v;
    *slope = s;
}

bool cpu_has_avx2() {
#if defined(CASRQMC_HAVE_AVX2) && defined(__GNUC__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const Kernels* select() {
    const char* env = std::getenv("CASRQMC_KERNELS");
    const std::string want = env ? env : "";
    if (want == "scalar") return &scalar_kernels;
#ifdef CASRQMC_HAVE_AVX2
    if (want == "avx2" && cpu_has_avx2()) return &avx2_kernels;
    if (want.empty() && cpu_has_avx2()) return &avx2_kernels;
#endif
    return &scalar_kernels;
}

} // namespace

const Kernels scalar_kernels = {"scalar", exp_v_scalar, dot_exp_scalar, exp_ray_scalar};

const Kernels& active() {
    static const Kernels* chosen = select();
    return *chosen;
}

const std::vector<const Kernels*>& available() {
    static const std::vector<const Kernels*> list = [] {
        std::vector<const Kernels*> v{&scalar_kernels};
#ifdef CASRQMC_HAVE_AVX2
        if (cpu_has_avx2()) v.push_back(&avx2_kernels);
#endif
        return v;
    }();
    return list;
}

} // namespace cas::kernels
