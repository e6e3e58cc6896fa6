#pragma once

#include <cstddef>
#include <vector>

namespace cas::kernels {

// Hot arithmetic loops behind the estimators. Every entry point has a scalar
// reference implementation and, on x86-64 with AVX2+FMA, a vector variant
// selected once at startup. exp_v is bit-identical across variants (same
// reduction, same polynomial, same fma order); the fused reductions differ
// only in summation order.
struct Kernels {
    const char* name;

    // out[i] = exp(x[i])
    void (*exp_v)(const double* x, double* out, std::size_t n);

    // sum_i w[i] * exp(x[i])
    double (*dot_exp)(const double* w, const double* x, std::size_t n);

    // value = sum_i w[i]*exp(c[i]*z), slope = sum_i w[i]*c[i]*exp(c[i]*z);
    // the one-dimensional section used by the pre-integration root-finder.
    void (*exp_ray)(const double* w, const double* c, double z, std::size_t n,
                    double* value, double* slope);
};

// Active implementation: CPU-detected, overridable with
// CASRQMC_KERNELS=scalar|avx2 (falls back to scalar if unavailable).
const Kernels& active();

// All implementations compiled into this binary, scalar first.
const std::vector<const Kernels*>& available();

extern const Kernels scalar_kernels;
#ifdef CASRQMC_HAVE_AVX2
extern const Kernels avx2_kernels;
#endif

} // namespace cas::kernels
