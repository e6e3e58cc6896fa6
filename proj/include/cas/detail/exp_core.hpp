#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>

// Shared core of the vectorizable exp: round-to-nearest power-of-two
// reduction, degree-13 Taylor tail evaluated by Horner with fused
// multiply-adds. The scalar and AVX2 paths run the identical operation
// sequence, so elementwise results agree bit-for-bit. Inputs outside
// [kLo, kHi] take the libm fallback in both paths.
namespace cas::kernels::detail {

inline constexpr double kLog2e  = 1.4426950408889634073599246810019;
inline constexpr double kLn2Hi  = 0.693145751953125;
inline constexpr double kLn2Lo  = 1.42860682030941723212e-6;
inline constexpr double kHi     = 708.0;
inline constexpr double kLo     = -708.0;

// 1/2! .. 1/13!
inline constexpr double kP[12] = {
    5.00000000000000000000e-1, 1.66666666666666666667e-1,
    4.16666666666666666667e-2, 8.33333333333333333333e-3,
    1.38888888888888888889e-3, 1.98412698412698412698e-4,
    2.48015873015873015873e-5, 2.75573192239858906526e-6,
    2.75573192239858906526e-7, 2.50521083854417187751e-8,
    2.08767569878680989792e-9, 1.60590438368216145994e-10,
};

inline double exp_scalar(double x) {
    if (!(x >= kLo && x <= kHi)) return std::exp(x); // fallback incl. NaN
    const double m = std::nearbyint(x * kLog2e);
    double r = std::fma(-m, kLn2Hi, x);
    r = std::fma(-m, kLn2Lo, r);
    double p = kP[11];
    for (int i = 10; i >= 0; --i) p = std::fma(p, r, kP[i]);
    const double z = std::fma(p, r * r, r); // expm1(r)
    const std::int64_t bits = (static_cast<std::int64_t>(m) + 1023) << 52;
    double scale;
    std::memcpy(&scale, &bits, sizeof scale);
    return std::fma(scale, z, scale);
}

} // namespace cas::kernels::detail
