#pragma once

#include <cmath>

namespace cas {

// Standard normal quantile (Wichura's AS 241, double precision).
// Requires p strictly inside (0,1); throws std::domain_error otherwise.
double norm_inv(double p);

inline double norm_pdf(double x) {
    return 0.39894228040143267794 * std::exp(-0.5 * x * x);
}

// CDF and upper tail via erfc; accurate far into both tails.
inline double norm_cdf(double x) { return 0.5 * std::erfc(-x * 0.70710678118654752440); }
inline double norm_sf(double x) { return 0.5 * std::erfc(x * 0.70710678118654752440); }

} // namespace cas
