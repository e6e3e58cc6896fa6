#include "cas/kernels.hpp"
#include "cas/detail/exp_core.hpp"

#include <immintrin.h>

namespace cas::kernels {

namespace {

using detail::exp_scalar;

// Valid only for lanes with x in [kLo, kHi]; callers fix up the rest.
inline __m256d exp4_core(__m256d x) {
    const __m256d log2e = _mm256_set1_pd(detail::kLog2e);
    const __m256d ln2hi = _mm256_set1_pd(detail::kLn2Hi);
    const __m256d ln2lo = _mm256_set1_pd(detail::kLn2Lo);

    const __m256d m = _mm256_round_pd(_mm256_mul_pd(x, log2e),
                                      _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fnmadd_pd(m, ln2hi, x);
    r = _mm256_fnmadd_pd(m, ln2lo, r);

    __m256d p = _mm256_set1_pd(detail::kP[11]);
    for (int i = 10; i >= 0; --i)
        p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(detail::kP[i]));
    const __m256d z = _mm256_fmadd_pd(p, _mm256_mul_pd(r, r), r);

    const __m128i m32 = _mm256_cvtpd_epi32(m);
    const __m256i m64 = _mm256_cvtepi32_epi64(m32);
    const __m256i bits = _mm256_slli_epi64(_mm256_add_epi64(m64, _mm256_set1_epi64x(1023)), 52);
    const __m256d scale = _mm256_castsi256_pd(bits);
    return _mm256_fmadd_pd(scale, z, scale);
}

inline int inrange_mask(__m256d x) {
    const __m256d lo = _mm256_set1_pd(detail::kLo);
    const __m256d hi = _mm256_set1_pd(detail::kHi);
    const __m256d ok = _mm256_and_pd(_mm256_cmp_pd(x, lo, _CMP_GE_OQ),
                                     _mm256_cmp_pd(x, hi, _CMP_LE_OQ));
    return _mm256_movemask_pd(ok);
}

void exp_v_avx2(const double* x, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d xv = _mm256_loadu_pd(x + i);
        if (inrange_mask(xv) == 0xf) {
            _mm256_storeu_pd(out + i, exp4_core(xv));
        } else {
            for (int k = 0; k < 4; ++k) out[i + k] = exp_scalar(x[i + k]);
        }
    }
    for (; i < n; ++i) out[i] = exp_scalar(x[i]);
}

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double dot_exp_avx2(const double* w, const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    double tail = 0.0;
    for (; i + 4 <= n; i += 4) {
        const __m256d xv = _mm256_loadu_pd(x + i);
        if (inrange_mask(xv) == 0xf) {
            acc = _mm256_fmadd_pd(_mm256_loadu_pd(w + i), exp4_core(xv), acc);
        } else {
            for (int k = 0; k < 4; ++k) tail += w[i + k] * exp_scalar(x[i + k]);
        }
    }
    for (; i < n; ++i) tail += w[i] * exp_scalar(x[i]);
    return hsum(acc) + tail;
}

void exp_ray_avx2(const double* w, const double* c, double z, std::size_t n,
                  double* value, double* slope) {
    const __m256d zv = _mm256_set1_pd(z);
    __m256d vacc = _mm256_setzero_pd();
    __m256d sacc = _mm256_setzero_pd();
    double vtail = 0.0, stail = 0.0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d cv = _mm256_loadu_pd(c + i);
        const __m256d xv = _mm256_mul_pd(cv, zv);
        if (inrange_mask(xv) == 0xf) {
            const __m256d e = _mm256_mul_pd(_mm256_loadu_pd(w + i), exp4_core(xv));
            vacc = _mm256_add_pd(vacc, e);
            sacc = _mm256_fmadd_pd(cv, e, sacc);
        } else {
            for (int k = 0; k < 4; ++k) {
                const double e = w[i + k] * exp_scalar(c[i + k] * z);
                vtail += e;
                stail += c[i + k] * e;
            }
        }
    }
    for (; i < n; ++i) {
        const double e = w[i] * exp_scalar(c[i] * z);
        vtail += e;
        stail += c[i] * e;
    }
    *value = hsum(vacc) + vtail;
    *slope = hsum(sacc) + stail;
}

} // namespace

const Kernels avx2_kernels = {"avx2", exp_v_avx2, dot_exp_avx2, exp_ray_avx2};

} // namespace cas::kernels
