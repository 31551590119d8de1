#include "loopsym/kernels.hpp"

#include <cmath>
#include <immintrin.h>

// AVX2 variants. Each kernel performs the same per-element operations in the
// same order as the scalar reference (multiply/addsub instead of fused ops),
// so the two backends agree to the last few ulps and can be cross-checked.

namespace loopsym::kernels {
namespace {

void axpby_avx2(double a, const double* x, double b, const double* y, double* out, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    const __m256d vb = _mm256_set1_pd(b);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d vx = _mm256_loadu_pd(x + i);
        const __m256d vy = _mm256_loadu_pd(y + i);
        _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_mul_pd(va, vx), _mm256_mul_pd(vb, vy)));
    }
    for (; i < n; ++i) out[i] = a * x[i] + b * y[i];
}

// s * [p, q] for complex scalar s and two packed complex doubles.
inline __m256d cmul2(double sr, double si, __m256d v) {
    const __m256d t1 = _mm256_mul_pd(_mm256_set1_pd(sr), v);
    const __m256d t2 = _mm256_mul_pd(_mm256_set1_pd(si), _mm256_permute_pd(v, 0b0101));
    return _mm256_addsub_pd(t1, t2);
}

void batched_mul_sub_avx2(const cd* x, const cd* y, const cd* z, const cd* w, cd* out,
                          std::size_t batch, int r, int inner, int c) {
    const std::size_t lhs_sz = static_cast<std::size_t>(r) * inner;
    const std::size_t rhs_sz = static_cast<std::size_t>(inner) * c;
    const std::size_t out_sz = static_cast<std::size_t>(r) * c;
    const int c2 = c - (c & 1);  // columns handled two at a time
    for (std::size_t t = 0; t < batch; ++t) {
        const double* xt = reinterpret_cast<const double*>(x + t * lhs_sz);
        const double* yt = reinterpret_cast<const double*>(y + t * rhs_sz);
        const double* zt = reinterpret_cast<const double*>(z + t * lhs_sz);
        const double* wt = reinterpret_cast<const double*>(w + t * rhs_sz);
        cd* ot = out + t * out_sz;
        for (int i = 0; i < r; ++i) {
            for (int j = 0; j < c2; j += 2) {
                __m256d acc = _mm256_setzero_pd();
                for (int k = 0; k < inner; ++k) {
                    const double* xe = xt + 2 * (i * inner + k);
                    const double* ze = zt + 2 * (i * inner + k);
                    const __m256d vy = _mm256_loadu_pd(yt + 2 * (k * c + j));
                    const __m256d vw = _mm256_loadu_pd(wt + 2 * (k * c + j));
                    const __m256d p = cmul2(xe[0], xe[1], vy);
                    const __m256d q = cmul2(ze[0], ze[1], vw);
                    acc = _mm256_add_pd(acc, _mm256_sub_pd(p, q));
                }
                _mm256_storeu_pd(reinterpret_cast<double*>(ot + i * c + j), acc);
            }
            if (c & 1) {
                const int j = c - 1;
                const cd* xc = reinterpret_cast<const cd*>(xt);
                const cd* yc = reinterpret_cast<const cd*>(yt);
                const cd* zc = reinterpret_cast<const cd*>(zt);
                const cd* wc = reinterpret_cast<const cd*>(wt);
                cd acc(0.0, 0.0);
                for (int k = 0; k < inner; ++k)
                    acc += xc[i * inner + k] * yc[k * c + j] - zc[i * inner + k] * wc[k * c + j];
                ot[i * c + j] = acc;
            }
        }
    }
}

double sup_abs_avx2(const cd* x, std::size_t n) {
    const double* d = reinterpret_cast<const double*>(x);
    __m256d vmax = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d v = _mm256_loadu_pd(d + 2 * i);
        const __m256d sq = _mm256_mul_pd(v, v);
        vmax = _mm256_max_pd(vmax, _mm256_add_pd(sq, _mm256_permute_pd(sq, 0b0101)));
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, vmax);
    double m = std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3]));
    for (; i < n; ++i) {
        const double re = x[i].real(), im = x[i].imag();
        m = std::max(m, re * re + im * im);
    }
    return std::sqrt(m);
}

}  // namespace

const detail::KernelTable& detail::avx2_table() {
    static const KernelTable t{axpby_avx2, batched_mul_sub_avx2, sup_abs_avx2};
    return t;
}

}  // namespace loopsym::kernels
