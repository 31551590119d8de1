#include "loopsym/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace loopsym::kernels {
namespace {

void axpby_scalar(double a, const double* x, double b, const double* y, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a * x[i] + b * y[i];
}

void batched_mul_sub_scalar(const cd* x, const cd* y, const cd* z, const cd* w, cd* out,
                            std::size_t batch, int r, int inner, int c) {
    const std::size_t lhs_sz = static_cast<std::size_t>(r) * inner;
    const std::size_t rhs_sz = static_cast<std::size_t>(inner) * c;
    const std::size_t out_sz = static_cast<std::size_t>(r) * c;
    for (std::size_t t = 0; t < batch; ++t) {
        const cd* xt = x + t * lhs_sz;
        const cd* yt = y + t * rhs_sz;
        const cd* zt = z + t * lhs_sz;
        const cd* wt = w + t * rhs_sz;
        cd* ot = out + t * out_sz;
        for (int i = 0; i < r; ++i) {
            for (int j = 0; j < c; ++j) {
                cd acc(0.0, 0.0);
                for (int k = 0; k < inner; ++k)
                    acc += xt[i * inner + k] * yt[k * c + j] - zt[i * inner + k] * wt[k * c + j];
                ot[i * c + j] = acc;
            }
        }
    }
}

double sup_abs_scalar(const cd* x, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double re = x[i].real(), im = x[i].imag();
        m = std::max(m, re * re + im * im);
    }
    return std::sqrt(m);
}

}  // namespace

const detail::KernelTable& detail::scalar_table() {
    static const KernelTable t{axpby_scalar, batched_mul_sub_scalar, sup_abs_scalar};
    return t;
}

}  // namespace loopsym::kernels
