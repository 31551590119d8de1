#pragma once

#include <complex>
#include <cstddef>
#include <string>

// Hot per-node loops (form derivatives, wedge products, residual norms) run
// through this kernel layer. Every kernel has a scalar reference
// implementation and, on x86 with AVX2+FMA, a vectorized variant selected at
// runtime. Both variants compute the same quantity with the same reduction
// semantics so they can be equivalence-tested against each other.

namespace loopsym::kernels {

using cd = std::complex<double>;

enum class Backend { scalar, avx2 };

/// Backend currently used by the dispatched entry points.
Backend active_backend();

/// Force a backend (tests, benchmarking). Throws if unsupported on this CPU.
/// The LOOPSYM_KERNELS environment variable ("scalar"/"avx2") wins at startup.
void set_backend(Backend b);

bool backend_available(Backend b);
std::string backend_name(Backend b);

/// out[i] = a*x[i] + b*y[i] over plain doubles. Complex arrays with real
/// scalars are handled by viewing them as doubles of twice the length.
void axpby(double a, const double* x, double b, const double* y, double* out, std::size_t n);

/// Per-item difference of two complex matrix products:
///   out[t] = X[t]*Y[t] - Z[t]*W[t],
/// X,Z row-major r x inner, Y,W row-major inner x c, out row-major r x c.
void batched_mul_sub(const cd* x, const cd* y, const cd* z, const cd* w, cd* out,
                     std::size_t batch, int r, int inner, int c);

/// max_i |x[i]|, computed as sqrt(max_i(re^2+im^2)) in both backends.
double sup_abs(const cd* x, std::size_t n);

namespace detail {
struct KernelTable {
    void (*axpby)(double, const double*, double, const double*, double*, std::size_t);
    void (*batched_mul_sub)(const cd*, const cd*, const cd*, const cd*, cd*, std::size_t, int, int, int);
    double (*sup_abs)(const cd*, std::size_t);
};
const KernelTable& scalar_table();
#ifdef LOOPSYM_HAVE_AVX2_SOURCES
const KernelTable& avx2_table();
#endif
}  // namespace detail

}  // namespace loopsym::kernels
