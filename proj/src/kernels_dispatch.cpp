#include "loopsym/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <stdexcept>

namespace loopsym::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(LOOPSYM_HAVE_AVX2_SOURCES) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const detail::KernelTable* table_for(Backend b) {
#ifdef LOOPSYM_HAVE_AVX2_SOURCES
    if (b == Backend::avx2) return &detail::avx2_table();
#endif
    (void)b;
    return &detail::scalar_table();
}

struct State {
    std::atomic<const detail::KernelTable*> table;
    std::atomic<Backend> backend;
    State() {
        Backend b = cpu_has_avx2() ? Backend::avx2 : Backend::scalar;
        if (const char* env = std::getenv("LOOPSYM_KERNELS")) {
            if (std::strcmp(env, "scalar") == 0) b = Backend::scalar;
            else if (std::strcmp(env, "avx2") == 0 && cpu_has_avx2()) b = Backend::avx2;
        }
        backend = b;
        table = table_for(b);
    }
};

State& state() {
    static State s;
    return s;
}

}  // namespace

Backend active_backend() { return state().backend.load(); }

bool backend_available(Backend b) {
    if (b == Backend::scalar) return true;
    return cpu_has_avx2();
}

std::string backend_name(Backend b) { return b == Backend::avx2 ? "avx2" : "scalar"; }

void set_backend(Backend b) {
    if (!backend_available(b)) throw std::runtime_error("kernel backend not available: " + backend_name(b));
    state().backend.store(b);
    state().table.store(table_for(b));
}

void axpby(double a, const double* x, double b, const double* y, double* out, std::size_t n) {
    state().table.load()->axpby(a, x, b, y, out, n);
}

void batched_mul_sub(const cd* x, const cd* y, const cd* z, const cd* w, cd* out,
                     std::size_t batch, int r, int inner, int c) {
    state().table.load()->batched_mul_sub(x, y, z, w, out, batch, r, inner, c);
}

double sup_abs(const cd* x, std::size_t n) { return state().table.load()->sup_abs(x, n); }

}  // namespace loopsym::kernels
