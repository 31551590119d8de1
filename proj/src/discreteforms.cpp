#include "loopsym/discreteforms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "loopsym/kernels.hpp"

namespace loopsym {

GridChart GridChart::make(double u_min, double u_max, double v_min, double v_max, int n_u, int n_v) {
    if (n_u < 3 || n_v < 3) throw std::invalid_argument("GridChart: node counts must be >= 3");
    if (!(u_max > u_min) || !(v_max > v_min)) throw std::invalid_argument("GridChart: empty coordinate range");
    GridChart g{u_min, u_max, v_min, v_max, n_u, n_v, 0, 0};
    auto nearest = [](double lo, double h, int n, double target) {
        int i = static_cast<int>(std::lround((target - lo) / h));
        return std::clamp(i, 0, n - 1);
    };
    g.p_u = nearest(u_min, g.h_u(), n_u, 0.0);
    g.p_v = nearest(v_min, g.h_v(), n_v, 0.0);
    return g;
}

bool GridChart::same_geometry(const GridChart& o) const {
    return u_min == o.u_min && u_max == o.u_max && v_min == o.v_min && v_max == o.v_max &&
           n_u == o.n_u && n_v == o.n_v;
}

MatrixOneForm::MatrixOneForm(const GridChart& chart_, int n_)
    : chart(chart_), n(n_), cu(chart_.count() * static_cast<std::size_t>(n_) * n_),
      cv(chart_.count() * static_cast<std::size_t>(n_) * n_) {}

MatrixTwoForm::MatrixTwoForm(const GridChart& chart_, int n_)
    : chart(chart_), n(n_), cuv(chart_.count() * static_cast<std::size_t>(n_) * n_) {}

namespace {

CMat to_mat(const cd* p, int n) {
    CMat m(n, n);
    std::copy(p, p + static_cast<std::size_t>(n) * n, m.data());
    return m;
}

void from_mat(cd* p, const CMat& m) { std::copy(m.data(), m.data() + m.size(), p); }

}  // namespace

CMat MatrixOneForm::u_mat(int iu, int iv) const { return to_mat(u_at(iu, iv), n); }
CMat MatrixOneForm::v_mat(int iu, int iv) const { return to_mat(v_at(iu, iv), n); }
void MatrixOneForm::set_u(int iu, int iv, const CMat& m) { from_mat(u_at(iu, iv), m); }
void MatrixOneForm::set_v(int iu, int iv, const CMat& m) { from_mat(v_at(iu, iv), m); }
CMat MatrixTwoForm::mat(int iu, int iv) const { return to_mat(at(iu, iv), n); }

bool MatrixOneForm::is_finite() const {
    auto ok = [](const std::vector<cd>& v) {
        for (const cd& x : v)
            if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) return false;
        return true;
    };
    return ok(cu) && ok(cv);
}

namespace {

inline const double* dptr(const std::vector<cd>& v, std::size_t complex_offset) {
    return reinterpret_cast<const double*>(v.data() + complex_offset);
}
inline double* dptr(std::vector<cd>& v, std::size_t complex_offset) {
    return reinterpret_cast<double*>(v.data() + complex_offset);
}

// out = (f1*x1 + f2*x2) + f3*x3 over doubles.
void comb3(double f1, const double* x1, double f2, const double* x2, double f3, const double* x3,
           double* out, std::size_t len) {
    kernels::axpby(f1, x1, f2, x2, out, len);
    kernels::axpby(1.0, out, f3, x3, out, len);
}

// Second-order derivative of a node-major array along the u direction
// (slab-contiguous) into out.
void derive_u(const std::vector<cd>& in, std::vector<cd>& out, const GridChart& g, std::size_t stride) {
    const std::size_t slab = static_cast<std::size_t>(g.n_v) * stride * 2;  // doubles per iu
    const double inv2h = 1.0 / (2.0 * g.h_u());
    const double* s = dptr(in, 0);
    double* o = dptr(out, 0);
    // interior slabs in one pass: out[iu] = (in[iu+1] - in[iu-1]) / 2h
    kernels::axpby(inv2h, s + 2 * slab, -inv2h, s, o + slab, (static_cast<std::size_t>(g.n_u) - 2) * slab);
    // one-sided ends
    comb3(-3.0 * inv2h, s, 4.0 * inv2h, s + slab, -inv2h, s + 2 * slab, o, slab);
    const std::size_t last = (static_cast<std::size_t>(g.n_u) - 1) * slab;
    comb3(3.0 * inv2h, s + last, -4.0 * inv2h, s + last - slab, inv2h, s + last - 2 * slab, o + last, slab);
}

// Same along the v direction (shifts of one node within each slab).
void derive_v(const std::vector<cd>& in, std::vector<cd>& out, const GridChart& g, std::size_t stride) {
    const std::size_t row = stride * 2;  // doubles per node
    const std::size_t slab = static_cast<std::size_t>(g.n_v) * row;
    const double inv2h = 1.0 / (2.0 * g.h_v());
    for (int iu = 0; iu < g.n_u; ++iu) {
        const double* s = dptr(in, 0) + static_cast<std::size_t>(iu) * slab;
        double* o = dptr(out, 0) + static_cast<std::size_t>(iu) * slab;
        kernels::axpby(inv2h, s + 2 * row, -inv2h, s, o + row, (static_cast<std::size_t>(g.n_v) - 2) * row);
        comb3(-3.0 * inv2h, s, 4.0 * inv2h, s + row, -inv2h, s + 2 * row, o, row);
        const std::size_t lastrow = (static_cast<std::size_t>(g.n_v) - 1) * row;
        comb3(3.0 * inv2h, s + lastrow, -4.0 * inv2h, s + lastrow - row, inv2h, s + lastrow - 2 * row,
              o + lastrow, row);
    }
}

}  // namespace

MatrixTwoForm exterior_derivative(const MatrixOneForm& a) {
    if (a.chart.n_u < 3 || a.chart.n_v < 3) throw std::invalid_argument("exterior_derivative: chart too small");
    MatrixTwoForm out(a.chart, a.n);
    std::vector<cd> dv_au(out.cuv.size());
    derive_u(a.cv, out.cuv, a.chart, a.stride());
    derive_v(a.cu, dv_au, a.chart, a.stride());
    kernels::axpby(1.0, reinterpret_cast<const double*>(out.cuv.data()), -1.0,
                   reinterpret_cast<const double*>(dv_au.data()),
                   reinterpret_cast<double*>(out.cuv.data()), out.cuv.size() * 2);
    return out;
}

MatrixTwoForm wedge(const MatrixOneForm& x, const MatrixOneForm& y) {
    if (!x.chart.same_geometry(y.chart) || x.n != y.n)
        throw std::invalid_argument("wedge: chart or dimension mismatch");
    MatrixTwoForm out(x.chart, x.n);
    kernels::batched_mul_sub(x.cu.data(), y.cv.data(), x.cv.data(), y.cu.data(), out.cuv.data(),
                             x.chart.count(), x.n, x.n, x.n);
    return out;
}

double sup_abs_interior(const MatrixTwoForm& f) {
    const GridChart& g = f.chart;
    const std::size_t stride = f.stride();
    double worst = 0.0;
    for (int iu = 1; iu + 1 < g.n_u; ++iu) {
        const cd* p = f.cuv.data() + g.index(iu, 1) * stride;
        worst = std::max(worst, kernels::sup_abs(p, (static_cast<std::size_t>(g.n_v) - 2) * stride));
    }
    return worst;
}

double mc_residual(const MatrixOneForm& a) {
    MatrixTwoForm d = exterior_derivative(a);
    const MatrixTwoForm w = wedge(a, a);
    kernels::axpby(1.0, reinterpret_cast<const double*>(d.cuv.data()), 1.0,
                   reinterpret_cast<const double*>(w.cuv.data()),
                   reinterpret_cast<double*>(d.cuv.data()), d.cuv.size() * 2);
    return sup_abs_interior(d);
}

}  // namespace loopsym
