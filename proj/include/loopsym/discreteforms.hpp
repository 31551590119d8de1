#pragma once

#include <cstddef>
#include <vector>

#include "loopsym/complexmat.hpp"

namespace loopsym {

/// Rectangular 2-D coordinate chart, nodes at u_i = u_min + i*h_u,
/// v_j = v_min + j*h_v. Node storage order is u-major (v fastest).
/// (p_u, p_v) is the base node used to normalize frame integration;
/// by default the node nearest the coordinate origin.
struct GridChart {
    double u_min = 0, u_max = 0, v_min = 0, v_max = 0;
    int n_u = 0, n_v = 0;
    int p_u = 0, p_v = 0;

    static GridChart make(double u_min, double u_max, double v_min, double v_max, int n_u, int n_v);

    double h_u() const { return (u_max - u_min) / (n_u - 1); }
    double h_v() const { return (v_max - v_min) / (n_v - 1); }
    double u(int iu) const { return u_min + iu * h_u(); }
    double v(int iv) const { return v_min + iv * h_v(); }
    std::size_t count() const { return static_cast<std::size_t>(n_u) * n_v; }
    std::size_t index(int iu, int iv) const { return static_cast<std::size_t>(iu) * n_v + iv; }
    std::size_t base_index() const { return index(p_u, p_v); }

    bool same_geometry(const GridChart& o) const;
};

/// Matrix-valued 1-form A = A_u du + A_v dv sampled per node; coefficients
/// are n x n complex, stored row-major in node-major contiguous arrays.
struct MatrixOneForm {
    GridChart chart;
    int n = 0;
    std::vector<cd> cu, cv;

    MatrixOneForm() = default;
    MatrixOneForm(const GridChart& chart_, int n_);

    std::size_t stride() const { return static_cast<std::size_t>(n) * n; }
    cd* u_at(int iu, int iv) { return cu.data() + chart.index(iu, iv) * stride(); }
    cd* v_at(int iu, int iv) { return cv.data() + chart.index(iu, iv) * stride(); }
    const cd* u_at(int iu, int iv) const { return cu.data() + chart.index(iu, iv) * stride(); }
    const cd* v_at(int iu, int iv) const { return cv.data() + chart.index(iu, iv) * stride(); }

    CMat u_mat(int iu, int iv) const;
    CMat v_mat(int iu, int iv) const;
    void set_u(int iu, int iv, const CMat& m);
    void set_v(int iu, int iv, const CMat& m);

    bool is_finite() const;
};

/// Matrix-valued 2-form, the single du^dv coefficient per node.
struct MatrixTwoForm {
    GridChart chart;
    int n = 0;
    std::vector<cd> cuv;

    MatrixTwoForm() = default;
    MatrixTwoForm(const GridChart& chart_, int n_);

    std::size_t stride() const { return static_cast<std::size_t>(n) * n; }
    cd* at(int iu, int iv) { return cuv.data() + chart.index(iu, iv) * stride(); }
    const cd* at(int iu, int iv) const { return cuv.data() + chart.index(iu, iv) * stride(); }
    CMat mat(int iu, int iv) const;
};

/// dA with coefficient d_u A_v - d_v A_u: central differences in the
/// interior, one-sided 3-point stencils on the boundary (both second order).
MatrixTwoForm exterior_derivative(const MatrixOneForm& a);

/// (X ^ Y) with coefficient X_u Y_v - X_v Y_u (matrix products per node).
MatrixTwoForm wedge(const MatrixOneForm& x, const MatrixOneForm& y);

/// Entrywise sup of a two-form over interior nodes only (boundary stencils
/// are excluded from every residual norm).
double sup_abs_interior(const MatrixTwoForm& f);

/// sup over interior nodes of |dA + A ^ A|.
double mc_residual(const MatrixOneForm& a);

}  // namespace loopsym
