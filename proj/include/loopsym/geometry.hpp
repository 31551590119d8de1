#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "loopsym/integrator.hpp"
#include "loopsym/loopfamily.hpp"

namespace loopsym {

/// Per-node 2x2 symmetric metric samples, stored as (g_uu, g_uv, g_vv).
struct MetricSample {
    GridChart chart;
    std::vector<double> g;

    MetricSample() = default;
    explicit MetricSample(const GridChart& chart_) : chart(chart_), g(chart_.count() * 3) {}

    double* at(int iu, int iv) { return g.data() + chart.index(iu, iv) * 3; }
    const double* at(int iu, int iv) const { return g.data() + chart.index(iu, iv) * 3; }
};

struct ResidualCheck {
    std::string name;
    double value = 0.0;
    double tol = 0.0;
    bool pass() const { return value <= tol; }
};

/// Named residuals with tolerances and pass flags; serialized as one
/// `name = value (tol = t, pass|fail)` line per check.
struct ResidualReport {
    SpaceFormSpec spec;
    double h = 0.0;
    double dstep = 0.0;
    std::vector<ResidualCheck> checks;

    void add(const std::string& name, double value, double tol) { checks.push_back({name, value, tol}); }
    bool all_pass() const;
    void write(std::ostream& out) const;
};

/// g_ab = sum_i (J1)_ii theta^i_a theta^i_b (signature-weighted pullback).
MetricSample induced_metric(const ComponentForms& cf, const MetricBlocks& j);

/// sup over interior nodes of |d omega + omega ^ omega - c theta ^ theta^t J1|.
double constant_curvature_residual(const ComponentForms& cf, const MetricBlocks& j, double c);

/// sup over interior nodes of |d eta + eta ^ eta|.
double normal_flatness_residual(const ComponentForms& cf);

/// Direct transfer to flat space: integrate the affine form with the identity
/// at the base node and keep the translation block.
ImmersionMesh direct_transfer(const ComponentForms& cf, const GridChart& chart);

/// Parameterization of the reality locus through lambda = i used for the
/// Sym derivative; the derivative dlambda/dt is evaluated from the chosen
/// path, never hard-coded.
enum class SymPath { exponential, linear };

/// Sym-type extraction of the flat immersion:
///   (1/sqrt(eps c)) pi_{m+k} d/dlambda f_lambda at lambda = i,
/// computed as a central difference along the locus path. Rejects curvatures
/// whose locus (the real axis) never reaches i.
ImmersionMesh sym_extract(const ComponentForms& cf, const GridChart& chart, double dstep,
                          SymPath path = SymPath::exponential, double realness_tol = 1e-8);

struct SymResult {
    ImmersionMesh mesh;
    double realness_rel = 0.0;  // worst imaginary part relative to the mesh scale
};

/// sym_extract plus the measured realness residual (for reports).
SymResult sym_extract_detailed(const ComponentForms& cf, const GridChart& chart, double dstep,
                               SymPath path = SymPath::exponential, double realness_tol = 1e-8);

/// The deformation family member
///   fhat_lambda = 2/(sqrt(eps c)(lambda+1/lambda)) (f_lambda - e_last);
/// connects the displaced original immersion (lambda = lambda0) to the Sym
/// limit. Rejects lambda in {0, +-i}.
ImmersionMesh deformation_snapshot(const ImmersionMesh& f_mesh, const SpectralPoint& lam,
                                   const SpaceFormSpec& spec, double realness_tol = 1e-8);

/// max over nodes of the Euclidean distance to the base-node position.
double collapse_diameter(const ImmersionMesh& f_mesh);

/// Mesh-side metric oracle: second-order finite differences of the positions
/// contracted with the ambient diagonal metric.
MetricSample pullback_metric(const ImmersionMesh& mesh, const std::vector<double>& ambient_diag);

/// Gauss curvature from metric samples via the Brioschi formula; valid where
/// the stencil fits (margin 1 inside the sample), NaN elsewhere.
std::vector<double> brioschi_curvature(const MetricSample& m);

/// sup over nodes at least `margin` from the boundary of |K - c_expected|.
double curvature_sup_error(const MetricSample& m, double c_expected, int margin = 2);

/// sup over interior nodes of the entrywise metric difference.
double metric_sup_difference_interior(const MetricSample& a, const MetricSample& b);

/// max over nodes of |x^t J x - epsilon| for quadric-target meshes.
double quadric_residual(const ImmersionMesh& mesh, const MetricBlocks& j);

}  // namespace loopsym
