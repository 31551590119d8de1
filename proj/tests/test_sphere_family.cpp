#include <doctest.h>

#include <cmath>

#include "loopsym/geometry.hpp"

// Unit-circle locus coverage: the umbilic sphere of curvature c > 1 inside
// S^3 (epsilon = +1, r = s = 0). Exact component data:
//   theta = (du, cos(u) dv)/sqrt(c),  omega_12 = sin(u) dv,
//   beta = sqrt(c-1) theta,           eta = 0.
// Gauss and Codazzi hold analytically, so the family is flat for every
// lambda and both flat-space constructions apply with the e^{i phi} path.

using namespace loopsym;

namespace {

ComponentForms umbilic_sphere_components(const GridChart& g, double c) {
    SpaceFormSpec sp;
    sp.m = 2;
    sp.k = 1;
    sp.r = 0;
    sp.s = 0;
    sp.epsilon = 1;
    sp.c = c;
    ComponentForms cf = ComponentForms::zeros(sp, g);
    const double root_c = std::sqrt(c), kappa = std::sqrt(c - 1.0);
    for (int iu = 0; iu < g.n_u; ++iu) {
        for (int iv = 0; iv < g.n_v; ++iv) {
            const std::size_t node = g.index(iu, iv);
            const double u = g.u(iu);
            cf.theta_u[node * 2 + 0] = 1.0 / root_c;
            cf.theta_v[node * 2 + 1] = std::cos(u) / root_c;
            cf.omega_v[node * 4 + 1] = std::sin(u);
            cf.omega_v[node * 4 + 2] = -std::sin(u);
            cf.beta_u[node * 2 + 0] = kappa / root_c;
            cf.beta_v[node * 2 + 1] = kappa * std::cos(u) / root_c;
        }
    }
    return cf;
}

GridChart centered_chart(int n) { return GridChart::make(-1.0, 1.0, -1.0, 1.0, n, n); }

}  // namespace

TEST_CASE("umbilic sphere components are valid and flat for circle-locus lambda") {
    const double c = 2.0;
    CHECK(admissible_locus(c, 1) == Locus::unit_circle);

    double res[2];
    int idx = 0;
    for (int grid : {33, 65}) {
        const GridChart g = centered_chart(grid);
        const ComponentForms cf = umbilic_sphere_components(g, c);
        CHECK_NOTHROW(cf.validate());
        const SpectralPoint lam = SpectralPoint::from_parameter(Locus::unit_circle, 1.1);
        res[idx++] = mc_residual(assemble_family_form(cf, lam));
    }
    CHECK(res[0] > 0.0);
    CHECK(res[0] / res[1] > 3.5);
    CHECK(res[0] / res[1] < 4.5);
}

TEST_CASE("circle-locus sweep lands on the unit sphere with curvature c_lambda") {
    const double c = 2.0;
    const GridChart g = centered_chart(65);
    const ComponentForms cf = umbilic_sphere_components(g, c);
    const MetricBlocks j = make_metric(cf.spec);

    const SpectralPoint lam = SpectralPoint::from_parameter(Locus::unit_circle, 0.9);
    const FrameField f = integrate_frame(assemble_family_form(cf, lam), g, CMat::identity(4));
    ImmersionMesh mesh = extract_immersion(f, cf.spec);
    CHECK(mesh.target == TargetSpace::sphere);
    CHECK(quadric_residual(mesh, j) <= 1e-8);

    const double c_lam = c_of_lambda(lam.lambda, 1);
    CHECK(curvature_sup_error(pullback_metric(mesh, j.full_diag()), c_lam) < 50.0 * g.h_u() * g.h_u());
}

TEST_CASE("Sym extraction along the circle path agrees with the direct transfer") {
    // this chart is also integration-exact (u-dependence sits in the dv
    // coefficients only), so the gap is pure Sym truncation, O(dstep^2)
    const double c = 2.0;
    for (int grid : {33, 65}) {
        const GridChart g = centered_chart(grid);
        const ComponentForms cf = umbilic_sphere_components(g, c);
        const ImmersionMesh sym = sym_extract(cf, g, 1e-4);
        const ImmersionMesh transfer = direct_transfer(cf, g);
        CHECK(sym.at(g.p_u, g.p_v)[0] == 0.0);
        CHECK(sym.at(g.p_u, g.p_v)[2] == 0.0);
        double worst = 0.0;
        for (std::size_t i = 0; i < sym.x.size(); ++i)
            worst = std::max(worst, std::abs(sym.x[i] - transfer.x[i]));
        CHECK(worst <= 1e-6);
    }
}

TEST_CASE("deformation snapshots are real on the unit circle") {
    const double c = 2.0;
    const GridChart g = centered_chart(17);
    const ComponentForms cf = umbilic_sphere_components(g, c);
    const SpectralPoint lam = SpectralPoint::from_parameter(Locus::unit_circle, 0.7);
    const FrameField f = integrate_frame(assemble_family_form(cf, lam), g, CMat::identity(4));
    ImmersionMesh mesh = extract_immersion(f, cf.spec);
    const ImmersionMesh snap = deformation_snapshot(mesh, lam, cf.spec);
    CHECK(snap.target == TargetSpace::flat);
    const double* origin = snap.at(g.p_u, g.p_v);
    CHECK(origin[0] == 0.0);
    CHECK(origin[1] == 0.0);
}

TEST_CASE("the transferred umbilic sphere is a round sphere of radius 1/sqrt(c)") {
    // in flat R^3 a surface with metric (1/c)(du^2 + cos^2 u dv^2) and
    // umbilic curvature sqrt(c) is a sphere of radius 1/sqrt(c); the
    // transferred mesh must keep that distance from its own center
    const double c = 2.0;
    const GridChart g = centered_chart(33);
    const ComponentForms cf = umbilic_sphere_components(g, c);
    const ImmersionMesh mesh = direct_transfer(cf, g);

    // the mesh passes through the origin, so |x - c0| = r reduces to the
    // linear least-squares problem 2 x.c0 = x.x for the center c0
    const double r = 1.0 / std::sqrt(c);
    double best[3] = {0.0, 0.0, 0.0};
    double m[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
    double rhs[3] = {0, 0, 0};
    for (std::size_t node = 0; node < g.count(); ++node) {
        const double* x = mesh.x.data() + node * 3;
        double xx = 0.0;
        for (int i = 0; i < 3; ++i) xx += x[i] * x[i];
        for (int i = 0; i < 3; ++i) {
            rhs[i] += x[i] * xx;
            for (int k = 0; k < 3; ++k) m[i][k] += 2.0 * x[i] * x[k];
        }
    }
    // 3x3 solve via the complex helper
    CMat a(3, 3), b(3, 1);
    for (int i = 0; i < 3; ++i) {
        b(i, 0) = rhs[i];
        for (int k = 0; k < 3; ++k) a(i, k) = m[i][k];
    }
    const CMat center = solve(a, b);
    for (int i = 0; i < 3; ++i) best[i] = center(i, 0).real();

    double worst = 0.0;
    for (std::size_t node = 0; node < g.count(); ++node) {
        const double* x = mesh.x.data() + node * 3;
        double d2 = 0.0;
        for (int i = 0; i < 3; ++i) d2 += (x[i] - best[i]) * (x[i] - best[i]);
        worst = std::max(worst, std::abs(std::sqrt(d2) - r));
    }
    CHECK(worst < 1e-3);
}
