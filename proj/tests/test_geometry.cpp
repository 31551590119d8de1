#include <doctest.h>

#include <cmath>
#include <sstream>

#include "loopsym/geometry.hpp"
#include "loopsym/oracle.hpp"
#include "rotated_oracle.hpp"

using namespace loopsym;

namespace {

GridChart centered_chart(int n) { return GridChart::make(-1.0, 1.0, -1.0, 1.0, n, n); }

// flat components with identity coframe theta = (du, dv)
ComponentForms identity_coframe(const SpaceFormSpec& spec, const GridChart& g) {
    ComponentForms cf = ComponentForms::zeros(spec, g);
    for (std::size_t node = 0; node < g.count(); ++node) {
        cf.theta_u[node * 2 + 0] = 1.0;
        cf.theta_v[node * 2 + 1] = 1.0;
    }
    return cf;
}

SpaceFormSpec flat_spec(int r, int s, int eps, double c) {
    SpaceFormSpec sp;
    sp.m = 2;
    sp.k = 1;
    sp.r = r;
    sp.s = s;
    sp.epsilon = eps;
    sp.c = c;
    return sp;
}

double mesh_vs_flat_oracle(const ImmersionMesh& mesh, double c) {
    double worst = 0.0;
    for (int iu = 0; iu < mesh.chart.n_u; ++iu)
        for (int iv = 0; iv < mesh.chart.n_v; ++iv) {
            const auto ref = oracle::desitter_flat_immersion(mesh.chart.u(iu), mesh.chart.v(iv), c);
            for (int i = 0; i < 3; ++i)
                worst = std::max(worst, std::abs(mesh.at(iu, iv)[i] - ref[static_cast<std::size_t>(i)]));
        }
    return worst;
}

}  // namespace

TEST_CASE("induced metric weights the coframe by the intrinsic signature") {
    const GridChart g = centered_chart(7);

    const ComponentForms flat = identity_coframe(flat_spec(0, 0, 1, -1.0), g);
    const MetricSample m1 = induced_metric(flat, make_metric(flat.spec));
    CHECK(m1.at(3, 3)[0] == 1.0);
    CHECK(m1.at(3, 3)[1] == 0.0);
    CHECK(m1.at(3, 3)[2] == 1.0);

    const ComponentForms lorentz = identity_coframe(flat_spec(1, 1, 1, -1.0), g);
    const MetricSample m2 = induced_metric(lorentz, make_metric(lorentz.spec));
    CHECK(m2.at(2, 5)[0] == 1.0);
    CHECK(m2.at(2, 5)[2] == -1.0);

    const ComponentForms cf = oracle::desitter_components(g);
    const MetricSample m3 = induced_metric(cf, make_metric(cf.spec));
    for (int iu = 0; iu < g.n_u; ++iu)
        for (int iv = 0; iv < g.n_v; ++iv) {
            const double ch = std::cosh(g.u(iu));
            CHECK(std::abs(m3.at(iu, iv)[0] + 1.0) < 1e-12);
            CHECK(std::abs(m3.at(iu, iv)[1]) < 1e-12);
            CHECK(std::abs(m3.at(iu, iv)[2] - ch * ch) < 1e-12);
        }
}

TEST_CASE("constant-curvature residual: convergence and wrong-c negative control") {
    const MetricBlocks j = make_metric(oracle::desitter_spec(1.0));

    const ComponentForms zero = ComponentForms::zeros(flat_spec(0, 0, 1, -2.0), centered_chart(7));
    CHECK(constant_curvature_residual(zero, make_metric(zero.spec), 3.7) == 0.0);

    double res[2], wrong[2];
    int idx = 0;
    for (int grid : {33, 65}) {
        const ComponentForms cf = oracle::desitter_components(centered_chart(grid));
        res[idx] = constant_curvature_residual(cf, j, 1.0);
        wrong[idx] = constant_curvature_residual(cf, j, 2.0);
        ++idx;
    }
    CHECK(res[0] > 0.0);
    CHECK(res[0] / res[1] > 3.5);
    CHECK(res[0] / res[1] < 4.5);
    // the wrong curvature leaves an O(1) defect c_wrong - c times theta^theta^t J1
    CHECK(wrong[0] > 0.5);
    CHECK(wrong[1] > 0.5);
}

TEST_CASE("normal flatness residual") {
    const GridChart g = centered_chart(9);
    const ComponentForms k1 = oracle::desitter_components(g);
    CHECK(normal_flatness_residual(k1) == 0.0);  // so(1) = {0}

    // synthetic k = 2 with eta = [[0, u dv], [-u dv, 0]]: d eta has a unit entry
    SpaceFormSpec sp;
    sp.m = 2; sp.k = 2; sp.r = 0; sp.s = 0; sp.epsilon = 1; sp.c = -1.0;
    ComponentForms cf = ComponentForms::zeros(sp, g);
    for (int iu = 0; iu < g.n_u; ++iu)
        for (int iv = 0; iv < g.n_v; ++iv) {
            const std::size_t node = g.index(iu, iv);
            cf.theta_u[node * 2 + 0] = 1.0;
            cf.theta_v[node * 2 + 1] = 1.0;
            cf.eta_v[node * 4 + 1] = g.u(iu);
            cf.eta_v[node * 4 + 2] = -g.u(iu);
        }
    CHECK(normal_flatness_residual(cf) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("direct transfer reproduces the closed-form flat immersion") {
    const GridChart g = centered_chart(33);
    const ComponentForms cf = oracle::desitter_components(g);
    const ImmersionMesh mesh = direct_transfer(cf, g);
    CHECK(mesh.target == TargetSpace::flat);
    CHECK(mesh.dim == 3);
    const double* origin = mesh.at(g.p_u, g.p_v);
    CHECK(origin[0] == 0.0);
    CHECK(origin[1] == 0.0);
    CHECK(origin[2] == 0.0);
    CHECK(mesh_vs_flat_oracle(mesh, 1.0) <= 1e-2);
}

TEST_CASE("transfer converges at second order on rotated sampling") {
    const testsupport::RotatedOracle rot;
    double err[2];
    int idx = 0;
    for (int grid : {33, 65}) {
        const GridChart g = centered_chart(grid);
        const ImmersionMesh mesh = direct_transfer(rot.components(g), g);
        double e = 0.0;
        for (int iu = 0; iu < g.n_u; ++iu)
            for (int iv = 0; iv < g.n_v; ++iv) {
                const auto ref = rot.flat_immersion(g.u(iu), g.v(iv));
                for (int i = 0; i < 3; ++i)
                    e = std::max(e, std::abs(mesh.at(iu, iv)[i] - ref[static_cast<std::size_t>(i)]));
            }
        err[idx++] = e;
    }
    CHECK(err[1] <= 1e-2);
    CHECK(err[0] / err[1] > 3.5);
    CHECK(err[0] / err[1] < 4.5);
}

TEST_CASE("transfer output carries the induced metric (pullback agreement)") {
    double dis[2];
    int idx = 0;
    for (int grid : {33, 65}) {
        const GridChart g = centered_chart(grid);
        const ComponentForms cf = oracle::desitter_components(g);
        const MetricBlocks j = make_metric(cf.spec);
        const ImmersionMesh mesh = direct_transfer(cf, g);
        dis[idx++] = metric_sup_difference_interior(pullback_metric(mesh, j.rotation_diag()),
                                                    induced_metric(cf, j));
    }
    CHECK(dis[1] < 5e-2);
    CHECK(dis[0] / dis[1] > 3.0);
    CHECK(dis[0] / dis[1] < 5.0);
}

TEST_CASE("transfer rejects curvatures outside the admissible interval") {
    const GridChart g = centered_chart(7);
    const ComponentForms cf = identity_coframe(flat_spec(0, 0, 1, 0.5), g);
    CHECK_THROWS_AS(direct_transfer(cf, g), std::domain_error);
    CHECK_THROWS_AS(sym_extract(cf, g, 1e-4), std::domain_error);
}

TEST_CASE("sym extraction matches the closed form and the node-p normalization") {
    const GridChart g = centered_chart(65);
    const ComponentForms cf = oracle::desitter_components(g);
    const ImmersionMesh sym = sym_extract(cf, g, 1e-4);
    CHECK(sym.dim == 3);

    const double* origin = sym.at(g.p_u, g.p_v);
    CHECK(origin[0] == 0.0);
    CHECK(origin[1] == 0.0);
    CHECK(origin[2] == 0.0);

    // spot value at (u,v) = (1,0): closed form gives (0, -sinh 1, 1 - cosh 1)
    const double* spot = sym.at(g.n_u - 1, g.p_v);
    CHECK(std::abs(spot[0] - 0.0) < 5e-3);
    CHECK(std::abs(spot[1] + std::sinh(1.0)) < 5e-3);
    CHECK(std::abs(spot[2] - (1.0 - std::cosh(1.0))) < 5e-3);

    CHECK(mesh_vs_flat_oracle(sym, 1.0) <= 1e-2);

    // both flat-space constructions share the base-node normalization
    const ImmersionMesh transfer = direct_transfer(cf, g);
    double diff = 0.0;
    for (std::size_t i = 0; i < sym.x.size(); ++i) diff = std::max(diff, std::abs(sym.x[i] - transfer.x[i]));
    CHECK(diff <= 2e-2);
}

TEST_CASE("pipeline is sound on rectangular grids") {
    const GridChart g = GridChart::make(-1.0, 1.0, -0.5, 1.5, 33, 17);
    const ComponentForms cf = oracle::desitter_components(g);
    const ImmersionMesh sym = sym_extract(cf, g, 1e-4);
    const ImmersionMesh transfer = direct_transfer(cf, g);
    double worst_sym = 0.0, worst_transfer = 0.0;
    for (int iu = 0; iu < g.n_u; ++iu)
        for (int iv = 0; iv < g.n_v; ++iv) {
            const auto ref = oracle::desitter_flat_immersion(g.u(iu), g.v(iv), 1.0);
            for (int i = 0; i < 3; ++i) {
                worst_sym = std::max(worst_sym, std::abs(sym.at(iu, iv)[i] - ref[static_cast<std::size_t>(i)]));
                worst_transfer =
                    std::max(worst_transfer, std::abs(transfer.at(iu, iv)[i] - ref[static_cast<std::size_t>(i)]));
            }
        }
    CHECK(worst_sym < 1e-7);
    CHECK(worst_transfer < 1e-10);
}

TEST_CASE("sym extraction is parameterization-independent to second order in dstep") {
    const GridChart g = centered_chart(17);
    const ComponentForms cf = oracle::desitter_components(g);
    double d[2];
    int idx = 0;
    for (double dstep : {1e-2, 2e-2}) {
        const ImmersionMesh a = sym_extract(cf, g, dstep, SymPath::exponential);
        const ImmersionMesh b = sym_extract(cf, g, dstep, SymPath::linear);
        double worst = 0.0;
        for (std::size_t i = 0; i < a.x.size(); ++i) worst = std::max(worst, std::abs(a.x[i] - b.x[i]));
        d[idx++] = worst;
    }
    CHECK(d[0] < 1e-3);
    CHECK(d[1] / d[0] > 3.0);
    CHECK(d[1] / d[0] < 5.0);
}

TEST_CASE("deformation snapshots interpolate between the immersion and the Sym limit") {
    const GridChart g = centered_chart(33);
    const double c = 1.0;
    const SpaceFormSpec spec = oracle::desitter_spec(c);

    // at lambda0 the scalar is 1 and the snapshot is the displaced immersion
    const cd l0 = lambda0(c, spec.epsilon);
    const ImmersionMesh ambient0 = oracle::desitter_position_mesh(g, l0, c);
    const ImmersionMesh snap0 = deformation_snapshot(ambient0, SpectralPoint::on_locus(l0), spec);
    // base node at the origin (the closed form only satisfies a^2 - b^2 = 1
    // to roundoff, so the last component carries ~1 ulp)
    const double* p0 = snap0.at(g.p_u, g.p_v);
    CHECK(p0[0] == 0.0);
    CHECK(std::abs(p0[3]) < 1e-14);
    double worst = 0.0;
    for (int iu = 0; iu < g.n_u; ++iu)
        for (int iv = 0; iv < g.n_v; ++iv)
            for (int i = 0; i < 4; ++i) {
                const double displaced = ambient0.at(iu, iv)[i] - (i == 3 ? 1.0 : 0.0);
                worst = std::max(worst, std::abs(snap0.at(iu, iv)[i] - displaced));
            }
    CHECK(worst < 1e-12);

    // closed-form snapshots converge to the closed-form Sym image at first order
    const double deltas[3] = {4e-3, 2e-3, 1e-3};
    double err[3];
    for (int n = 0; n < 3; ++n) {
        const cd lam(0.0, 1.0 + deltas[n]);
        const ImmersionMesh ambient = oracle::desitter_position_mesh(g, lam, c);
        const ImmersionMesh snap = deformation_snapshot(ambient, SpectralPoint::on_locus(lam), spec);
        double e = 0.0;
        for (int iu = 0; iu < g.n_u; ++iu)
            for (int iv = 0; iv < g.n_v; ++iv) {
                const auto ref = oracle::desitter_flat_immersion(g.u(iu), g.v(iv), c);
                for (int i = 0; i < 3; ++i)
                    e = std::max(e, std::abs(snap.at(iu, iv)[i] - ref[static_cast<std::size_t>(i)]));
                e = std::max(e, std::abs(snap.at(iu, iv)[3]));
            }
        err[n] = e;
    }
    CHECK(err[0] / err[1] > 1.7);
    CHECK(err[0] / err[1] < 2.3);
    CHECK(err[1] / err[2] > 1.7);
    CHECK(err[1] / err[2] < 2.3);

    // degenerate values are rejected
    const ImmersionMesh ambient = oracle::desitter_position_mesh(g, cd(0.0, 2.0), c);
    CHECK_THROWS(deformation_snapshot(ambient, SpectralPoint{cd(0.0, 1.0), Locus::imaginary_axis}, spec));
    CHECK_THROWS(deformation_snapshot(ambient, SpectralPoint{cd(0.0, -1.0), Locus::imaginary_axis}, spec));
}

TEST_CASE("integrating the scaled form reproduces the snapshot formula") {
    // two routes to fhat_lambda: integrate the (m+k+2)-sized rescaled form
    // with the identity at p, or rescale the ambient family mesh pointwise
    const GridChart g = centered_chart(17);
    const ComponentForms cf = oracle::desitter_components(g);
    const SpectralPoint lam{cd(0.0, 2.0), Locus::imaginary_axis};

    const MatrixOneForm scaled = assemble_scaled_form(cf, lam);
    const FrameField f = integrate_frame(scaled, g, CMat::identity(5), FrameMode::affine_block);

    const ImmersionMesh ambient = oracle::desitter_position_mesh(g, lam.lambda, 1.0);
    const ImmersionMesh snap = deformation_snapshot(ambient, lam, cf.spec);

    double worst = 0.0;
    for (int iu = 0; iu < g.n_u; ++iu)
        for (int iv = 0; iv < g.n_v; ++iv) {
            const cd* m = f.at(iu, iv);
            for (int i = 0; i < 4; ++i)
                worst = std::max(worst, std::abs(m[i * 5 + 4] - cd(snap.at(iu, iv)[i], 0.0)));
        }
    CHECK(worst < 1e-11);
}

TEST_CASE("collapse diameter shrinks linearly toward lambda = i") {
    const GridChart g = centered_chart(33);

    ImmersionMesh constant(g, oracle::desitter_spec(1.0), TargetSpace::hyperbolic, 4);
    for (std::size_t node = 0; node < g.count(); ++node) constant.x[node * 4 + 3] = 1.0;
    CHECK(collapse_diameter(constant) == 0.0);

    const double deltas[3] = {4e-3, 2e-3, 1e-3};
    double diam[3];
    for (int n = 0; n < 3; ++n)
        diam[n] = collapse_diameter(oracle::desitter_position_mesh(g, cd(0.0, 1.0 + deltas[n]), 1.0));
    CHECK(diam[0] / diam[1] > 1.9);
    CHECK(diam[0] / diam[1] < 2.1);
    CHECK(diam[1] / diam[2] > 1.9);
    CHECK(diam[1] / diam[2] < 2.1);

    const ImmersionMesh at_i = oracle::desitter_position_mesh(g, cd(0.0, 1.0), 1.0);
    CHECK(collapse_diameter(at_i) == 0.0);
    for (std::size_t node = 0; node < g.count(); ++node) {
        CHECK(at_i.x[node * 4 + 0] == 0.0);
        CHECK(at_i.x[node * 4 + 1] == 0.0);
        CHECK(at_i.x[node * 4 + 2] == 0.0);
        CHECK(at_i.x[node * 4 + 3] == 1.0);
    }
}

TEST_CASE("Brioschi curvature recovers the constant from analytic metric samples") {
    double err[2];
    int idx = 0;
    const double c = 1.3;
    for (int grid : {33, 65}) {
        const GridChart g = centered_chart(grid);
        MetricSample m(g);
        for (int iu = 0; iu < g.n_u; ++iu)
            for (int iv = 0; iv < g.n_v; ++iv) {
                const double ch = std::cosh(g.u(iu));
                double* gm = m.at(iu, iv);
                gm[0] = -1.0 / c;
                gm[1] = 0.0;
                gm[2] = ch * ch / c;
            }
        err[idx++] = curvature_sup_error(m, c);
    }
    CHECK(err[0] < 5e-2);
    CHECK(err[0] / err[1] > 3.5);
    CHECK(err[0] / err[1] < 4.5);
}

TEST_CASE("residual reports serialize checks with pass flags") {
    ResidualReport r;
    r.spec = oracle::desitter_spec(1.0);
    r.h = 0.03125;
    r.dstep = 1e-4;
    r.add("maurer-cartan", 1e-5, 1e-3);
    r.add("constant-curvature", 2.0, 1e-3);
    CHECK(!r.all_pass());

    std::ostringstream os;
    r.write(os);
    const std::string text = os.str();
    CHECK(text.find("maurer-cartan = ") != std::string::npos);
    CHECK(text.find("(tol = 1.000000e-03, pass)") != std::string::npos);
    CHECK(text.find("(tol = 1.000000e-03, fail)") != std::string::npos);
    CHECK(text.find("h = 0.03125") != std::string::npos);
    CHECK(text.find("epsilon=-1") != std::string::npos);
}
