#include "loopsym/geometry.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "loopsym/kernels.hpp"

namespace loopsym {

bool ResidualReport::all_pass() const {
    for (const ResidualCheck& c : checks)
        if (!c.pass()) return false;
    return true;
}

void ResidualReport::write(std::ostream& out) const {
    char buf[160];
    std::snprintf(buf, sizeof buf, "spec m=%d k=%d r=%d s=%d epsilon=%d c=%.17g", spec.m, spec.k, spec.r,
                  spec.s, spec.epsilon, spec.c);
    out << buf << '\n';
    std::snprintf(buf, sizeof buf, "h = %.17g", h);
    out << buf << '\n';
    std::snprintf(buf, sizeof buf, "dstep = %.17g", dstep);
    out << buf << '\n';
    for (const ResidualCheck& c : checks) {
        std::snprintf(buf, sizeof buf, "%s = %.6e (tol = %.6e, %s)", c.name.c_str(), c.value, c.tol,
                      c.pass() ? "pass" : "fail");
        out << buf << '\n';
    }
}

MetricSample induced_metric(const ComponentForms& cf, const MetricBlocks& j) {
    if (j.m() != cf.spec.m) throw std::invalid_argument("induced_metric: metric/spec mismatch");
    MetricSample out(cf.chart);
    const int m = cf.spec.m;
    for (int iu = 0; iu < cf.chart.n_u; ++iu) {
        for (int iv = 0; iv < cf.chart.n_v; ++iv) {
            const double* tu = cf.theta_at(cf.theta_u, iu, iv);
            const double* tv = cf.theta_at(cf.theta_v, iu, iv);
            double guu = 0, guv = 0, gvv = 0;
            for (int i = 0; i < m; ++i) {
                const double w = j.j1[static_cast<std::size_t>(i)];
                guu += w * tu[i] * tu[i];
                guv += w * tu[i] * tv[i];
                gvv += w * tv[i] * tv[i];
            }
            double* g = out.at(iu, iv);
            g[0] = guu;
            g[1] = guv;
            g[2] = gvv;
        }
    }
    return out;
}

namespace {

MatrixOneForm promote_block(const GridChart& chart, int n, const std::vector<double>& cu,
                            const std::vector<double>& cv) {
    MatrixOneForm out(chart, n);
    for (std::size_t i = 0; i < cu.size(); ++i) out.cu[i] = cu[i];
    for (std::size_t i = 0; i < cv.size(); ++i) out.cv[i] = cv[i];
    return out;
}

}  // namespace

double constant_curvature_residual(const ComponentForms& cf, const MetricBlocks& j, double c) {
    const int m = cf.spec.m;
    const GridChart& chart = cf.chart;
    const MatrixOneForm omega = promote_block(chart, m, cf.omega_u, cf.omega_v);
    MatrixTwoForm lhs = exterior_derivative(omega);
    const MatrixTwoForm ww = wedge(omega, omega);
    kernels::axpby(1.0, reinterpret_cast<const double*>(lhs.cuv.data()), 1.0,
                   reinterpret_cast<const double*>(ww.cuv.data()),
                   reinterpret_cast<double*>(lhs.cuv.data()), lhs.cuv.size() * 2);

    // theta ^ theta^t J1 via the batched kernel on m x 1 times 1 x m blocks.
    const std::size_t count = chart.count();
    std::vector<cd> col_u(count * m), col_v(count * m), row_u(count * m), row_v(count * m);
    for (std::size_t node = 0; node < count; ++node) {
        for (int i = 0; i < m; ++i) {
            const double tu = cf.theta_u[node * m + i];
            const double tv = cf.theta_v[node * m + i];
            col_u[node * m + i] = tu;
            col_v[node * m + i] = tv;
            row_u[node * m + i] = tu * j.j1[static_cast<std::size_t>(i)];
            row_v[node * m + i] = tv * j.j1[static_cast<std::size_t>(i)];
        }
    }
    std::vector<cd> tt(count * static_cast<std::size_t>(m) * m);
    kernels::batched_mul_sub(col_u.data(), row_v.data(), col_v.data(), row_u.data(), tt.data(), count, m, 1, m);
    kernels::axpby(1.0, reinterpret_cast<const double*>(lhs.cuv.data()), -c,
                   reinterpret_cast<const double*>(tt.data()),
                   reinterpret_cast<double*>(lhs.cuv.data()), lhs.cuv.size() * 2);
    return sup_abs_interior(lhs);
}

double normal_flatness_residual(const ComponentForms& cf) {
    if (cf.spec.k == 0) return 0.0;
    return mc_residual(promote_block(cf.chart, cf.spec.k, cf.eta_u, cf.eta_v));
}

ImmersionMesh direct_transfer(const ComponentForms& cf, const GridChart& chart) {
    if (!cf.chart.same_geometry(chart)) throw std::invalid_argument("direct_transfer: chart mismatch");
    cf.spec.require_flat_admissible();
    const MatrixOneForm ahat = assemble_affine_form(cf);
    const FrameField f = integrate_frame(ahat, chart, CMat::identity(ahat.n), FrameMode::affine_block);
    return extract_immersion(f, cf.spec);
}

namespace {

struct LocusParam {
    cd (*lambda)(double t);
    cd (*dlambda)(double t);
};

LocusParam locus_path(Locus locus, SymPath path) {
    if (locus == Locus::imaginary_axis) {
        if (path == SymPath::exponential)
            return {[](double t) { return cd(0.0, 1.0) * std::exp(cd(t, 0.0)); },
                    [](double t) { return cd(0.0, 1.0) * std::exp(cd(t, 0.0)); }};
        return {[](double t) { return cd(0.0, 1.0 + t); }, [](double) { return cd(0.0, 1.0); }};
    }
    if (locus == Locus::unit_circle) {
        if (path == SymPath::linear)
            throw std::invalid_argument("sym_extract: linear path is defined on the imaginary axis only");
        return {[](double t) {
                    const double phi = std::acos(0.0) + t;  // pi/2 + t
                    return cd(std::cos(phi), std::sin(phi));
                },
                [](double t) {
                    const double phi = std::acos(0.0) + t;
                    return cd(0.0, 1.0) * cd(std::cos(phi), std::sin(phi));
                }};
    }
    throw std::domain_error("sym_extract: the real-axis locus never reaches lambda = i");
}

}  // namespace

SymResult sym_extract_detailed(const ComponentForms& cf, const GridChart& chart, double dstep,
                               SymPath path, double realness_tol) {
    if (!cf.chart.same_geometry(chart)) throw std::invalid_argument("sym_extract: chart mismatch");
    if (!(dstep > 0.0)) throw std::invalid_argument("sym_extract: dstep must be positive");
    cf.spec.require_flat_admissible();
    const Locus locus = admissible_locus(cf.spec.c, cf.spec.epsilon);
    const LocusParam par = locus_path(locus, path);
    const FamilyCoefficients fc = FamilyCoefficients::make(cf.spec.c, cf.spec.epsilon);

    const int n = cf.spec.m + cf.spec.k + 1;
    ImmersionMesh side[2];
    const double ts[2] = {dstep, -dstep};
    for (int s = 0; s < 2; ++s) {
        const SpectralPoint lam{par.lambda(ts[s]), locus};
        const MatrixOneForm a = assemble_family_form(cf, lam);
        const FrameField f = integrate_frame(a, chart, CMat::identity(n), FrameMode::ambient_square);
        side[s] = extract_immersion(f, cf.spec);
    }

    // d f/dlambda = (df/dt) / (dlambda/dt at 0); Sym scalar 1/sqrt(eps c).
    const cd sigma = 1.0 / (fc.sqrt_ec * par.dlambda(0.0) * 2.0 * dstep);
    const int dim = cf.spec.m + cf.spec.k;
    SymResult res{ImmersionMesh(chart, cf.spec, TargetSpace::flat, dim), 0.0};
    res.mesh.lambda = cd(0.0, 1.0);
    double scale = 0.0, worst_imag = 0.0;
    for (std::size_t node = 0; node < chart.count(); ++node) {
        for (int i = 0; i < dim; ++i) {
            const double diff = side[0].x[node * (dim + 1) + i] - side[1].x[node * (dim + 1) + i];
            const cd val = sigma * diff;
            res.mesh.x[node * dim + i] = val.real();
            scale = std::max(scale, std::abs(val));
            worst_imag = std::max(worst_imag, std::abs(val.imag()));
        }
    }
    res.realness_rel = worst_imag / std::max(scale, 1e-30);
    if (res.realness_rel > realness_tol)
        throw std::domain_error("sym_extract: result not real to tolerance");
    return res;
}

ImmersionMesh sym_extract(const ComponentForms& cf, const GridChart& chart, double dstep, SymPath path,
                          double realness_tol) {
    return sym_extract_detailed(cf, chart, dstep, path, realness_tol).mesh;
}

ImmersionMesh deformation_snapshot(const ImmersionMesh& f_mesh, const SpectralPoint& lam,
                                   const SpaceFormSpec& spec, double realness_tol) {
    spec.validate();
    if (f_mesh.dim != spec.m + spec.k + 1 || f_mesh.target == TargetSpace::flat)
        throw std::invalid_argument("deformation_snapshot: expects an ambient quadric-target mesh");
    const cd l = lam.lambda;
    if (l == cd(0.0, 0.0) || l == cd(0.0, 1.0) || l == cd(0.0, -1.0))
        throw std::invalid_argument("deformation_snapshot: lambda in {0,+-i} is degenerate; "
                                    "use sym_extract for the limit");
    const FamilyCoefficients fc = FamilyCoefficients::make(spec.c, spec.epsilon);
    const cd sigma = 2.0 / (fc.sqrt_ec * (l + 1.0 / l));
    if (std::abs(sigma.imag()) > realness_tol * std::abs(sigma))
        throw std::domain_error("deformation_snapshot: scaling not real; lambda off the admissible locus");

    ImmersionMesh out(f_mesh.chart, spec, TargetSpace::flat, f_mesh.dim);
    out.lambda = l;
    const double s = sigma.real();
    for (std::size_t node = 0; node < f_mesh.chart.count(); ++node) {
        for (int i = 0; i < f_mesh.dim; ++i) {
            const double offset = (i == f_mesh.dim - 1) ? 1.0 : 0.0;
            out.x[node * f_mesh.dim + i] = s * (f_mesh.x[node * f_mesh.dim + i] - offset);
        }
    }
    return out;
}

double collapse_diameter(const ImmersionMesh& f_mesh) {
    if (f_mesh.x.empty()) throw std::invalid_argument("collapse_diameter: empty mesh");
    const double* base = f_mesh.x.data() + f_mesh.chart.base_index() * f_mesh.dim;
    double worst = 0.0;
    for (std::size_t node = 0; node < f_mesh.chart.count(); ++node) {
        double d2 = 0.0;
        for (int i = 0; i < f_mesh.dim; ++i) {
            const double d = f_mesh.x[node * f_mesh.dim + i] - base[i];
            d2 += d * d;
        }
        worst = std::max(worst, d2);
    }
    return std::sqrt(worst);
}

namespace {

// Second-order partials of a node-major vector field component.
void position_partials(const ImmersionMesh& mesh, int iu, int iv, std::vector<double>& xu,
                       std::vector<double>& xv) {
    const GridChart& g = mesh.chart;
    const int dim = mesh.dim;
    xu.assign(static_cast<std::size_t>(dim), 0.0);
    xv.assign(static_cast<std::size_t>(dim), 0.0);
    const auto X = [&](int a, int b) { return mesh.at(a, b); };
    const double inv2hu = 1.0 / (2.0 * g.h_u()), inv2hv = 1.0 / (2.0 * g.h_v());
    for (int c = 0; c < dim; ++c) {
        if (iu == 0) xu[c] = (-3.0 * X(0, iv)[c] + 4.0 * X(1, iv)[c] - X(2, iv)[c]) * inv2hu;
        else if (iu == g.n_u - 1) xu[c] = (3.0 * X(iu, iv)[c] - 4.0 * X(iu - 1, iv)[c] + X(iu - 2, iv)[c]) * inv2hu;
        else xu[c] = (X(iu + 1, iv)[c] - X(iu - 1, iv)[c]) * inv2hu;
        if (iv == 0) xv[c] = (-3.0 * X(iu, 0)[c] + 4.0 * X(iu, 1)[c] - X(iu, 2)[c]) * inv2hv;
        else if (iv == g.n_v - 1) xv[c] = (3.0 * X(iu, iv)[c] - 4.0 * X(iu, iv - 1)[c] + X(iu, iv - 2)[c]) * inv2hv;
        else xv[c] = (X(iu, iv + 1)[c] - X(iu, iv - 1)[c]) * inv2hv;
    }
}

}  // namespace

MetricSample pullback_metric(const ImmersionMesh& mesh, const std::vector<double>& ambient_diag) {
    if (static_cast<int>(ambient_diag.size()) != mesh.dim)
        throw std::invalid_argument("pullback_metric: ambient metric size mismatch");
    MetricSample out(mesh.chart);
    std::vector<double> xu, xv;
    for (int iu = 0; iu < mesh.chart.n_u; ++iu) {
        for (int iv = 0; iv < mesh.chart.n_v; ++iv) {
            position_partials(mesh, iu, iv, xu, xv);
            double e = 0, f = 0, g2 = 0;
            for (int c = 0; c < mesh.dim; ++c) {
                const double w = ambient_diag[static_cast<std::size_t>(c)];
                e += w * xu[c] * xu[c];
                f += w * xu[c] * xv[c];
                g2 += w * xv[c] * xv[c];
            }
            double* g = out.at(iu, iv);
            g[0] = e;
            g[1] = f;
            g[2] = g2;
        }
    }
    return out;
}

namespace {

double det3(const double a[3][3]) {
    return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
           a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
           a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
}

}  // namespace

std::vector<double> brioschi_curvature(const MetricSample& m) {
    const GridChart& g = m.chart;
    std::vector<double> k(g.count(), std::numeric_limits<double>::quiet_NaN());
    const double hu = g.h_u(), hv = g.h_v();
    auto E = [&](int a, int b) { return m.at(a, b)[0]; };
    auto F = [&](int a, int b) { return m.at(a, b)[1]; };
    auto G = [&](int a, int b) { return m.at(a, b)[2]; };
    for (int iu = 1; iu + 1 < g.n_u; ++iu) {
        for (int iv = 1; iv + 1 < g.n_v; ++iv) {
            const double Eu = (E(iu + 1, iv) - E(iu - 1, iv)) / (2 * hu);
            const double Ev = (E(iu, iv + 1) - E(iu, iv - 1)) / (2 * hv);
            const double Gu = (G(iu + 1, iv) - G(iu - 1, iv)) / (2 * hu);
            const double Gv = (G(iu, iv + 1) - G(iu, iv - 1)) / (2 * hv);
            const double Fu = (F(iu + 1, iv) - F(iu - 1, iv)) / (2 * hu);
            const double Fv = (F(iu, iv + 1) - F(iu, iv - 1)) / (2 * hv);
            const double Evv = (E(iu, iv + 1) - 2 * E(iu, iv) + E(iu, iv - 1)) / (hv * hv);
            const double Guu = (G(iu + 1, iv) - 2 * G(iu, iv) + G(iu - 1, iv)) / (hu * hu);
            const double Fuv = (F(iu + 1, iv + 1) - F(iu + 1, iv - 1) - F(iu - 1, iv + 1) + F(iu - 1, iv - 1)) /
                               (4 * hu * hv);
            const double m1[3][3] = {
                {-0.5 * Evv + Fuv - 0.5 * Guu, 0.5 * Eu, Fu - 0.5 * Ev},
                {Fv - 0.5 * Gu, E(iu, iv), F(iu, iv)},
                {0.5 * Gv, F(iu, iv), G(iu, iv)},
            };
            const double m2[3][3] = {
                {0.0, 0.5 * Ev, 0.5 * Gu},
                {0.5 * Ev, E(iu, iv), F(iu, iv)},
                {0.5 * Gu, F(iu, iv), G(iu, iv)},
            };
            const double det = E(iu, iv) * G(iu, iv) - F(iu, iv) * F(iu, iv);
            k[g.index(iu, iv)] = (det3(m1) - det3(m2)) / (det * det);
        }
    }
    return k;
}

double curvature_sup_error(const MetricSample& m, double c_expected, int margin) {
    const std::vector<double> k = brioschi_curvature(m);
    const GridChart& g = m.chart;
    double worst = 0.0;
    for (int iu = margin; iu + margin < g.n_u; ++iu)
        for (int iv = margin; iv + margin < g.n_v; ++iv)
            worst = std::max(worst, std::abs(k[g.index(iu, iv)] - c_expected));
    return worst;
}

double metric_sup_difference_interior(const MetricSample& a, const MetricSample& b) {
    if (!a.chart.same_geometry(b.chart)) throw std::invalid_argument("metric_sup_difference: chart mismatch");
    double worst = 0.0;
    for (int iu = 1; iu + 1 < a.chart.n_u; ++iu)
        for (int iv = 1; iv + 1 < a.chart.n_v; ++iv)
            for (int c = 0; c < 3; ++c)
                worst = std::max(worst, std::abs(a.at(iu, iv)[c] - b.at(iu, iv)[c]));
    return worst;
}

double quadric_residual(const ImmersionMesh& mesh, const MetricBlocks& j) {
    const std::vector<double> jd = j.full_diag();
    if (static_cast<int>(jd.size()) != mesh.dim)
        throw std::invalid_argument("quadric_residual: metric size mismatch");
    const double target = j.epsilon_entry;
    double worst = 0.0;
    for (std::size_t node = 0; node < mesh.chart.count(); ++node) {
        double q = 0.0;
        for (int i = 0; i < mesh.dim; ++i) {
            const double x = mesh.x[node * mesh.dim + i];
            q += jd[static_cast<std::size_t>(i)] * x * x;
        }
        worst = std::max(worst, std::abs(q - target));
    }
    return worst;
}

}  // namespace loopsym
