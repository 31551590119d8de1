#include "loopsym/loopfamily.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace loopsym {

namespace {

constexpr double kLocusTol = 1e-12;

void require_chart_dim2(const SpaceFormSpec& spec) {
    if (spec.m != 2)
        throw std::invalid_argument("ComponentForms: the sampled representation fixes m = 2, got m=" +
                                    std::to_string(spec.m));
}

}  // namespace

ComponentForms ComponentForms::zeros(const SpaceFormSpec& spec, const GridChart& chart) {
    spec.validate();
    require_chart_dim2(spec);
    ComponentForms cf;
    cf.spec = spec;
    cf.chart = chart;
    const std::size_t count = chart.count();
    cf.omega_u.assign(count * cf.omega_stride(), 0.0);
    cf.omega_v.assign(count * cf.omega_stride(), 0.0);
    cf.eta_u.assign(count * cf.eta_stride(), 0.0);
    cf.eta_v.assign(count * cf.eta_stride(), 0.0);
    cf.beta_u.assign(count * cf.beta_stride(), 0.0);
    cf.beta_v.assign(count * cf.beta_stride(), 0.0);
    cf.theta_u.assign(count * cf.theta_stride(), 0.0);
    cf.theta_v.assign(count * cf.theta_stride(), 0.0);
    return cf;
}

void ComponentForms::validate(double skew_tol, double det_tol) const {
    const MetricBlocks j = make_metric(spec);
    const int m = spec.m, k = spec.k;
    for (int iu = 0; iu < chart.n_u; ++iu) {
        for (int iv = 0; iv < chart.n_v; ++iv) {
            for (const auto* arr : {&omega_u, &omega_v}) {
                const double* w = omega_at(*arr, iu, iv);
                for (int i = 0; i < m; ++i)
                    for (int jj = 0; jj < m; ++jj)
                        if (std::abs(w[jj * m + i] * j.j1[jj] + j.j1[i] * w[i * m + jj]) > skew_tol)
                            throw std::invalid_argument("ComponentForms: omega not J1-skew at node (" +
                                                        std::to_string(iu) + "," + std::to_string(iv) + ")");
            }
            for (const auto* arr : {&eta_u, &eta_v}) {
                const double* e = eta_at(*arr, iu, iv);
                for (int i = 0; i < k; ++i)
                    for (int jj = 0; jj < k; ++jj)
                        if (std::abs(e[jj * k + i] * j.j2[jj] + j.j2[i] * e[i * k + jj]) > skew_tol)
                            throw std::invalid_argument("ComponentForms: eta not J2-skew at node (" +
                                                        std::to_string(iu) + "," + std::to_string(iv) + ")");
            }
            const double* tu = theta_at(theta_u, iu, iv);
            const double* tv = theta_at(theta_v, iu, iv);
            const double det = tu[0] * tv[1] - tu[1] * tv[0];
            if (std::abs(det) <= det_tol)
                throw std::invalid_argument("ComponentForms: coframe singular at node (" + std::to_string(iu) +
                                            "," + std::to_string(iv) + "), det=" + std::to_string(det));
        }
    }
}

std::string locus_name(Locus l) {
    switch (l) {
        case Locus::imaginary_axis: return "imaginary-axis";
        case Locus::real_axis: return "real-axis";
        case Locus::unit_circle: return "unit-circle";
    }
    return "?";
}

SpectralPoint SpectralPoint::on_locus(cd lambda) {
    const double scale = std::abs(lambda);
    if (scale == 0.0) throw std::invalid_argument("SpectralPoint: lambda must be nonzero");
    if (std::abs(lambda.real()) <= kLocusTol * scale) return {lambda, Locus::imaginary_axis};
    if (std::abs(lambda.imag()) <= kLocusTol * scale) return {lambda, Locus::real_axis};
    if (std::abs(scale - 1.0) <= kLocusTol) return {lambda, Locus::unit_circle};
    throw std::invalid_argument("SpectralPoint: lambda lies on no reality locus (iR*, R*, S^1)");
}

SpectralPoint SpectralPoint::from_parameter(Locus locus, double t) {
    switch (locus) {
        case Locus::imaginary_axis:
            if (t == 0.0) throw std::invalid_argument("SpectralPoint: t must be nonzero");
            return {cd(0.0, t), locus};
        case Locus::real_axis:
            if (t == 0.0) throw std::invalid_argument("SpectralPoint: t must be nonzero");
            return {cd(t, 0.0), locus};
        case Locus::unit_circle:
            return {cd(std::cos(t), std::sin(t)), locus};
    }
    throw std::invalid_argument("SpectralPoint: bad locus");
}

Locus admissible_locus(double c, int epsilon) {
    if (c == 0.0) throw std::invalid_argument("admissible_locus: c must be nonzero");
    const double ec = epsilon * c;
    if (ec == 1.0) throw std::domain_error("admissible_locus: epsilon*c = 1 is degenerate");
    if (ec < 0.0) return Locus::imaginary_axis;
    if (ec < 1.0) return Locus::real_axis;
    return Locus::unit_circle;
}

FamilyCoefficients FamilyCoefficients::make(double c, int epsilon) {
    const double ec = epsilon * c;
    if (ec == 1.0 || c == 0.0)
        throw std::domain_error("FamilyCoefficients: epsilon*c must be nonzero and != 1");
    return {std::sqrt(cd(ec, 0.0)), std::sqrt(cd(1.0 - ec, 0.0))};
}

cd lambda0(double c, int epsilon) {
    SpaceFormSpec tmp;
    tmp.c = c;
    tmp.epsilon = epsilon;
    tmp.require_flat_admissible();
    const FamilyCoefficients fc = FamilyCoefficients::make(c, epsilon);
    return (1.0 + fc.sqrt_1mec) / fc.sqrt_ec;
}

double c_of_lambda(cd lambda, int epsilon) {
    if (lambda == cd(0.0, 0.0) || lambda == cd(0.0, 1.0) || lambda == cd(0.0, -1.0))
        throw std::invalid_argument("c_of_lambda: lambda in {0, i, -i} is degenerate");
    const cd mu = lambda + 1.0 / lambda;
    if (mu == cd(0.0, 0.0)) throw std::invalid_argument("c_of_lambda: lambda + 1/lambda vanishes");
    const cd w = 4.0 * static_cast<double>(epsilon) / (mu * mu);
    // On a reality locus the curvature is a real number; enforce that.
    bool on_locus = true;
    try {
        (void)SpectralPoint::on_locus(lambda);
    } catch (const std::invalid_argument&) {
        on_locus = false;
    }
    if (on_locus && std::abs(w.imag()) > 1e-12 * std::max(1.0, std::abs(w)))
        throw std::logic_error("c_of_lambda: curvature not real on its locus");
    return w.real();
}

CMat derive_alpha(const CMat& beta, const MetricBlocks& j) {
    if (beta.rows() != j.m() || beta.cols() != j.k())
        throw std::invalid_argument("derive_alpha: beta must be m x k");
    CMat alpha(j.k(), j.m());
    for (int a = 0; a < j.k(); ++a)
        for (int i = 0; i < j.m(); ++i)
            alpha(a, i) = -j.j2[static_cast<std::size_t>(a)] * beta(i, a) * j.j1[static_cast<std::size_t>(i)];
    return alpha;
}

namespace {

// Shared writer for the square (m+k+1)-sized family layout with given theta
// and beta scalings; ct = cb = 1 recovers the sphere/hyperbolic form.
MatrixOneForm assemble_square(const ComponentForms& cf, cd ct, cd cb) {
    const int m = cf.spec.m, k = cf.spec.k;
    const int n = m + k + 1;
    const MetricBlocks j = make_metric(cf.spec);
    const double eps = cf.spec.epsilon;
    MatrixOneForm out(cf.chart, n);
    for (int iu = 0; iu < cf.chart.n_u; ++iu) {
        for (int iv = 0; iv < cf.chart.n_v; ++iv) {
            struct Slot { const std::vector<double>* w; const std::vector<double>* e;
                          const std::vector<double>* b; const std::vector<double>* t; cd* a; };
            const Slot slots[2] = {
                {&cf.omega_u, &cf.eta_u, &cf.beta_u, &cf.theta_u, out.u_at(iu, iv)},
                {&cf.omega_v, &cf.eta_v, &cf.beta_v, &cf.theta_v, out.v_at(iu, iv)},
            };
            for (const Slot& s : slots) {
                const double* w = cf.omega_at(*s.w, iu, iv);
                const double* e = cf.eta_at(*s.e, iu, iv);
                const double* b = cf.beta_at(*s.b, iu, iv);
                const double* t = cf.theta_at(*s.t, iu, iv);
                cd* a = s.a;
                for (int i = 0; i < m; ++i)
                    for (int jj = 0; jj < m; ++jj) a[i * n + jj] = w[i * m + jj];
                for (int i = 0; i < k; ++i)
                    for (int jj = 0; jj < k; ++jj) a[(m + i) * n + (m + jj)] = e[i * k + jj];
                for (int i = 0; i < m; ++i)
                    for (int jj = 0; jj < k; ++jj) {
                        a[i * n + (m + jj)] = cb * b[i * k + jj];
                        // alpha = -J2 beta^t J1
                        a[(m + jj) * n + i] = cb * (-j.j2[static_cast<std::size_t>(jj)] * b[i * k + jj] *
                                                    j.j1[static_cast<std::size_t>(i)]);
                    }
                for (int i = 0; i < m; ++i) {
                    a[i * n + (n - 1)] = ct * t[i];
                    a[(n - 1) * n + i] = -eps * ct * t[i] * j.j1[static_cast<std::size_t>(i)];
                }
            }
        }
    }
    return out;
}

}  // namespace

MatrixOneForm assemble_sphere_form(const ComponentForms& cf) {
    return assemble_square(cf, cd(1.0, 0.0), cd(1.0, 0.0));
}

MatrixOneForm assemble_family_form(const ComponentForms& cf, const SpectralPoint& lam) {
    if (lam.lambda == cd(0.0, 0.0)) throw std::invalid_argument("assemble_family_form: lambda must be nonzero");
    const FamilyCoefficients fc = FamilyCoefficients::make(cf.spec.c, cf.spec.epsilon);
    return assemble_square(cf, fc.theta_coeff(lam.lambda), fc.beta_coeff(lam.lambda));
}

namespace {

// Embed a square (m+k+1) form into the affine (m+k+2) layout and append the
// translation column theta.
MatrixOneForm embed_with_translation(const ComponentForms& cf, const MatrixOneForm& sq) {
    const int m = cf.spec.m;
    const int n = sq.n;
    const int n2 = n + 1;
    MatrixOneForm out(cf.chart, n2);
    for (int iu = 0; iu < cf.chart.n_u; ++iu) {
        for (int iv = 0; iv < cf.chart.n_v; ++iv) {
            for (int dir = 0; dir < 2; ++dir) {
                const cd* src = dir == 0 ? sq.u_at(iu, iv) : sq.v_at(iu, iv);
                cd* dst = dir == 0 ? out.u_at(iu, iv) : out.v_at(iu, iv);
                for (int i = 0; i < n; ++i)
                    for (int jj = 0; jj < n; ++jj) dst[i * n2 + jj] = src[i * n + jj];
                const double* t = cf.theta_at(dir == 0 ? cf.theta_u : cf.theta_v, iu, iv);
                for (int i = 0; i < m; ++i) dst[i * n2 + (n2 - 1)] = t[i];
            }
        }
    }
    return out;
}

}  // namespace

MatrixOneForm assemble_affine_form(const ComponentForms& cf) {
    cf.spec.require_flat_admissible();
    const FamilyCoefficients fc = FamilyCoefficients::make(cf.spec.c, cf.spec.epsilon);
    const cd g = fc.affine_factor();
    if (std::abs(g.imag()) > 1e-12 * (1.0 + std::abs(g)))
        throw std::logic_error("assemble_affine_form: scaling factor not real for admissible c");
    // Square part with zero theta blocks and real beta scaling g.
    const MatrixOneForm sq = assemble_square(cf, cd(0.0, 0.0), cd(g.real(), 0.0));
    return embed_with_translation(cf, sq);
}

MatrixOneForm assemble_scaled_form(const ComponentForms& cf, const SpectralPoint& lam) {
    return embed_with_translation(cf, assemble_family_form(cf, lam));
}

namespace {

void write_reals(std::ostream& out, const double* p, std::size_t n, bool lead_space) {
    char buf[32];
    for (std::size_t i = 0; i < n; ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", p[i]);
        if (lead_space || i > 0) out << ' ';
        out << buf;
    }
}

}  // namespace

void write_components(std::ostream& out, const ComponentForms& cf) {
    const GridChart& g = cf.chart;
    out << cf.spec.m << ' ' << cf.spec.k << ' ' << cf.spec.r << ' ' << cf.spec.s << ' ' << cf.spec.epsilon;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", cf.spec.c);
    out << ' ' << buf << ' ' << g.n_u << ' ' << g.n_v;
    const double bounds[4] = {g.u_min, g.u_max, g.v_min, g.v_max};
    write_reals(out, bounds, 4, true);
    out << '\n';
    for (int iu = 0; iu < g.n_u; ++iu) {
        for (int iv = 0; iv < g.n_v; ++iv) {
            write_reals(out, cf.omega_at(cf.omega_u, iu, iv), cf.omega_stride(), false);
            write_reals(out, cf.omega_at(cf.omega_v, iu, iv), cf.omega_stride(), true);
            write_reals(out, cf.eta_at(cf.eta_u, iu, iv), cf.eta_stride(), true);
            write_reals(out, cf.eta_at(cf.eta_v, iu, iv), cf.eta_stride(), true);
            write_reals(out, cf.beta_at(cf.beta_u, iu, iv), cf.beta_stride(), true);
            write_reals(out, cf.beta_at(cf.beta_v, iu, iv), cf.beta_stride(), true);
            write_reals(out, cf.theta_at(cf.theta_u, iu, iv), cf.theta_stride(), true);
            write_reals(out, cf.theta_at(cf.theta_v, iu, iv), cf.theta_stride(), true);
            out << '\n';
        }
    }
}

ComponentForms read_components(std::istream& in) {
    SpaceFormSpec spec;
    int n_u = 0, n_v = 0;
    double u_min, u_max, v_min, v_max;
    std::string header;
    if (!std::getline(in, header)) throw std::runtime_error("component file: missing header line");
    {
        std::istringstream hs(header);
        if (!(hs >> spec.m >> spec.k >> spec.r >> spec.s >> spec.epsilon >> spec.c >> n_u >> n_v >>
              u_min >> u_max >> v_min >> v_max))
            throw std::runtime_error("component file: malformed header (expect 'm k r s epsilon c N_u N_v "
                                     "u_min u_max v_min v_max')");
        std::string extra;
        if (hs >> extra) throw std::runtime_error("component file: trailing tokens in header");
    }
    spec.validate();
    require_chart_dim2(spec);
    const GridChart chart = GridChart::make(u_min, u_max, v_min, v_max, n_u, n_v);
    ComponentForms cf = ComponentForms::zeros(spec, chart);
    struct Piece { std::vector<double>* a; std::size_t stride; };
    const Piece pieces[8] = {
        {&cf.omega_u, cf.omega_stride()}, {&cf.omega_v, cf.omega_stride()},
        {&cf.eta_u, cf.eta_stride()},     {&cf.eta_v, cf.eta_stride()},
        {&cf.beta_u, cf.beta_stride()},   {&cf.beta_v, cf.beta_stride()},
        {&cf.theta_u, cf.theta_stride()}, {&cf.theta_v, cf.theta_stride()},
    };
    for (std::size_t node = 0; node < chart.count(); ++node) {
        for (const Piece& p : pieces) {
            for (std::size_t i = 0; i < p.stride; ++i) {
                double v;
                if (!(in >> v))
                    throw std::runtime_error("component file: truncated or non-numeric data at node row " +
                                             std::to_string(node + 1));
                (*p.a)[node * p.stride + i] = v;
            }
        }
    }
    double stray;
    if (in >> stray) throw std::runtime_error("component file: trailing data after last node row");
    return cf;
}

ComponentForms read_components_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open component file: " + path);
    return read_components(in);
}

void write_components_file(const std::string& path, const ComponentForms& cf) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write component file: " + path);
    write_components(out, cf);
}

}  // namespace loopsym
