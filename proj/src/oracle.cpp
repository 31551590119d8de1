#include "loopsym/oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace loopsym::oracle {

SpaceFormSpec desitter_spec(double c) {
    if (!(c > 0.0)) throw std::invalid_argument("desitter_spec: c must be positive");
    SpaceFormSpec s;
    s.m = 2;
    s.k = 1;
    s.r = 1;
    s.s = 1;
    s.epsilon = -1;
    s.c = c;
    return s;
}

void OracleConfig::validate() const {
    if (!(c > 0.0)) throw std::invalid_argument("OracleConfig: c must be positive");
    for (const SpectralPoint& sp : lambda_list) {
        if (sp.locus != Locus::imaginary_axis || std::abs(sp.lambda.real()) > 1e-12 * std::abs(sp.lambda))
            throw std::invalid_argument("OracleConfig: swept lambda values must lie on the imaginary axis");
        if (sp.lambda == cd(0.0, 0.0)) throw std::invalid_argument("OracleConfig: lambda must be nonzero");
    }
}

namespace {

struct Half { cd a, b; };  // a = (lambda + 1/lambda)/2, b = (lambda - 1/lambda)/2

Half halves(cd lambda) {
    if (lambda == cd(0.0, 0.0)) throw std::invalid_argument("oracle: lambda must be nonzero");
    const cd inv = 1.0 / lambda;
    return {0.5 * (lambda + inv), 0.5 * (lambda - inv)};
}

}  // namespace

CMat desitter_frame(double u, double v, cd lambda) {
    const auto [a, b] = halves(lambda);
    const double C = std::cosh(u), S = std::sinh(u);
    const double cv = std::cos(v), sv = std::sin(v);
    const cd i(0.0, 1.0);
    CMat f(4, 4);
    f(0, 0) = cv;          f(0, 1) = sv * S;          f(0, 2) = -i * b * C * sv;      f(0, 3) = -i * a * C * sv;
    f(1, 0) = 0.0;         f(1, 1) = C;               f(1, 2) = -i * b * S;           f(1, 3) = -i * a * S;
    f(2, 0) = i * b * sv;  f(2, 1) = -i * b * cv * S; f(2, 2) = a * a - b * b * cv * C; f(2, 3) = a * b * (1.0 - cv * C);
    f(3, 0) = -i * a * sv; f(3, 1) = i * a * cv * S;  f(3, 2) = a * b * (cv * C - 1.0); f(3, 3) = a * a * cv * C - b * b;
    return f;
}

void desitter_frame_partials(double u, double v, cd lambda, CMat& du, CMat& dv) {
    const auto [a, b] = halves(lambda);
    const double C = std::cosh(u), S = std::sinh(u);
    const double cv = std::cos(v), sv = std::sin(v);
    const cd i(0.0, 1.0);
    du = CMat(4, 4);
    du(0, 0) = 0.0;  du(0, 1) = sv * C;          du(0, 2) = -i * b * S * sv;   du(0, 3) = -i * a * S * sv;
    du(1, 0) = 0.0;  du(1, 1) = S;               du(1, 2) = -i * b * C;        du(1, 3) = -i * a * C;
    du(2, 0) = 0.0;  du(2, 1) = -i * b * cv * C; du(2, 2) = -b * b * cv * S;   du(2, 3) = -a * b * cv * S;
    du(3, 0) = 0.0;  du(3, 1) = i * a * cv * C;  du(3, 2) = a * b * cv * S;    du(3, 3) = a * a * cv * S;
    dv = CMat(4, 4);
    dv(0, 0) = -sv;          dv(0, 1) = cv * S;         dv(0, 2) = -i * b * C * cv;  dv(0, 3) = -i * a * C * cv;
    dv(1, 0) = 0.0;          dv(1, 1) = 0.0;            dv(1, 2) = 0.0;              dv(1, 3) = 0.0;
    dv(2, 0) = i * b * cv;   dv(2, 1) = i * b * sv * S; dv(2, 2) = b * b * sv * C;   dv(2, 3) = a * b * sv * C;
    dv(3, 0) = -i * a * cv;  dv(3, 1) = -i * a * sv * S; dv(3, 2) = -a * b * sv * C; dv(3, 3) = -a * a * sv * C;
}

void desitter_mc_form(double u, double v, cd lambda, CMat& au, CMat& av) {
    const CMat f = desitter_frame(u, v, lambda);
    CMat du, dv;
    desitter_frame_partials(u, v, lambda, du, dv);
    const std::vector<double> jd = make_metric(desitter_spec(1.0)).full_diag();
    // F^{-1} = J F^t J for J-orthogonal frames.
    CMat finv(4, 4);
    for (int r = 0; r < 4; ++r)
        for (int s = 0; s < 4; ++s)
            finv(r, s) = jd[static_cast<std::size_t>(r)] * f(s, r) * jd[static_cast<std::size_t>(s)];
    au = finv * du;
    av = finv * dv;
}

std::array<cd, 4> desitter_position(double u, double v, cd lambda) {
    const auto [a, b] = halves(lambda);
    const double C = std::cosh(u), S = std::sinh(u);
    const double cv = std::cos(v), sv = std::sin(v);
    const cd i(0.0, 1.0);
    return {-i * a * C * sv, -i * a * S, a * b * (1.0 - cv * C), a * a * cv * C - b * b};
}

std::array<double, 3> desitter_flat_immersion(double u, double v, double c) {
    if (!(c > 0.0)) throw std::invalid_argument("desitter_flat_immersion: c must be positive");
    const double s = 1.0 / std::sqrt(c);
    return {-s * std::cosh(u) * std::sin(v), -s * std::sinh(u), s * (1.0 - std::cos(v) * std::cosh(u))};
}

ComponentForms desitter_components(const GridChart& chart, double c, cd lambda_ref) {
    const SpaceFormSpec spec = desitter_spec(c);
    const FamilyCoefficients fc = FamilyCoefficients::make(c, spec.epsilon);
    const cd ct = fc.theta_coeff(lambda_ref);
    const cd cb = fc.beta_coeff(lambda_ref);
    if (std::abs(ct) < 1e-12 || std::abs(cb) < 1e-12)
        throw std::invalid_argument("desitter_components: reference lambda degenerates a family coefficient");

    ComponentForms cf = ComponentForms::zeros(spec, chart);
    CMat au, av;
    auto put = [](double* dst, cd val, const char* what) {
        if (std::abs(val.imag()) > 1e-10 * (1.0 + std::abs(val.real())))
            throw std::logic_error(std::string("desitter_components: ") + what + " not real");
        *dst = val.real();
    };
    for (int iu = 0; iu < chart.n_u; ++iu) {
        for (int iv = 0; iv < chart.n_v; ++iv) {
            desitter_mc_form(chart.u(iu), chart.v(iv), lambda_ref, au, av);
            const std::size_t node = chart.index(iu, iv);
            const CMat* mats[2] = {&au, &av};
            std::vector<double>* omegas[2] = {&cf.omega_u, &cf.omega_v};
            std::vector<double>* etas[2] = {&cf.eta_u, &cf.eta_v};
            std::vector<double>* betas[2] = {&cf.beta_u, &cf.beta_v};
            std::vector<double>* thetas[2] = {&cf.theta_u, &cf.theta_v};
            for (int d = 0; d < 2; ++d) {
                const CMat& a = *mats[d];
                double* w = omegas[d]->data() + node * cf.omega_stride();
                double* e = etas[d]->data() + node * cf.eta_stride();
                double* bb = betas[d]->data() + node * cf.beta_stride();
                double* t = thetas[d]->data() + node * cf.theta_stride();
                for (int r = 0; r < 2; ++r)
                    for (int s = 0; s < 2; ++s) put(&w[r * 2 + s], a(r, s), "omega");
                // so(1) = {0}: the normal connection vanishes identically; the
                // extracted entry only carries arithmetic residue.
                if (std::abs(a(2, 2)) > 1e-13)
                    throw std::logic_error("desitter_components: eta should vanish for k = 1");
                e[0] = 0.0;
                for (int r = 0; r < 2; ++r) put(&bb[r], a(r, 2) / cb, "beta");
                for (int r = 0; r < 2; ++r) put(&t[r], a(r, 3) / ct, "theta");
            }
        }
    }
    return cf;
}

ImmersionMesh desitter_position_mesh(const GridChart& chart, cd lambda, double c) {
    const SpaceFormSpec spec = desitter_spec(c);
    ImmersionMesh mesh(chart, spec, TargetSpace::hyperbolic, 4);
    mesh.lambda = lambda;
    for (int iu = 0; iu < chart.n_u; ++iu) {
        for (int iv = 0; iv < chart.n_v; ++iv) {
            const auto p = desitter_position(chart.u(iu), chart.v(iv), lambda);
            double* x = mesh.at(iu, iv);
            for (int i = 0; i < 4; ++i) {
                if (std::abs(p[static_cast<std::size_t>(i)].imag()) > 1e-9 * (1.0 + std::abs(p[static_cast<std::size_t>(i)].real())))
                    throw std::domain_error("desitter_position_mesh: position not real; lambda must be imaginary");
                x[i] = p[static_cast<std::size_t>(i)].real();
            }
        }
    }
    return mesh;
}

}  // namespace loopsym::oracle
