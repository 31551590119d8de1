#pragma once

#include <array>

#include "loopsym/oracle.hpp"

// Test-only resampling of the closed-form family in rotated chart
// coordinates (s,t) with (u,v) = (s cos(phi) - t sin(phi), s sin(phi) + t cos(phi)).
//
// In its own coordinates the closed form has A_u constant and A_v depending
// on u alone, so every lattice-path integration leg is exact and frame errors
// sit at roundoff. The rotation mixes the two directions, giving the
// integrator genuinely varying coefficients along every leg; that is what the
// second-order convergence studies measure. The rotated fields are still the
// same immersions, so every closed-form comparison stays available.

namespace loopsym::testsupport {

struct RotatedOracle {
    double phi = 0.5;
    double c = 1.0;

    void map(double s, double t, double& u, double& v) const {
        u = std::cos(phi) * s - std::sin(phi) * t;
        v = std::sin(phi) * s + std::cos(phi) * t;
    }

    CMat frame(double s, double t, cd lambda) const {
        double u, v;
        map(s, t, u, v);
        return oracle::desitter_frame(u, v, lambda);
    }

    std::array<cd, 4> position(double s, double t, cd lambda) const {
        double u, v;
        map(s, t, u, v);
        return oracle::desitter_position(u, v, lambda);
    }

    std::array<double, 3> flat_immersion(double s, double t) const {
        double u, v;
        map(s, t, u, v);
        return oracle::desitter_flat_immersion(u, v, c);
    }

    ComponentForms components(const GridChart& chart, cd lambda_ref = cd(0.0, 2.0)) const {
        const SpaceFormSpec spec = oracle::desitter_spec(c);
        const FamilyCoefficients fc = FamilyCoefficients::make(c, spec.epsilon);
        const cd ct = fc.theta_coeff(lambda_ref);
        const cd cb = fc.beta_coeff(lambda_ref);
        ComponentForms cf = ComponentForms::zeros(spec, chart);
        const double cp = std::cos(phi), sp = std::sin(phi);
        CMat au, av;
        for (int is = 0; is < chart.n_u; ++is) {
            for (int it = 0; it < chart.n_v; ++it) {
                double u, v;
                map(chart.u(is), chart.v(it), u, v);
                oracle::desitter_mc_form(u, v, lambda_ref, au, av);
                const CMat as_ = cd(cp, 0.0) * au + cd(sp, 0.0) * av;
                const CMat at_ = cd(-sp, 0.0) * au + cd(cp, 0.0) * av;
                const std::size_t node = chart.index(is, it);
                const CMat* mats[2] = {&as_, &at_};
                std::vector<double>* omegas[2] = {&cf.omega_u, &cf.omega_v};
                std::vector<double>* betas[2] = {&cf.beta_u, &cf.beta_v};
                std::vector<double>* thetas[2] = {&cf.theta_u, &cf.theta_v};
                for (int d = 0; d < 2; ++d) {
                    const CMat& a = *mats[d];
                    double* w = omegas[d]->data() + node * cf.omega_stride();
                    double* bb = betas[d]->data() + node * cf.beta_stride();
                    double* th = thetas[d]->data() + node * cf.theta_stride();
                    for (int r = 0; r < 2; ++r)
                        for (int s2 = 0; s2 < 2; ++s2) w[r * 2 + s2] = a(r, s2).real();
                    for (int r = 0; r < 2; ++r) bb[r] = (a(r, 2) / cb).real();
                    for (int r = 0; r < 2; ++r) th[r] = (a(r, 3) / ct).real();
                }
                // eta is so(1) = {0}
            }
        }
        return cf;
    }
};

}  // namespace loopsym::testsupport
