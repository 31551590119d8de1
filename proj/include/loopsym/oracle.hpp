#pragma once

#include <array>
#include <vector>

#include "loopsym/integrator.hpp"
#include "loopsym/loopfamily.hpp"

namespace loopsym::oracle {

/// The closed-form family of immersions S^2_{c_lambda,1} -> H^3_1 used as
/// ground truth by every convergence and acceptance test. Data for this
/// family: (m,k,r,s,epsilon) = (2,1,1,1,-1) with J = diag(1,-1,1,-1).
SpaceFormSpec desitter_spec(double c = 1.0);

struct OracleConfig {
    double c = 1.0;
    GridChart chart;
    std::vector<SpectralPoint> lambda_list;

    /// c > 0 and every swept lambda on the imaginary axis.
    void validate() const;
};

/// The closed-form frame F_lambda(u,v); real whenever lambda is imaginary,
/// and F(0,0) = I for every lambda.
CMat desitter_frame(double u, double v, cd lambda);

/// Hand-derived entrywise partial derivatives of desitter_frame, so the
/// oracle carries no discretization error of its own.
void desitter_frame_partials(double u, double v, cd lambda, CMat& du, CMat& dv);

/// Maurer-Cartan coefficients A_u, A_v of the closed-form frame at one point,
/// via F^{-1} = J F^t J.
void desitter_mc_form(double u, double v, cd lambda, CMat& au, CMat& av);

/// Last frame column: the immersion point f_lambda(u,v) in H^3_1.
std::array<cd, 4> desitter_position(double u, double v, cd lambda);

/// The flat-space image: (1/sqrt(c)) (-cosh u sin v, -sinh u, 1 - cos v cosh u).
std::array<double, 3> desitter_flat_immersion(double u, double v, double c);

/// lambda-independent components recovered from the closed form: evaluate
/// A_lambda at a reference spectral value and divide the theta/beta blocks by
/// their family coefficients. Reassembly at any other lambda must reproduce
/// the closed-form Maurer-Cartan form (cross-lambda consistency).
ComponentForms desitter_components(const GridChart& chart, double c = 1.0, cd lambda_ref = cd(0.0, 2.0));

/// Closed-form position mesh at an imaginary lambda (collapse studies).
ImmersionMesh desitter_position_mesh(const GridChart& chart, cd lambda, double c = 1.0);

}  // namespace loopsym::oracle
