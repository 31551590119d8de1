#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "loopsym/discreteforms.hpp"
#include "loopsym/pseudolinalg.hpp"

namespace loopsym {

/// The lambda-independent ingredients of every Maurer-Cartan form in the
/// family: tangent connection omega (m x m), normal connection eta (k x k),
/// second fundamental form beta (m x k) and coframe theta (m x 1), all real,
/// sampled per node. alpha = -J2 beta^t J1 is derived on demand, never stored.
struct ComponentForms {
    SpaceFormSpec spec;
    GridChart chart;
    std::vector<double> omega_u, omega_v;
    std::vector<double> eta_u, eta_v;
    std::vector<double> beta_u, beta_v;
    std::vector<double> theta_u, theta_v;

    static ComponentForms zeros(const SpaceFormSpec& spec, const GridChart& chart);

    std::size_t omega_stride() const { return static_cast<std::size_t>(spec.m) * spec.m; }
    std::size_t eta_stride() const { return static_cast<std::size_t>(spec.k) * spec.k; }
    std::size_t beta_stride() const { return static_cast<std::size_t>(spec.m) * spec.k; }
    std::size_t theta_stride() const { return static_cast<std::size_t>(spec.m); }

    double* omega_at(std::vector<double>& a, int iu, int iv) { return a.data() + chart.index(iu, iv) * omega_stride(); }
    const double* omega_at(const std::vector<double>& a, int iu, int iv) const { return a.data() + chart.index(iu, iv) * omega_stride(); }
    const double* eta_at(const std::vector<double>& a, int iu, int iv) const { return a.data() + chart.index(iu, iv) * eta_stride(); }
    const double* beta_at(const std::vector<double>& a, int iu, int iv) const { return a.data() + chart.index(iu, iv) * beta_stride(); }
    const double* theta_at(const std::vector<double>& a, int iu, int iv) const { return a.data() + chart.index(iu, iv) * theta_stride(); }

    /// Checks the structural invariants: omega is J1-skew and eta is J2-skew
    /// per coefficient, and the 2x2 coframe matrix [theta_u | theta_v] is
    /// invertible at every node (the immersion condition, m = 2).
    /// Throws naming the offending node.
    void validate(double skew_tol = 1e-10, double det_tol = 1e-12) const;
};

enum class Locus { imaginary_axis, real_axis, unit_circle };

std::string locus_name(Locus l);

/// A point of the spectral plane tagged with the reality locus it lies on.
struct SpectralPoint {
    cd lambda;
    Locus locus = Locus::imaginary_axis;

    /// Classify lambda onto one of the loci (1e-12 relative tolerance);
    /// throws if lambda is off every locus or zero.
    static SpectralPoint on_locus(cd lambda);
    /// Locus parameterization: imaginary axis t -> i t, real axis t -> t,
    /// unit circle phi -> e^{i phi}.
    static SpectralPoint from_parameter(Locus locus, double t);
};

/// Reality locus of the family for given (c, epsilon):
/// epsilon=+1: c<0 -> iR*, 0<c<1 -> R*, c>1 -> S^1 (mirrored for epsilon=-1).
Locus admissible_locus(double c, int epsilon);

/// The spectral value where the family reproduces the original immersion:
/// lambda0 = (1 + sqrt(1 - epsilon c)) / sqrt(epsilon c), principal roots.
/// Rejects c outside the flat-admissible range.
cd lambda0(double c, int epsilon);

/// Curvature of the family member at lambda: c_lambda = 4 epsilon/(lambda+1/lambda)^2.
/// Rejects lambda in {0, +-i}; asserts realness when lambda sits on a locus.
double c_of_lambda(cd lambda, int epsilon);

/// The two lambda-dependent scalars multiplying the theta and beta blocks.
struct FamilyCoefficients {
    cd sqrt_ec;    // principal sqrt(epsilon c)
    cd sqrt_1mec;  // principal sqrt(1 - epsilon c)

    static FamilyCoefficients make(double c, int epsilon);

    cd theta_coeff(cd lambda) const { return 0.5 * sqrt_ec * (lambda + 1.0 / lambda); }
    cd beta_coeff(cd lambda) const { return 0.5 * sqrt_ec / sqrt_1mec * (lambda - 1.0 / lambda); }
    /// The affine scaling i sqrt(epsilon c)/sqrt(1 - epsilon c); real for
    /// flat-admissible c (equals beta_coeff at lambda = i).
    cd affine_factor() const { return cd(0.0, 1.0) * sqrt_ec / sqrt_1mec; }
};

/// alpha = -J2 beta^t J1 applied to one coefficient matrix.
CMat derive_alpha(const CMat& beta, const MetricBlocks& j);

/// Maurer-Cartan form of the sphere/hyperbolic immersion, size m+k+1:
///   [ omega            beta   theta ]
///   [ alpha            eta    0     ]
///   [ -eps theta^t J1  0      0     ]
MatrixOneForm assemble_sphere_form(const ComponentForms& cf);

/// The spectral family A_lambda: same layout with beta/alpha blocks scaled by
/// beta_coeff(lambda) and theta blocks by theta_coeff(lambda).
MatrixOneForm assemble_family_form(const ComponentForms& cf, const SpectralPoint& lam);

/// The affine-group form of the flat-space construction, size m+k+2; the
/// (m+k)-th row and column are zero and the translation column carries theta:
///   [ omega    g beta  0  theta ]      g = i sqrt(eps c)/sqrt(1 - eps c)
///   [ g alpha  eta     0  0     ]
///   [ 0        0       0  0     ]
///   [ 0        0       0  0     ]
/// Real whenever the components are; rejects c outside the admissible range.
MatrixOneForm assemble_affine_form(const ComponentForms& cf);

/// Maurer-Cartan form of the rescaled family (size m+k+2): the square
/// (m+k+1) part is assemble_family_form and the final column carries theta in
/// its first m rows. At lambda = +-i the theta blocks of the square part
/// vanish and the affine pattern above remains.
MatrixOneForm assemble_scaled_form(const ComponentForms& cf, const SpectralPoint& lam);

/// Component-data file format. Header
///   m k r s epsilon c N_u N_v u_min u_max v_min v_max
/// then one row per node, u-major (v fastest), holding the flattened
/// row-major coefficients of omega_u omega_v eta_u eta_v beta_u beta_v
/// theta_u theta_v as decimal reals.
ComponentForms read_components(std::istream& in);
ComponentForms read_components_file(const std::string& path);
void write_components(std::ostream& out, const ComponentForms& cf);
void write_components_file(const std::string& path, const ComponentForms& cf);

}  // namespace loopsym
