#pragma once

#include <string>
#include <vector>

#include "loopsym/complexmat.hpp"

namespace loopsym {

/// Dimensions, signatures and curvature of an immersion problem
/// M^m_{c,r} -> Q^{m+k}_s(epsilon). epsilon = +1 selects the sphere target,
/// -1 the hyperbolic one; delta = (1-epsilon)/2.
struct SpaceFormSpec {
    int m = 2;          // intrinsic dimension
    int k = 1;          // codimension
    int r = 0;          // negative directions of the induced metric
    int s = 0;          // negative directions of the ambient metric
    int epsilon = 1;    // +1 sphere, -1 hyperbolic
    double c = 1.0;     // intrinsic constant curvature, nonzero

    int delta() const { return (1 - epsilon) / 2; }

    /// Throws std::invalid_argument on any violated invariant.
    void validate() const;

    /// True iff c lies in the range where the flat-space constructions apply:
    /// epsilon=+1: c in (-inf,0) u (1,inf); epsilon=-1: c in (-inf,-1) u (0,inf).
    bool flat_admissible() const;
    /// Human-readable admissible interval for this epsilon.
    std::string admissible_interval() const;
    /// Throws std::domain_error naming the valid interval if not admissible.
    void require_flat_admissible() const;
};

/// The diagonal ambient metric J = diag(J1, J2, epsilon). Negative entries sit
/// last within each block; a J1/J2 entry is stored as the double +-1.
struct MetricBlocks {
    std::vector<double> j1;    // size m
    std::vector<double> j2;    // size k
    double epsilon_entry = 1;  // +-1

    int m() const { return static_cast<int>(j1.size()); }
    int k() const { return static_cast<int>(j2.size()); }

    /// diag(J1, J2, epsilon), size (m+k+1).
    std::vector<double> full_diag() const;
    /// diag(J1, J2), size (m+k) — the rotation block of the affine group.
    std::vector<double> rotation_diag() const;

    CMat as_matrix() const { return CMat::diag(full_diag()); }
};

MetricBlocks make_metric(const SpaceFormSpec& spec);

/// Matrix exponential by scaling-and-squaring with a fixed degree-13 Pade
/// approximant. Backward error stays near roundoff for the step matrices this
/// library produces (||X|| of order of a grid spacing).
CMat pseudo_exp(const CMat& x);

/// sup-norm of F^t J F - J for the given diagonal metric.
double pseudo_orthogonality_residual(const CMat& f, const std::vector<double>& j_diag);
double pseudo_orthogonality_residual(const CMat& f, const MetricBlocks& j);

}  // namespace loopsym
