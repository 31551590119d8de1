#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "loopsym/discreteforms.hpp"
#include "loopsym/pseudolinalg.hpp"

namespace loopsym {

enum class FrameMode { ambient_square, affine_block };

/// Frame field F with F^{-1} dF = A, one n x n complex matrix per node,
/// normalized to the prescribed value at the chart base node. In affine mode
/// the last row is pinned to (0,...,0,1) exactly.
struct FrameField {
    GridChart chart;
    int n = 0;
    FrameMode mode = FrameMode::ambient_square;
    std::vector<cd> f;

    FrameField() = default;
    FrameField(const GridChart& chart_, int n_, FrameMode mode_);

    std::size_t stride() const { return static_cast<std::size_t>(n) * n; }
    cd* at(int iu, int iv) { return f.data() + chart.index(iu, iv) * stride(); }
    const cd* at(int iu, int iv) const { return f.data() + chart.index(iu, iv) * stride(); }
    CMat mat(int iu, int iv) const;
    void set(int iu, int iv, const CMat& m);
};

enum class TargetSpace { sphere, hyperbolic, flat };

std::string target_name(TargetSpace t);

/// Per-node ambient position vectors: length m+k+1 for quadric targets,
/// m+k for the flat target (translation part of the affine frame).
struct ImmersionMesh {
    GridChart chart;
    SpaceFormSpec spec;
    TargetSpace target = TargetSpace::flat;
    int dim = 0;
    std::optional<cd> lambda;
    std::vector<double> x;

    ImmersionMesh() = default;
    ImmersionMesh(const GridChart& chart_, const SpaceFormSpec& spec_, TargetSpace target_, int dim_);

    double* at(int iu, int iv) { return x.data() + chart.index(iu, iv) * dim; }
    const double* at(int iu, int iv) const { return x.data() + chart.index(iu, iv) * dim; }
};

/// Integrate F^{-1} dF = A from the base node along the canonical path
/// (the base row first, then each column), one second-order Lie step
///   F_next = F_cur * exp(0.5 (A_e(start) + A_e(end)) h_e)
/// per lattice edge. F(p) = init exactly.
FrameField integrate_frame(const MatrixOneForm& a, const GridChart& chart, const CMat& init,
                           FrameMode mode = FrameMode::ambient_square);

/// Integrate from the base node to the far corner along the row-first and
/// column-first lattice paths; returns the sup-norm of the difference of the
/// two corner frames. Vanishes at O(h^2) iff A is flat.
double path_independence_audit(const MatrixOneForm& a, const GridChart& chart);

/// Last frame column (quadric targets) or translation block (flat target).
ImmersionMesh extract_immersion(const FrameField& f, const SpaceFormSpec& spec,
                                double realness_tol = 1e-6);

/// Mesh file format: one header line
///   # target=<sphere|hyperbolic|flat> m k r s epsilon lambda_re lambda_im N_u N_v
/// (lambda 0 0 when there is no spectral value of record), then per node a
/// row-major `u v x_1 ... x_n` line, 17 significant digits throughout.
void write_mesh(std::ostream& out, const ImmersionMesh& mesh);
void write_mesh_file(const std::string& path, const ImmersionMesh& mesh);
ImmersionMesh read_mesh(std::istream& in);
ImmersionMesh read_mesh_file(const std::string& path);

}  // namespace loopsym
