#include "loopsym/pseudolinalg.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace loopsym {

void SpaceFormSpec::validate() const {
    if (m < 1) throw std::invalid_argument("SpaceFormSpec: m must be >= 1");
    if (k < 0) throw std::invalid_argument("SpaceFormSpec: k must be >= 0");
    if (r < 0 || r > m)
        throw std::invalid_argument("SpaceFormSpec: intrinsic signature r=" + std::to_string(r) +
                                    " outside [0," + std::to_string(m) + "]");
    if (s < r || s - r > k)
        throw std::invalid_argument("SpaceFormSpec: ambient signature s=" + std::to_string(s) +
                                    " outside [" + std::to_string(r) + "," + std::to_string(r + k) + "]");
    if (epsilon != 1 && epsilon != -1) throw std::invalid_argument("SpaceFormSpec: epsilon must be +-1");
    if (c == 0.0 || !std::isfinite(c)) throw std::invalid_argument("SpaceFormSpec: curvature c must be finite and nonzero");
}

bool SpaceFormSpec::flat_admissible() const {
    if (epsilon == 1) return c < 0.0 || c > 1.0;
    return c < -1.0 || c > 0.0;
}

std::string SpaceFormSpec::admissible_interval() const {
    return epsilon == 1 ? "(-inf,0) u (1,inf)" : "(-inf,-1) u (0,inf)";
}

void SpaceFormSpec::require_flat_admissible() const {
    if (!flat_admissible())
        throw std::domain_error("curvature c=" + std::to_string(c) + " outside the admissible range " +
                                admissible_interval() + " for epsilon=" + std::to_string(epsilon));
}

std::vector<double> MetricBlocks::full_diag() const {
    std::vector<double> d = rotation_diag();
    d.push_back(epsilon_entry);
    return d;
}

std::vector<double> MetricBlocks::rotation_diag() const {
    std::vector<double> d = j1;
    d.insert(d.end(), j2.begin(), j2.end());
    return d;
}

MetricBlocks make_metric(const SpaceFormSpec& spec) {
    spec.validate();
    MetricBlocks out;
    out.j1.assign(static_cast<std::size_t>(spec.m), 1.0);
    out.j2.assign(static_cast<std::size_t>(spec.k), 1.0);
    // Negative directions are placed last within each block.
    for (int i = 0; i < spec.r; ++i) out.j1[static_cast<std::size_t>(spec.m - 1 - i)] = -1.0;
    for (int i = 0; i < spec.s - spec.r; ++i) out.j2[static_cast<std::size_t>(spec.k - 1 - i)] = -1.0;
    out.epsilon_entry = spec.epsilon;
    return out;
}

namespace {

// Degree-13 Pade numerator/denominator split: exp(A) ~ (V-U)^{-1}(V+U).
CMat pade13(const CMat& a) {
    static const double b[14] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                                 1187353796428800.0,  129060195264000.0,   10559470521600.0,
                                 670442572800.0,      33522128640.0,       1323241920.0,
                                 40840800.0,          960960.0,            16380.0,
                                 182.0,               1.0};
    const int n = a.rows();
    const CMat id = CMat::identity(n);
    const CMat a2 = a * a;
    const CMat a4 = a2 * a2;
    const CMat a6 = a4 * a2;
    const CMat u = a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) +
                        b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
    const CMat v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) +
                   b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
    return solve(v - u, v + u);
}

}  // namespace

CMat pseudo_exp(const CMat& x) {
    if (x.rows() != x.cols()) throw std::invalid_argument("pseudo_exp: matrix must be square");
    if (!x.is_finite()) throw std::invalid_argument("pseudo_exp: non-finite entries");
    const double theta13 = 5.371920351148152;
    const double nrm = x.norm1();
    int squarings = 0;
    CMat a = x;
    if (nrm > theta13) {
        squarings = static_cast<int>(std::ceil(std::log2(nrm / theta13)));
        a *= cd(std::ldexp(1.0, -squarings), 0.0);
    }
    CMat e = pade13(a);
    for (int i = 0; i < squarings; ++i) e = e * e;
    return e;
}

double pseudo_orthogonality_residual(const CMat& f, const std::vector<double>& j_diag) {
    const int n = static_cast<int>(j_diag.size());
    if (f.rows() != n || f.cols() != n)
        throw std::invalid_argument("pseudo_orthogonality_residual: dimension mismatch");
    // F^t J F - J with diagonal J, formed directly.
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            cd s(0.0, 0.0);
            for (int l = 0; l < n; ++l) s += f(l, i) * j_diag[static_cast<std::size_t>(l)] * f(l, j);
            if (i == j) s -= j_diag[static_cast<std::size_t>(i)];
            worst = std::max(worst, std::abs(s));
        }
    }
    return worst;
}

double pseudo_orthogonality_residual(const CMat& f, const MetricBlocks& j) {
    return pseudo_orthogonality_residual(f, j.full_diag());
}

}  // namespace loopsym
