#include "loopsym/integrator.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace loopsym {

FrameField::FrameField(const GridChart& chart_, int n_, FrameMode mode_)
    : chart(chart_), n(n_), mode(mode_), f(chart_.count() * static_cast<std::size_t>(n_) * n_) {}

CMat FrameField::mat(int iu, int iv) const {
    CMat m(n, n);
    const cd* p = at(iu, iv);
    std::copy(p, p + stride(), m.data());
    return m;
}

void FrameField::set(int iu, int iv, const CMat& m) {
    std::copy(m.data(), m.data() + m.size(), at(iu, iv));
}

ImmersionMesh::ImmersionMesh(const GridChart& chart_, const SpaceFormSpec& spec_, TargetSpace target_, int dim_)
    : chart(chart_), spec(spec_), target(target_), dim(dim_), x(chart_.count() * static_cast<std::size_t>(dim_)) {}

std::string target_name(TargetSpace t) {
    switch (t) {
        case TargetSpace::sphere: return "sphere";
        case TargetSpace::hyperbolic: return "hyperbolic";
        case TargetSpace::flat: return "flat";
    }
    return "?";
}

namespace {

// One lattice edge: F_to = F_from * exp(0.5 (A(from) + A(to)) * h).
CMat edge_step(const CMat& f_from, const cd* a_from, const cd* a_to, int n, double h) {
    CMat m(n, n);
    for (int i = 0; i < n * n; ++i) m.data()[i] = 0.5 * h * (a_from[i] + a_to[i]);
    return f_from * pseudo_exp(m);
}

void pin_affine_row(CMat& f) {
    const int n = f.rows();
    for (int j = 0; j < n; ++j) f(n - 1, j) = (j == n - 1) ? cd(1.0, 0.0) : cd(0.0, 0.0);
}

}  // namespace

FrameField integrate_frame(const MatrixOneForm& a, const GridChart& chart, const CMat& init, FrameMode mode) {
    if (!a.chart.same_geometry(chart)) throw std::invalid_argument("integrate_frame: chart mismatch");
    if (init.rows() != a.n || init.cols() != a.n)
        throw std::invalid_argument("integrate_frame: init must match the form dimension");
    if (!a.is_finite()) throw std::invalid_argument("integrate_frame: non-finite form coefficients");

    const int n = a.n;
    const double hu = chart.h_u(), hv = chart.h_v();
    const int pu = chart.p_u, pv = chart.p_v;
    FrameField out(chart, n, mode);

    auto store = [&](int iu, int iv, CMat m) {
        if (mode == FrameMode::affine_block) pin_affine_row(m);
        out.set(iu, iv, m);
    };

    store(pu, pv, init);
    // base row, then every column (canonical path)
    for (int iu = pu; iu + 1 < chart.n_u; ++iu)
        store(iu + 1, pv, edge_step(out.mat(iu, pv), a.u_at(iu, pv), a.u_at(iu + 1, pv), n, hu));
    for (int iu = pu; iu > 0; --iu)
        store(iu - 1, pv, edge_step(out.mat(iu, pv), a.u_at(iu, pv), a.u_at(iu - 1, pv), n, -hu));
    for (int iu = 0; iu < chart.n_u; ++iu) {
        for (int iv = pv; iv + 1 < chart.n_v; ++iv)
            store(iu, iv + 1, edge_step(out.mat(iu, iv), a.v_at(iu, iv), a.v_at(iu, iv + 1), n, hv));
        for (int iv = pv; iv > 0; --iv)
            store(iu, iv - 1, edge_step(out.mat(iu, iv), a.v_at(iu, iv), a.v_at(iu, iv - 1), n, -hv));
    }
    return out;
}

double path_independence_audit(const MatrixOneForm& a, const GridChart& chart) {
    if (!a.chart.same_geometry(chart)) throw std::invalid_argument("path_independence_audit: chart mismatch");
    if (!a.is_finite()) throw std::invalid_argument("path_independence_audit: non-finite form coefficients");
    const int n = a.n;
    const double hu = chart.h_u(), hv = chart.h_v();
    const int pu = chart.p_u, pv = chart.p_v;
    const int cu = chart.n_u - 1, cv = chart.n_v - 1;

    CMat row_first = CMat::identity(n);
    for (int iu = pu; iu < cu; ++iu)
        row_first = edge_step(row_first, a.u_at(iu, pv), a.u_at(iu + 1, pv), n, hu);
    for (int iv = pv; iv < cv; ++iv)
        row_first = edge_step(row_first, a.v_at(cu, iv), a.v_at(cu, iv + 1), n, hv);

    CMat col_first = CMat::identity(n);
    for (int iv = pv; iv < cv; ++iv)
        col_first = edge_step(col_first, a.v_at(pu, iv), a.v_at(pu, iv + 1), n, hv);
    for (int iu = pu; iu < cu; ++iu)
        col_first = edge_step(col_first, a.u_at(iu, cv), a.u_at(iu + 1, cv), n, hu);

    return (row_first - col_first).max_abs();
}

ImmersionMesh extract_immersion(const FrameField& f, const SpaceFormSpec& spec, double realness_tol) {
    spec.validate();
    const int ambient = spec.m + spec.k + 1;
    if (f.mode == FrameMode::ambient_square && f.n != ambient)
        throw std::invalid_argument("extract_immersion: ambient-square frame must have size m+k+1");
    if (f.mode == FrameMode::affine_block && f.n != ambient + 1)
        throw std::invalid_argument("extract_immersion: affine-block frame must have size m+k+2");

    const bool flat = f.mode == FrameMode::affine_block;
    const int dim = flat ? spec.m + spec.k : ambient;
    const TargetSpace target = flat ? TargetSpace::flat
                                    : (spec.epsilon > 0 ? TargetSpace::sphere : TargetSpace::hyperbolic);
    ImmersionMesh mesh(f.chart, spec, target, dim);
    for (int iu = 0; iu < f.chart.n_u; ++iu) {
        for (int iv = 0; iv < f.chart.n_v; ++iv) {
            const cd* fm = f.at(iu, iv);
            double* x = mesh.at(iu, iv);
            for (int i = 0; i < dim; ++i) {
                const cd v = fm[static_cast<std::size_t>(i) * f.n + (f.n - 1)];
                if (std::abs(v.imag()) > realness_tol * (1.0 + std::abs(v.real())))
                    throw std::domain_error("extract_immersion: position not real at node (" +
                                            std::to_string(iu) + "," + std::to_string(iv) +
                                            "); is lambda on its reality locus?");
                x[i] = v.real();
            }
        }
    }
    return mesh;
}

void write_mesh(std::ostream& out, const ImmersionMesh& mesh) {
    const GridChart& g = mesh.chart;
    const cd lam = mesh.lambda.value_or(cd(0.0, 0.0));
    char buf[32];
    out << "# target=" << target_name(mesh.target) << ' ' << mesh.spec.m << ' ' << mesh.spec.k << ' '
        << mesh.spec.r << ' ' << mesh.spec.s << ' ' << mesh.spec.epsilon;
    std::snprintf(buf, sizeof buf, "%.17g", lam.real());
    out << ' ' << buf;
    std::snprintf(buf, sizeof buf, "%.17g", lam.imag());
    out << ' ' << buf << ' ' << g.n_u << ' ' << g.n_v << '\n';
    for (int iu = 0; iu < g.n_u; ++iu) {
        for (int iv = 0; iv < g.n_v; ++iv) {
            std::snprintf(buf, sizeof buf, "%.17g", g.u(iu));
            out << buf;
            std::snprintf(buf, sizeof buf, "%.17g", g.v(iv));
            out << ' ' << buf;
            const double* x = mesh.at(iu, iv);
            for (int i = 0; i < mesh.dim; ++i) {
                std::snprintf(buf, sizeof buf, "%.17g", x[i]);
                out << ' ' << buf;
            }
            out << '\n';
        }
    }
}

void write_mesh_file(const std::string& path, const ImmersionMesh& mesh) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write mesh file: " + path);
    write_mesh(out, mesh);
}

ImmersionMesh read_mesh(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("mesh file: missing header");
    std::istringstream hs(line);
    std::string hash, target_kv;
    SpaceFormSpec spec;
    double lam_re, lam_im;
    int n_u, n_v;
    if (!(hs >> hash >> target_kv >> spec.m >> spec.k >> spec.r >> spec.s >> spec.epsilon >> lam_re >>
          lam_im >> n_u >> n_v) ||
        hash != "#" || target_kv.rfind("target=", 0) != 0)
        throw std::runtime_error("mesh file: malformed header");
    const std::string tname = target_kv.substr(7);
    TargetSpace target;
    if (tname == "sphere") target = TargetSpace::sphere;
    else if (tname == "hyperbolic") target = TargetSpace::hyperbolic;
    else if (tname == "flat") target = TargetSpace::flat;
    else throw std::runtime_error("mesh file: unknown target '" + tname + "'");

    // chart bounds come from the first and last node rows; the position width
    // is inferred from the first row (flat meshes may carry either m+k or
    // m+k+1 components); c is not part of the format, so the spec echo keeps
    // its default nonzero placeholder.
    int dim = -1;
    std::vector<double> us, vs, xs;
    us.reserve(static_cast<std::size_t>(n_u) * n_v);
    for (long node = 0; node < static_cast<long>(n_u) * n_v; ++node) {
        if (!std::getline(in, line) || line.find_first_not_of(" \t\r") == std::string::npos) {
            if (!in) throw std::runtime_error("mesh file: truncated at node row " + std::to_string(node + 1));
            --node;
            continue;
        }
        std::istringstream rs(line);
        double u, v;
        if (!(rs >> u >> v)) throw std::runtime_error("mesh file: malformed node row " + std::to_string(node + 1));
        us.push_back(u);
        vs.push_back(v);
        std::vector<double> row;
        double val;
        while (rs >> val) row.push_back(val);
        if (dim < 0) {
            dim = static_cast<int>(row.size());
            if (dim != spec.m + spec.k && dim != spec.m + spec.k + 1)
                throw std::runtime_error("mesh file: unexpected position width " + std::to_string(dim));
        } else if (static_cast<int>(row.size()) != dim) {
            throw std::runtime_error("mesh file: inconsistent width at node row " + std::to_string(node + 1));
        }
        xs.insert(xs.end(), row.begin(), row.end());
    }
    const GridChart chart = GridChart::make(us.front(), us.back(), vs.front(), vs.back(), n_u, n_v);
    ImmersionMesh mesh(chart, spec, target, dim);
    mesh.x = std::move(xs);
    if (lam_re != 0.0 || lam_im != 0.0) mesh.lambda = cd(lam_re, lam_im);
    return mesh;
}

ImmersionMesh read_mesh_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open mesh file: " + path);
    return read_mesh(in);
}

}  // namespace loopsym
