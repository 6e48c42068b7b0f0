#include "igashell/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

namespace igashell::io {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw Error("write failed for " + path.string());
}

struct Sample {
    Vec3 reference;
    Vec3 deformed;
    Vec3 normal_reference;
    Vec3 normal_deformed;
};

Sample evaluate(const solver::Analysis& analysis, const solver::State& state, int patch, const Vec2& xi) {
    const auto& p = analysis.model().patches[patch];
    const int e = p.find_element(xi[0], xi[1]);
    const auto basis = splines::nurbs_basis_eval(p, e, xi);
    const auto& conn = p.elements()[e].connectivity;
    std::vector<Vec3> X(conn.size()), x(conn.size());
    for (std::size_t a = 0; a < conn.size(); ++a) {
        X[a] = p.points()[conn[a]];
        x[a] = X[a] + state.u.segment<3>(3 * analysis.dofs().node[patch][conn[a]]);
    }
    Sample s;
    s.reference = Vec3::Zero();
    s.deformed = Vec3::Zero();
    for (std::size_t a = 0; a < conn.size(); ++a) {
        s.reference += basis.values[a] * X[a];
        s.deformed += basis.values[a] * x[a];
    }
    s.normal_reference = kinematics::surface_geometry(basis, X).a3;
    s.normal_deformed = kinematics::surface_geometry(basis, x).a3;
    return s;
}

Vec2 edge_parameter(element::Edge e, double s) {
    switch (e) {
        case element::Edge::u0: return Vec2(0.0, s);
        case element::Edge::u1: return Vec2(1.0, s);
        case element::Edge::v0: return Vec2(s, 0.0);
        case element::Edge::v1: return Vec2(s, 1.0);
    }
    return Vec2::Zero();
}

double angle_between(const Vec3& a, const Vec3& b) {
    return std::atan2(a.cross(b).norm(), a.dot(b));
}

}  // namespace

void write_history(const solver::SolutionHistory& history, const solver::Model& model,
                   const std::filesystem::path& path) {
    auto out = open_output(path);
    out << "step,lambda";
    for (const auto& m : model.monitors) out << ',' << m.name << "_x," << m.name << "_y," << m.name << "_z";
    out << ",iterations\n";
    for (const auto& row : history.steps()) {
        out << row.step << ',' << fmt(row.lambda);
        for (const auto& u : row.monitors) out << ',' << fmt(u[0]) << ',' << fmt(u[1]) << ',' << fmt(u[2]);
        out << ',' << row.iterations << '\n';
    }
    finish(out, path);
}

SurfaceMesh sample_surface(const solver::Analysis& analysis, const solver::State& state, int n, bool weld) {
    if (n < 2) throw DomainError("surface subdivision must be at least 2, got " + std::to_string(n));
    SurfaceMesh mesh;
    std::vector<Vec3> reference;
    for (const auto& el : analysis.elements()) {
        const auto& be = analysis.model().patches[el.patch].elements()[el.element];
        const int base = static_cast<int>(mesh.points.size());
        for (int j = 0; j <= n; ++j) {
            for (int i = 0; i <= n; ++i) {
                const Vec2 xi(be.lower[0] + (be.upper[0] - be.lower[0]) * i / n,
                              be.lower[1] + (be.upper[1] - be.lower[1]) * j / n);
                const auto basis = splines::nurbs_basis_eval(analysis.model().patches[el.patch], el.element, xi);
                Vec3 X = Vec3::Zero(), u = Vec3::Zero();
                for (std::size_t a = 0; a < el.connectivity.size(); ++a) {
                    X += basis.values[a] * el.reference[a];
                    u += basis.values[a] * state.u.segment<3>(3 * analysis.dofs().node[el.patch][el.connectivity[a]]);
                }
                reference.push_back(X);
                mesh.points.push_back(X + u);
                mesh.displacement.push_back(u.norm());
            }
        }
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < n; ++i) {
                const int a = base + i + (n + 1) * j;
                mesh.quads.push_back({a, a + 1, a + n + 2, a + n + 1});
            }
        }
    }
    if (!weld || reference.empty()) return mesh;

    Vec3 lo = reference[0], hi = reference[0];
    for (const auto& x : reference) {
        lo = lo.cwiseMin(x);
        hi = hi.cwiseMax(x);
    }
    const double tol = 1e-9 * (hi - lo).norm();
    std::vector<int> order(reference.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return reference[a][0] < reference[b][0]; });
    std::vector<int> rep(reference.size(), -1);
    for (std::size_t k = 0; k < order.size(); ++k) {
        const int i = order[k];
        if (rep[i] >= 0) continue;
        rep[i] = i;
        for (std::size_t l = k + 1; l < order.size() && reference[order[l]][0] - reference[i][0] <= tol; ++l) {
            const int j = order[l];
            if (rep[j] < 0 && (reference[j] - reference[i]).norm() <= tol) rep[j] = i;
        }
    }
    // Keep the first vertex of every cluster in its original order.
    std::vector<int> first(reference.size(), -1);
    for (std::size_t i = 0; i < reference.size(); ++i) {
        const int r = rep[i];
        if (first[r] < 0 || static_cast<int>(i) < first[r]) first[r] = static_cast<int>(i);
    }
    std::vector<int> index(reference.size(), -1);
    SurfaceMesh welded;
    for (std::size_t i = 0; i < reference.size(); ++i) {
        if (first[rep[i]] != static_cast<int>(i)) continue;
        index[rep[i]] = static_cast<int>(welded.points.size());
        welded.points.push_back(mesh.points[i]);
        welded.displacement.push_back(mesh.displacement[i]);
    }
    for (const auto& q : mesh.quads) {
        welded.quads.push_back({index[rep[q[0]]], index[rep[q[1]]], index[rep[q[2]]], index[rep[q[3]]]});
    }
    return welded;
}

void write_surface(const solver::Analysis& analysis, const solver::State& state, const std::filesystem::path& path,
                   int n) {
    const SurfaceMesh mesh = sample_surface(analysis, state, n, true);
    auto out = open_output(path);
    out << "# vtk DataFile Version 3.0\n";
    out << "igashell surface lambda=" << fmt(state.lambda) << "\n";
    out << "ASCII\nDATASET UNSTRUCTURED_GRID\n";
    out << "POINTS " << mesh.points.size() << " double\n";
    for (const auto& x : mesh.points) out << fmt(x[0]) << ' ' << fmt(x[1]) << ' ' << fmt(x[2]) << '\n';
    out << "CELLS " << mesh.quads.size() << ' ' << 5 * mesh.quads.size() << '\n';
    for (const auto& q : mesh.quads) out << "4 " << q[0] << ' ' << q[1] << ' ' << q[2] << ' ' << q[3] << '\n';
    out << "CELL_TYPES " << mesh.quads.size() << '\n';
    for (std::size_t c = 0; c < mesh.quads.size(); ++c) out << "9\n";
    out << "POINT_DATA " << mesh.points.size() << '\n';
    out << "SCALARS displacement double 1\nLOOKUP_TABLE default\n";
    for (double d : mesh.displacement) out << fmt(d) << '\n';
    finish(out, path);
}

double max_interface_kink(const solver::Analysis& analysis, const solver::State& state, int samples) {
    double worst = 0.0;
    for (const auto& itf : solver::find_interfaces(analysis.model(), analysis.dofs())) {
        for (int k = 0; k < samples; ++k) {
            const double s = (k + 0.5) / samples;
            const Sample a = evaluate(analysis, state, itf.patch_a, edge_parameter(itf.edge_a, s));
            const Sample b = evaluate(analysis, state, itf.patch_b, edge_parameter(itf.edge_b, itf.reversed ? 1.0 - s : s));
            const double before = angle_between(a.normal_reference, b.normal_reference);
            const double after = angle_between(a.normal_deformed, b.normal_deformed);
            worst = std::max(worst, std::abs(after - before));
        }
    }
    return worst * 180.0 / std::acos(-1.0);
}

}  // namespace igashell::io
