#include "igashell/element.hpp"

namespace igashell::element {

Edge parse_edge(const std::string& name) {
    if (name == "u0") return Edge::u0;
    if (name == "u1") return Edge::u1;
    if (name == "v0") return Edge::v0;
    if (name == "v1") return Edge::v1;
    throw ValidationError("unknown edge '" + name + "' (expected u0, u1, v0 or v1)");
}

std::string edge_name(Edge e) {
    switch (e) {
        case Edge::u0: return "u0";
        case Edge::u1: return "u1";
        case Edge::v0: return "v0";
        case Edge::v1: return "v1";
    }
    return "?";
}

std::vector<int> edge_points(const splines::NurbsPatch& patch, Edge edge, int layer) {
    const int n1 = patch.num_points(0);
    const int n2 = patch.num_points(1);
    const bool fixed_u = edge == Edge::u0 || edge == Edge::u1;
    const int depth = fixed_u ? n1 : n2;
    if (layer < 0 || layer >= depth) throw ValidationError("edge row index out of range");
    std::vector<int> ids;
    switch (edge) {
        case Edge::u0:
            for (int j = 0; j < n2; ++j) ids.push_back(patch.point_index(layer, j));
            break;
        case Edge::u1:
            for (int j = 0; j < n2; ++j) ids.push_back(patch.point_index(n1 - 1 - layer, j));
            break;
        case Edge::v0:
            for (int i = 0; i < n1; ++i) ids.push_back(patch.point_index(i, layer));
            break;
        case Edge::v1:
            for (int i = 0; i < n1; ++i) ids.push_back(patch.point_index(i, n2 - 1 - layer));
            break;
    }
    return ids;
}

std::vector<Vec3> point_load(const splines::NurbsPatch& patch, const Vec2& xi, const Vec3& force) {
    std::vector<Vec3> f(patch.num_points(), Vec3::Zero());
    const int e = patch.find_element(xi[0], xi[1]);
    const auto basis = splines::nurbs_basis_eval(patch, e, xi);
    const auto& conn = patch.elements()[e].connectivity;
    for (std::size_t a = 0; a < conn.size(); ++a) f[conn[a]] += basis.values[a] * force;
    return f;
}

namespace {

// Calls fn(element, basis, reference tangent, weight in parameter) at Gauss points along an edge.
template <class Fn>
void for_edge_points(const splines::NurbsPatch& patch, Edge edge, Fn&& fn) {
    const int dir = (edge == Edge::u0 || edge == Edge::u1) ? 1 : 0;
    const int fixed = 1 - dir;
    const double value = (edge == Edge::u0 || edge == Edge::v0) ? 0.0 : 1.0;
    const GaussRule g = gauss_legendre(2 * patch.degree(dir) + 4);
    for (const auto& el : patch.elements()) {
        const double bound = value == 0.0 ? el.lower[fixed] : el.upper[fixed];
        if (bound != value) continue;
        const double h = el.upper[dir] - el.lower[dir];
        std::vector<Vec3> X;
        for (int id : el.connectivity) X.push_back(patch.points()[id]);
        for (std::size_t k = 0; k < g.points.size(); ++k) {
            Vec2 xi;
            xi[fixed] = value;
            xi[dir] = el.lower[dir] + 0.5 * (1.0 + g.points[k]) * h;
            const auto basis = splines::nurbs_basis_eval(patch, el.index, xi);
            Vec3 tangent = Vec3::Zero();
            for (std::size_t a = 0; a < X.size(); ++a) tangent += basis.d1(a, dir) * X[a];
            fn(el, basis, tangent, 0.5 * h * g.weights[k]);
        }
    }
}

template <class Fn>
void for_area_points(const splines::NurbsPatch& patch, Fn&& fn) {
    for (std::size_t e = 0; e < patch.num_elements(); ++e) {
        const auto pts = element_quadrature(patch, e, patch.degree(0) + 1, patch.degree(1) + 1);
        for (const auto& q : pts) fn(patch.elements()[e], q);
    }
}

}  // namespace

std::vector<Vec3> line_load(const splines::NurbsPatch& patch, Edge edge, const Vec3& q) {
    std::vector<Vec3> f(patch.num_points(), Vec3::Zero());
    for_edge_points(patch, edge, [&](const splines::BezierElement& el, const splines::BasisEvaluation& b,
                                     const Vec3& t, double w) {
        const double ds = t.norm() * w;
        for (std::size_t a = 0; a < el.connectivity.size(); ++a) f[el.connectivity[a]] += b.values[a] * ds * q;
    });
    return f;
}

double edge_length(const splines::NurbsPatch& patch, Edge edge) {
    double L = 0.0;
    for_edge_points(patch, edge, [&](const splines::BezierElement&, const splines::BasisEvaluation&, const Vec3& t,
                                     double w) { L += t.norm() * w; });
    return L;
}

std::vector<Vec3> area_load(const splines::NurbsPatch& patch, const Vec3& b) {
    std::vector<Vec3> f(patch.num_points(), Vec3::Zero());
    for_area_points(patch, [&](const splines::BezierElement& el, const QuadraturePoint& q) {
        for (std::size_t a = 0; a < el.connectivity.size(); ++a) f[el.connectivity[a]] += q.basis.values[a] * q.weight * b;
    });
    return f;
}

std::vector<Vec3> pressure_load(const splines::NurbsPatch& patch, double p) {
    std::vector<Vec3> f(patch.num_points(), Vec3::Zero());
    for_area_points(patch, [&](const splines::BezierElement& el, const QuadraturePoint& q) {
        for (std::size_t a = 0; a < el.connectivity.size(); ++a)
            f[el.connectivity[a]] += q.basis.values[a] * q.weight * p * q.reference.a3;
    });
    return f;
}

double patch_area(const splines::NurbsPatch& patch) {
    double A = 0.0;
    for_area_points(patch, [&](const splines::BezierElement&, const QuadraturePoint& q) { A += q.weight; });
    return A;
}

}  // namespace igashell::element
