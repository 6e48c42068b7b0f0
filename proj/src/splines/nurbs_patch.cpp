#include "igashell/splines.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace igashell::splines {

NurbsPatch::NurbsPatch(KnotVector kv1, KnotVector kv2, std::vector<Vec3> points,
                       std::vector<double> weights, double thickness)
    : knots_{kv1.normalized(), kv2.normalized()},
      points_(std::move(points)),
      weights_(std::move(weights)),
      thickness_(thickness) {
    const int n1 = knots_[0].num_basis();
    const int n2 = knots_[1].num_basis();
    const auto expected = static_cast<std::size_t>(n1) * static_cast<std::size_t>(n2);
    if (points_.size() != expected) {
        std::ostringstream msg;
        msg << "patch: control net has " << points_.size() << " points, knot vectors require "
            << n1 << " x " << n2 << " = " << expected;
        throw ValidationError(msg.str());
    }
    if (weights_.size() != expected) {
        throw ValidationError("patch: weight count does not match control net");
    }
    for (std::size_t k = 0; k < weights_.size(); ++k) {
        if (!(weights_[k] > 0.0) || !std::isfinite(weights_[k])) {
            throw ValidationError("patch: weight of control point " + std::to_string(k) +
                                  " must be positive");
        }
        if (!points_[k].allFinite()) {
            throw ValidationError("patch: control point " + std::to_string(k) + " is not finite");
        }
    }
    if (!(thickness_ > 0.0) || !std::isfinite(thickness_)) {
        throw ValidationError("patch: thickness must be positive");
    }

    auto cache = std::make_shared<Cache>();
    cache->extraction = {bezier_extraction(knots_[0]), bezier_extraction(knots_[1])};
    const auto& x1 = cache->extraction[0];
    const auto& x2 = cache->extraction[1];
    const int p = knots_[0].degree();
    const int q = knots_[1].degree();
    const int nloc1 = p + 1;
    const int nloc2 = q + 1;
    for (std::size_t e2 = 0; e2 < x2.num_elements(); ++e2) {
        for (std::size_t e1 = 0; e1 < x1.num_elements(); ++e1) {
            BezierElement el;
            el.index = static_cast<int>(cache->elements.size());
            el.span_index = {static_cast<int>(e1), static_cast<int>(e2)};
            el.lower = {x1.bounds[e1][0], x2.bounds[e2][0]};
            el.upper = {x1.bounds[e1][1], x2.bounds[e2][1]};
            const int f1 = x1.first_function[e1];
            const int f2 = x2.first_function[e2];
            el.connectivity.reserve(nloc1 * nloc2);
            for (int j = 0; j < nloc2; ++j) {
                for (int i = 0; i < nloc1; ++i) el.connectivity.push_back((f1 + i) + n1 * (f2 + j));
            }
            const MatX& c1 = x1.operators[e1];
            const MatX& c2 = x2.operators[e2];
            el.extraction = MatX::Zero(nloc1 * nloc2, nloc1 * nloc2);
            for (int j = 0; j < nloc2; ++j)
                for (int i = 0; i < nloc1; ++i)
                    for (int l = 0; l < nloc2; ++l)
                        for (int k = 0; k < nloc1; ++k)
                            el.extraction(i + nloc1 * j, k + nloc1 * l) = c1(i, k) * c2(j, l);
            cache->elements.push_back(std::move(el));
        }
    }
    cache_ = std::move(cache);
}

int NurbsPatch::find_element(double xi1, double xi2) const {
    const std::array<double, 2> xi{xi1, xi2};
    std::array<int, 2> idx{};
    for (int d = 0; d < 2; ++d) {
        const int span = knots_[d].find_span(xi[d]);
        const auto& spans = cache_->extraction[d].spans;
        const auto it = std::lower_bound(spans.begin(), spans.end(), span);
        idx[d] = static_cast<int>(it - spans.begin());
    }
    return idx[0] + static_cast<int>(cache_->extraction[0].num_elements()) * idx[1];
}

BasisEvaluation nurbs_basis_eval(const NurbsPatch& patch, int element, const Vec2& xi) {
    if (element < 0 || element >= static_cast<int>(patch.num_elements())) {
        throw DomainError("nurbs_basis_eval: element index out of range");
    }
    const BezierElement& el = patch.elements()[element];
    const int p = patch.degree(0);
    const int q = patch.degree(1);
    std::array<double, 2> h{};
    std::array<double, 2> t{};
    constexpr double slack = 1e-12;
    for (int d = 0; d < 2; ++d) {
        h[d] = el.upper[d] - el.lower[d];
        if (xi[d] < el.lower[d] - slack * h[d] || xi[d] > el.upper[d] + slack * h[d]) {
            std::ostringstream msg;
            msg << "nurbs_basis_eval: parameter " << xi[d] << " outside element span ["
                << el.lower[d] << ", " << el.upper[d] << "]";
            throw DomainError(msg.str());
        }
        t[d] = std::clamp((xi[d] - el.lower[d]) / h[d], 0.0, 1.0);
    }
    const BernsteinValues b1 = bernstein_eval(p, t[0]);
    const BernsteinValues b2 = bernstein_eval(q, t[1]);
    const int n = (p + 1) * (q + 1);

    // Tensor-product Bernstein values and derivatives w.r.t. patch parameters.
    VecX B(n), B1(n), B2(n), B11(n), B22(n), B12(n);
    for (int j = 0; j <= q; ++j) {
        for (int i = 0; i <= p; ++i) {
            const int a = i + (p + 1) * j;
            B[a] = b1.values[i] * b2.values[j];
            B1[a] = b1.d1[i] * b2.values[j] / h[0];
            B2[a] = b1.values[i] * b2.d1[j] / h[1];
            B11[a] = b1.d2[i] * b2.values[j] / (h[0] * h[0]);
            B22[a] = b1.values[i] * b2.d2[j] / (h[1] * h[1]);
            B12[a] = b1.d1[i] * b2.d1[j] / (h[0] * h[1]);
        }
    }

    VecX W(n);
    for (int a = 0; a < n; ++a) W[a] = patch.weights()[el.connectivity[a]];
    const MatX& C = el.extraction;
    const VecX Wb = C.transpose() * W;

    const double w = Wb.dot(B);
    if (!(w > 0.0)) throw Error("nurbs_basis_eval: nonpositive weight function (invariant violated)");
    const std::array<double, 2> wd{Wb.dot(B1), Wb.dot(B2)};
    const double w11 = Wb.dot(B11);
    const double w22 = Wb.dot(B22);
    const double w12 = Wb.dot(B12);

    const VecX CB = C * B;
    const std::array<VecX, 2> CBd{C * B1, C * B2};
    const VecX CB11 = C * B11;
    const VecX CB22 = C * B22;
    const VecX CB12 = C * B12;

    BasisEvaluation out;
    out.values = W.cwiseProduct(CB) / w;
    out.d1.resize(n, 2);
    for (int d = 0; d < 2; ++d) {
        out.d1.col(d) = W.cwiseProduct(CBd[d] / w - wd[d] * CB / (w * w));
    }
    auto second = [&](const VecX& cbab, double wab, int alpha, int beta) -> VecX {
        const double w2 = w * w;
        const double w3 = w2 * w;
        return W.cwiseProduct(cbab / w - wd[alpha] * CBd[beta] / w2 - wd[beta] * CBd[alpha] / w2 +
                              2.0 * wd[alpha] * wd[beta] * CB / w3 - wab * CB / w2);
    };
    out.d2.resize(n, 3);
    out.d2.col(0) = second(CB11, w11, 0, 0);
    out.d2.col(1) = second(CB22, w22, 1, 1);
    out.d2.col(2) = second(CB12, w12, 0, 1);
    return out;
}

Vec3 surface_point(const NurbsPatch& patch, double xi1, double xi2) {
    const int e = patch.find_element(xi1, xi2);
    const BasisEvaluation basis = nurbs_basis_eval(patch, e, Vec2(xi1, xi2));
    const auto& conn = patch.elements()[e].connectivity;
    Vec3 x = Vec3::Zero();
    for (std::size_t a = 0; a < conn.size(); ++a) x += basis.values[a] * patch.points()[conn[a]];
    return x;
}

namespace {

using Vec4 = Eigen::Vector4d;

// Boehm insertion on one homogeneous control polygon.
std::vector<Vec4> insert_on_curve(const std::vector<double>& U, int p, const std::vector<Vec4>& P,
                                  double xi, int span, int mult) {
    const int n = static_cast<int>(P.size());
    std::vector<Vec4> Q(n + 1);
    const int k = span;
    for (int i = 0; i <= k - p; ++i) Q[i] = P[i];
    for (int i = k - p + 1; i <= k - mult; ++i) {
        const double alpha = (xi - U[i]) / (U[i + p] - U[i]);
        Q[i] = alpha * P[i] + (1.0 - alpha) * P[i - 1];
    }
    for (int i = k - mult + 1; i <= n; ++i) Q[i] = P[i - 1];
    return Q;
}

}  // namespace

NurbsPatch insert_knot(const NurbsPatch& patch, int dir, double xi) {
    if (dir != 0 && dir != 1) throw DomainError("insert_knot: direction must be 0 or 1");
    const KnotVector& kv = patch.knots(dir);
    if (!(xi > kv.front() && xi < kv.back())) {
        throw DomainError("insert_knot: knot must lie strictly inside the domain");
    }
    const int p = kv.degree();
    const int mult = kv.multiplicity(xi);
    if (mult + 1 > p) {
        throw ValidationError("insert_knot: multiplicity would exceed the degree");
    }
    const int span = kv.find_span(xi);
    const int n1 = patch.num_points(0);
    const int n2 = patch.num_points(1);
    const int new1 = dir == 0 ? n1 + 1 : n1;
    const int new2 = dir == 1 ? n2 + 1 : n2;

    std::vector<Vec3> pts(static_cast<std::size_t>(new1) * new2);
    std::vector<double> wts(pts.size());
    const int lines = dir == 0 ? n2 : n1;
    const int len = dir == 0 ? n1 : n2;
    for (int line = 0; line < lines; ++line) {
        std::vector<Vec4> P(len);
        for (int k = 0; k < len; ++k) {
            const int idx = dir == 0 ? patch.point_index(k, line) : patch.point_index(line, k);
            const double w = patch.weights()[idx];
            P[k] << w * patch.points()[idx], w;
        }
        const auto Q = insert_on_curve(kv.values(), p, P, xi, span, mult);
        for (int k = 0; k <= len; ++k) {
            const int idx = dir == 0 ? k + new1 * line : line + new1 * k;
            wts[idx] = Q[k][3];
            pts[idx] = Q[k].head<3>() / Q[k][3];
        }
    }
    std::vector<double> knots = kv.values();
    knots.insert(knots.begin() + span + 1, xi);
    KnotVector refined(p, std::move(knots));
    if (dir == 0) {
        return NurbsPatch(refined, patch.knots(1), std::move(pts), std::move(wts), patch.thickness());
    }
    return NurbsPatch(patch.knots(0), refined, std::move(pts), std::move(wts), patch.thickness());
}

NurbsPatch refine_uniform(const NurbsPatch& patch, int parts1, int parts2) {
    if (parts1 < 1 || parts2 < 1) throw DomainError("refine_uniform: subdivision count must be >= 1");
    NurbsPatch out = patch;
    const std::array<int, 2> parts{parts1, parts2};
    for (int d = 0; d < 2; ++d) {
        const auto u = patch.knots(d).unique_values();
        std::vector<double> inserts;
        for (std::size_t s = 0; s + 1 < u.size(); ++s) {
            for (int k = 1; k < parts[d]; ++k) {
                inserts.push_back(u[s] + (u[s + 1] - u[s]) * static_cast<double>(k) / parts[d]);
            }
        }
        for (double xi : inserts) out = insert_knot(out, d, xi);
    }
    return out;
}

NurbsPatch elevate_degree(const NurbsPatch& patch, int dir) {
    if (dir != 0 && dir != 1) throw DomainError("elevate_degree: direction must be 0 or 1");
    const KnotVector& kv = patch.knots(dir);
    const int p = kv.degree();
    if (kv.num_basis() != p + 1) throw DomainError("elevate_degree: only single-span directions are supported");
    const int n1 = patch.num_points(0);
    const int n2 = patch.num_points(1);
    const int new1 = dir == 0 ? n1 + 1 : n1;
    const int new2 = dir == 1 ? n2 + 1 : n2;
    std::vector<Vec3> pts(static_cast<std::size_t>(new1) * new2);
    std::vector<double> wts(pts.size());
    const int lines = dir == 0 ? n2 : n1;
    for (int line = 0; line < lines; ++line) {
        std::vector<Vec4> P(p + 1);
        for (int k = 0; k <= p; ++k) {
            const int idx = dir == 0 ? patch.point_index(k, line) : patch.point_index(line, k);
            const double w = patch.weights()[idx];
            P[k] << w * patch.points()[idx], w;
        }
        for (int k = 0; k <= p + 1; ++k) {
            const double a = static_cast<double>(k) / (p + 1);
            Vec4 Q = Vec4::Zero();
            if (k > 0) Q += a * P[k - 1];
            if (k <= p) Q += (1.0 - a) * P[k];
            const int idx = dir == 0 ? k + new1 * line : line + new1 * k;
            wts[idx] = Q[3];
            pts[idx] = Q.head<3>() / Q[3];
        }
    }
    std::vector<double> knots(p + 2, kv.front());
    knots.insert(knots.end(), p + 2, kv.back());
    KnotVector elevated(p + 1, std::move(knots));
    if (dir == 0) {
        return NurbsPatch(elevated, patch.knots(1), std::move(pts), std::move(wts), patch.thickness());
    }
    return NurbsPatch(patch.knots(0), elevated, std::move(pts), std::move(wts), patch.thickness());
}

}  // namespace igashell::splines
