#include "igashell/element.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace igashell::element {

using kinematics::StrainMeasures;

GaussRule gauss_legendre(int n) {
    if (n < 1) throw DomainError("gauss_legendre: need at least one point");
    GaussRule r;
    r.points.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        r.points[n - 1 - i] = x;
        r.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
}

std::vector<QuadraturePoint> element_quadrature(const splines::NurbsPatch& patch, int e, int n1, int n2) {
    const auto& el = patch.elements()[e];
    const GaussRule g1 = gauss_legendre(n1);
    const GaussRule g2 = gauss_legendre(n2);
    const double h1 = el.upper[0] - el.lower[0];
    const double h2 = el.upper[1] - el.lower[1];
    std::vector<Vec3> X;
    for (int id : el.connectivity) X.push_back(patch.points()[id]);
    std::vector<QuadraturePoint> out;
    out.reserve(n1 * n2);
    for (int j = 0; j < n2; ++j) {
        for (int i = 0; i < n1; ++i) {
            QuadraturePoint q;
            q.xi = Vec2(el.lower[0] + 0.5 * (1.0 + g1.points[i]) * h1, el.lower[1] + 0.5 * (1.0 + g2.points[j]) * h2);
            q.basis = splines::nurbs_basis_eval(patch, e, q.xi);
            q.reference = kinematics::surface_geometry(q.basis, X);
            q.frame = kinematics::local_frame(q.reference);
            q.weight = g1.weights[i] * g2.weights[j] * 0.25 * h1 * h2 * q.reference.jacobian;
            out.push_back(std::move(q));
        }
    }
    return out;
}

ShellElement make_shell_element(const splines::NurbsPatch& patch, int patch_id, int e, int thickness_points) {
    ShellElement s;
    s.patch = patch_id;
    s.element = e;
    s.connectivity = patch.elements()[e].connectivity;
    for (int id : s.connectivity) s.reference.push_back(patch.points()[id]);
    s.thickness = patch.thickness();
    s.points = element_quadrature(patch, e, patch.degree(0) + 1, patch.degree(1) + 1);
    s.thickness_rule = gauss_legendre(thickness_points);
    return s;
}

StressResultants thickness_integrate(const StrainMeasures& local, double t, const GaussRule& rule,
                                     const material::Material& material, std::span<const PointHistory> history,
                                     std::span<PointHistory> updated) {
    StressResultants r;
    const bool elastic = !material.inelastic();
    for (std::size_t k = 0; k < rule.points.size(); ++k) {
        const double z = 0.5 * t * rule.points[k];
        const double w = 0.5 * t * rule.weights[k];
        const Voigt3 E = local.membrane + z * local.bending;
        material::CondensedModuli cm;
        try {
            cm = material::plane_stress_enforce(material, E, history[k].plastic, history[k].c33);
        } catch (const MaterialError& err) {
            std::ostringstream msg;
            msg << err.what() << " [thickness point " << k << "]";
            throw MaterialError(msg.str());
        }
        r.n += w * cm.S;
        r.m += w * z * cm.S;
        r.D0 += w * cm.C;
        r.D1 += w * z * cm.C;
        r.D2 += w * z * z * cm.C;
        if (cm.plastic) ++r.plastic_points;
        if (elastic) {
            const Mat3 C = kinematics::layer_right_cauchy_green(StrainMeasures{E, Voigt3::Zero()}, 0.0, cm.c33);
            r.energy += w * material.energy(C, history[k].plastic);
        }
        updated[k] = PointHistory{cm.history, cm.c33};
    }
    return r;
}

ElementResult evaluate_element(const ShellElement& el, const material::Material& material,
                               std::span<const Vec3> u, std::span<const PointHistory> history, bool want_tangent) {
    const int ndof = el.num_dofs();
    const std::size_t ntp = el.thickness_rule.points.size();
    ElementResult out;
    out.residual = VecX::Zero(ndof);
    if (want_tangent) out.tangent = MatX::Zero(ndof, ndof);
    out.history.resize(el.history_size());

    std::vector<Vec3> x(el.reference.size());
    for (std::size_t k = 0; k < x.size(); ++k) x[k] = el.reference[k] + u[k];

    for (std::size_t g = 0; g < el.points.size(); ++g) {
        const QuadraturePoint& q = el.points[g];
        const kinematics::MidsurfaceState state{q.reference, kinematics::surface_geometry(q.basis, x)};
        const StrainMeasures curv = kinematics::curvilinear_strains(q.basis, q.reference, u);
        const Voigt3x3& T = q.frame.strain_transform;
        const StrainMeasures local{T * curv.membrane, T * curv.bending};

        StressResultants res;
        try {
            res = thickness_integrate(local, el.thickness, el.thickness_rule, material,
                                      history.subspan(g * ntp, ntp),
                                      std::span<PointHistory>(out.history).subspan(g * ntp, ntp));
        } catch (const MaterialError& err) {
            std::ostringstream msg;
            msg << err.what() << " [patch " << el.patch << ", element " << el.element << ", point " << g << "]";
            throw MaterialError(msg.str());
        }
        out.energy += q.weight * res.energy;
        out.plastic_points += res.plastic_points;

        const Voigt3 n = T.transpose() * res.n;
        const Voigt3 m = T.transpose() * res.m;
        const kinematics::FirstVariations dv = kinematics::first_variations(q.basis, state.deformed);
        out.residual.noalias() += q.weight * (dv.membrane.transpose() * n + dv.bending.transpose() * m);

        if (want_tangent) {
            const Voigt3x3 D0 = T.transpose() * res.D0 * T;
            const Voigt3x3 D1 = T.transpose() * res.D1 * T;
            const Voigt3x3 D2 = T.transpose() * res.D2 * T;
            const MatX de = D0 * dv.membrane + D1 * dv.bending;
            const MatX dk = D1 * dv.membrane + D2 * dv.bending;
            out.tangent.noalias() += q.weight * (dv.membrane.transpose() * de + dv.bending.transpose() * dk);
            out.tangent.noalias() += q.weight * (kinematics::membrane_second_variation(q.basis, n) +
                                                 kinematics::bending_second_variation(q.basis, state.deformed, m));
        }
    }
    return out;
}

VecX element_internal_force(const ShellElement& el, const material::Material& material, std::span<const Vec3> u,
                            std::span<const PointHistory> history) {
    return evaluate_element(el, material, u, history, false).residual;
}

MatX element_tangent(const ShellElement& el, const material::Material& material, std::span<const Vec3> u,
                     std::span<const PointHistory> history) {
    return evaluate_element(el, material, u, history, true).tangent;
}

}  // namespace igashell::element
