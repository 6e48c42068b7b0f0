#include "igashell/kinematics.hpp"

#include <cmath>

namespace igashell::kinematics {

namespace {

Vec3 unit(int i) { return Vec3::Unit(i); }

// Coefficient of the Voigt shear entry (engineering strain doubles 12).
constexpr std::array<double, 3> kVoigtFactor{1.0, 1.0, 2.0};

}  // namespace

SurfaceGeometry surface_geometry(const splines::BasisEvaluation& basis, std::span<const Vec3> x) {
    const auto n = basis.size();
    SurfaceGeometry g;
    g.a = {Vec3::Zero(), Vec3::Zero()};
    g.da = {Vec3::Zero(), Vec3::Zero(), Vec3::Zero()};
    for (Eigen::Index k = 0; k < n; ++k) {
        g.a[0] += basis.d1(k, 0) * x[k];
        g.a[1] += basis.d1(k, 1) * x[k];
        for (int c = 0; c < 3; ++c) g.da[c] += basis.d2(k, c) * x[k];
    }
    const Vec3 cross = g.a[0].cross(g.a[1]);
    g.jacobian = cross.norm();
    if (!(g.jacobian >= 1e-14 * g.a[0].norm() * g.a[1].norm()) || g.jacobian == 0.0) {
        throw DegenerateGeometryError("degenerate surface: tangent vectors are (nearly) parallel");
    }
    g.a3 = cross / g.jacobian;

    // Normal derivatives: a3_{,b} = (I - a3 a3^T) (a1 x a2)_{,b} / j
    const std::array<Vec3, 2> a1d{g.da[0], g.da[2]};   // a1_{,1}, a1_{,2}
    const std::array<Vec3, 2> a2d{g.da[2], g.da[1]};   // a2_{,1}, a2_{,2}
    for (int b = 0; b < 2; ++b) {
        const Vec3 dc = a1d[b].cross(g.a[1]) + g.a[0].cross(a2d[b]);
        g.da3[b] = (dc - g.a3 * g.a3.dot(dc)) / g.jacobian;
    }

    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) g.metric(i, j) = g.a[i].dot(g.a[j]);
    g.metric_inv = g.metric.inverse();
    for (int i = 0; i < 2; ++i) g.contra[i] = g.metric_inv(i, 0) * g.a[0] + g.metric_inv(i, 1) * g.a[1];
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            g.curvature(i, j) = 0.5 * (g.a[i].dot(g.da3[j]) + g.a[j].dot(g.da3[i]));
    return g;
}

MidsurfaceState configure(const splines::BasisEvaluation& basis, std::span<const Vec3> reference,
                          std::span<const Vec3> displacements) {
    std::vector<Vec3> current(reference.size());
    for (std::size_t k = 0; k < reference.size(); ++k) current[k] = reference[k] + displacements[k];
    return {surface_geometry(basis, reference), surface_geometry(basis, current)};
}

LocalFrame local_frame(const SurfaceGeometry& ref) {
    LocalFrame f;
    f.e[0] = ref.a[0].normalized();
    const Vec3 t = ref.a[1] - ref.a[1].dot(f.e[0]) * f.e[0];
    f.e[1] = t.normalized();
    f.e[2] = ref.a3;

    // ebar_gd = eps_ab (E_g . G^a)(G^b . E_d)
    Mat2 c;
    for (int g = 0; g < 2; ++g)
        for (int a = 0; a < 2; ++a) c(g, a) = f.e[g].dot(ref.contra[a]);
    auto& T = f.strain_transform;
    T(0, 0) = c(0, 0) * c(0, 0);
    T(0, 1) = c(0, 1) * c(0, 1);
    T(0, 2) = c(0, 0) * c(0, 1);
    T(1, 0) = c(1, 0) * c(1, 0);
    T(1, 1) = c(1, 1) * c(1, 1);
    T(1, 2) = c(1, 0) * c(1, 1);
    T(2, 0) = 2.0 * c(0, 0) * c(1, 0);
    T(2, 1) = 2.0 * c(0, 1) * c(1, 1);
    T(2, 2) = c(0, 0) * c(1, 1) + c(0, 1) * c(1, 0);
    return f;
}

Mat2 to_local(const Mat2& cov, const SurfaceGeometry& ref, const LocalFrame& frame) {
    Mat2 c;
    for (int g = 0; g < 2; ++g)
        for (int a = 0; a < 2; ++a) c(g, a) = frame.e[g].dot(ref.contra[a]);
    return c * cov * c.transpose();
}

Mat2 from_local(const Mat2& local, const SurfaceGeometry& ref, const LocalFrame& frame) {
    Mat2 c;
    for (int a = 0; a < 2; ++a)
        for (int g = 0; g < 2; ++g) c(a, g) = ref.a[a].dot(frame.e[g]);
    return c * local * c.transpose();
}

StrainMeasures curvilinear_strains(const MidsurfaceState& s) {
    const Mat2 eps = 0.5 * (s.deformed.metric - s.reference.metric);
    const Mat2 kap = s.deformed.curvature - s.reference.curvature;
    StrainMeasures m;
    m.membrane = Voigt3(eps(0, 0), eps(1, 1), eps(0, 1) + eps(1, 0));
    m.bending = Voigt3(kap(0, 0), kap(1, 1), kap(0, 1) + kap(1, 0));
    return m;
}

StrainMeasures curvilinear_strains(const splines::BasisEvaluation& basis, const SurfaceGeometry& ref,
                                   std::span<const Vec3> u) {
    std::array<Vec3, 2> du{Vec3::Zero(), Vec3::Zero()};
    std::array<Vec3, 3> ddu{Vec3::Zero(), Vec3::Zero(), Vec3::Zero()};
    for (Eigen::Index k = 0; k < basis.size(); ++k) {
        du[0] += basis.d1(k, 0) * u[k];
        du[1] += basis.d1(k, 1) * u[k];
        for (int c = 0; c < 3; ++c) ddu[c] += basis.d2(k, c) * u[k];
    }
    // a1 x a2 = A1 x A2 + dc; a3 - A3 is formed from dc alone.
    const Vec3 dc = ref.a[0].cross(du[1]) + du[0].cross(ref.a[1]) + du[0].cross(du[1]);
    const Vec3 C = ref.a[0].cross(ref.a[1]);
    const double j = (C + dc).norm();
    const double dj = (2.0 * C.dot(dc) + dc.squaredNorm()) / (j + ref.jacobian);
    const Vec3 a3 = (C + dc) / j;
    const Vec3 da3 = dc / j - ref.a3 * (dj / j);

    auto eps = [&](int a, int b) { return 0.5 * (ref.a[a].dot(du[b]) + du[a].dot(ref.a[b]) + du[a].dot(du[b])); };
    StrainMeasures m;
    m.membrane = Voigt3(eps(0, 0), eps(1, 1), 2.0 * eps(0, 1));
    for (int c = 0; c < 3; ++c) m.bending[c] = -kVoigtFactor[c] * (ddu[c].dot(a3) + ref.da[c].dot(da3));
    return m;
}

StrainMeasures strains(const MidsurfaceState& s, const LocalFrame& frame) {
    const StrainMeasures c = curvilinear_strains(s);
    return {frame.strain_transform * c.membrane, frame.strain_transform * c.bending};
}

FirstVariations first_variations(const splines::BasisEvaluation& basis, const SurfaceGeometry& g) {
    const auto n = basis.size();
    const auto ndof = 3 * n;
    FirstVariations v{MatX::Zero(3, ndof), MatX::Zero(3, ndof)};
    for (Eigen::Index k = 0; k < n; ++k) {
        const double n1 = basis.d1(k, 0);
        const double n2 = basis.d1(k, 1);
        for (int i = 0; i < 3; ++i) {
            const auto r = 3 * k + i;
            v.membrane(0, r) = n1 * g.a[0][i];
            v.membrane(1, r) = n2 * g.a[1][i];
            v.membrane(2, r) = n1 * g.a[1][i] + n2 * g.a[0][i];

            const Vec3 dc = n1 * unit(i).cross(g.a[1]) + n2 * g.a[0].cross(unit(i));
            const Vec3 da3 = (dc - g.a3 * g.a3.dot(dc)) / g.jacobian;
            for (int c = 0; c < 3; ++c) {
                v.bending(c, r) =
                    -kVoigtFactor[c] * (basis.d2(k, c) * g.a3[i] + g.da[c].dot(da3));
            }
        }
    }
    return v;
}

MatX membrane_second_variation(const splines::BasisEvaluation& basis, const Voigt3& w) {
    const auto n = basis.size();
    MatX out = MatX::Zero(3 * n, 3 * n);
    for (Eigen::Index a = 0; a < n; ++a) {
        for (Eigen::Index b = 0; b < n; ++b) {
            const double v = w[0] * basis.d1(a, 0) * basis.d1(b, 0) +
                             w[1] * basis.d1(a, 1) * basis.d1(b, 1) +
                             w[2] * (basis.d1(a, 0) * basis.d1(b, 1) + basis.d1(a, 1) * basis.d1(b, 0));
            for (int i = 0; i < 3; ++i) out(3 * a + i, 3 * b + i) = v;
        }
    }
    return out;
}

MatX bending_second_variation(const splines::BasisEvaluation& basis, const SurfaceGeometry& g,
                              const Voigt3& w) {
    const auto n = basis.size();
    const auto ndof = 3 * n;
    const double j = g.jacobian;

    // v = sum_k w_k c_k a_k ; h_a = sum_k w_k c_k N_a,k
    Vec3 v = Vec3::Zero();
    for (int c = 0; c < 3; ++c) v += w[c] * kVoigtFactor[c] * g.da[c];
    const double va3 = v.dot(g.a3);
    VecX h(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        h[k] = 0.0;
        for (int c = 0; c < 3; ++c) h[k] += w[c] * kVoigtFactor[c] * basis.d2(k, c);
    }

    // Per-dof quantities of the unnormalized normal.
    std::vector<Vec3> dc(ndof), da3(ndof);
    VecX dj(ndof), vdc(ndof);
    for (Eigen::Index k = 0; k < n; ++k) {
        for (int i = 0; i < 3; ++i) {
            const auto r = 3 * k + i;
            dc[r] = basis.d1(k, 0) * unit(i).cross(g.a[1]) + basis.d1(k, 1) * g.a[0].cross(unit(i));
            dj[r] = g.a3.dot(dc[r]);
            da3[r] = (dc[r] - g.a3 * dj[r]) / j;
            vdc[r] = v.dot(dc[r]);
        }
    }

    MatX out(ndof, ndof);
    for (Eigen::Index ka = 0; ka < n; ++ka) {
        for (Eigen::Index kb = 0; kb < n; ++kb) {
            const double cross_coef = basis.d1(ka, 0) * basis.d1(kb, 1) - basis.d1(kb, 0) * basis.d1(ka, 1);
            for (int i = 0; i < 3; ++i) {
                const auto r = 3 * ka + i;
                for (int jj = 0; jj < 3; ++jj) {
                    const auto s = 3 * kb + jj;
                    // (a1 x a2)_{,rs} = cross_coef * (e_i x e_j)
                    double v_dcc = 0.0;
                    double a3_dcc = 0.0;
                    if (i != jj) {
                        const int k3 = 3 - i - jj;
                        const double sign = ((jj - i + 3) % 3 == 1) ? 1.0 : -1.0;
                        v_dcc = cross_coef * sign * v[k3];
                        a3_dcc = cross_coef * sign * g.a3[k3];
                    }
                    const double v_a3rs = (v_dcc - va3 * a3_dcc) / j - vdc[r] * dj[s] / (j * j) -
                                          vdc[s] * dj[r] / (j * j) - va3 * da3[s].dot(dc[r]) / j +
                                          2.0 * va3 * dj[r] * dj[s] / (j * j);
                    out(r, s) = -(h[ka] * da3[s][i] + h[kb] * da3[r][jj] + v_a3rs);
                }
            }
        }
    }
    return out;
}

StrainVariations strain_variations(const splines::BasisEvaluation& basis, const SurfaceGeometry& deformed) {
    StrainVariations out;
    out.first = first_variations(basis, deformed);
    for (int c = 0; c < 3; ++c) {
        out.membrane_second[c] = membrane_second_variation(basis, Voigt3::Unit(c));
        out.bending_second[c] = bending_second_variation(basis, deformed, Voigt3::Unit(c));
    }
    return out;
}

LayerState layer_deformation_gradient(const MidsurfaceState& s, const LocalFrame& frame, double xi3,
                                      double lambda3) {
    if (!(lambda3 > 0.0)) throw DomainError("layer_deformation_gradient: thickness stretch must be positive");
    const auto& R = s.reference;
    const auto& D = s.deformed;
    std::array<Vec3, 2> G, g;
    for (int a = 0; a < 2; ++a) {
        G[a] = R.a[a] + xi3 * R.da3[a];
        g[a] = D.a[a] + xi3 * D.da3[a];
    }
    Mat2 M;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) M(a, b) = G[a].dot(G[b]);
    const Mat2 Minv = M.inverse();
    std::array<Vec3, 2> Gc;
    for (int a = 0; a < 2; ++a) Gc[a] = Minv(a, 0) * G[0] + Minv(a, 1) * G[1];

    const Mat3 F = g[0] * Gc[0].transpose() + g[1] * Gc[1].transpose() + lambda3 * D.a3 * R.a3.transpose();
    // Two-point components: deformed frame on the left, reference frame on the right.
    const LocalFrame current = local_frame(D);
    Mat3 E, e;
    for (int i = 0; i < 3; ++i) {
        E.col(i) = frame.e[i];
        e.col(i) = current.e[i];
    }
    LayerState out;
    out.xi3 = xi3;
    out.F = e.transpose() * F * E;
    out.lambda3 = lambda3;
    out.J = out.F.determinant();
    if (!(out.J > 0.0)) throw DomainError("layer_deformation_gradient: inverted configuration (J <= 0)");
    return out;
}

Mat3 layer_right_cauchy_green(const StrainMeasures& local, double xi3, double c33) {
    const Voigt3 e = local.membrane + xi3 * local.bending;
    Mat3 C = Mat3::Zero();
    C(0, 0) = 1.0 + 2.0 * e[0];
    C(1, 1) = 1.0 + 2.0 * e[1];
    C(0, 1) = C(1, 0) = e[2];   // 2 * (engineering / 2)
    C(2, 2) = c33;
    return C;
}

}  // namespace igashell::kinematics
