#include "igashell/material.hpp"

#include <cmath>

namespace igashell::material {

Tensor4 symmetric_identity() {
    Tensor4 T = Tensor4::Zero();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            T(pair(i, j), pair(i, j)) += 0.5;
            T(pair(i, j), pair(j, i)) += 0.5;
        }
    return T;
}

Tensor4 outer(const Mat3& A, const Mat3& B) {
    Tensor4 T;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l) T(pair(i, j), pair(k, l)) = A(i, j) * B(k, l);
    return T;
}

Tensor4 symmetric_product(const Mat3& A) {
    Tensor4 T;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l)
                    T(pair(i, j), pair(k, l)) = 0.5 * (A(i, k) * A(j, l) + A(i, l) * A(j, k));
    return T;
}

Mat3 contract(const Tensor4& T, const Mat3& A) {
    Eigen::Matrix<double, 9, 1> a;
    for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) a[pair(k, l)] = A(k, l);
    const Eigen::Matrix<double, 9, 1> r = T * a;
    Mat3 out;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) out(i, j) = r[pair(i, j)];
    return out;
}

Tensor4 pull_back(const Tensor4& c, const Mat3& Finv) {
    Tensor4 A;
    for (int I = 0; I < 3; ++I)
        for (int J = 0; J < 3; ++J)
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) A(pair(I, J), pair(i, j)) = Finv(I, i) * Finv(J, j);
    return A * c * A.transpose();
}

Mat6 to_voigt(const Tensor4& T) {
    static constexpr int idx[6][2] = {{0, 0}, {1, 1}, {2, 2}, {0, 1}, {1, 2}, {0, 2}};
    Mat6 D;
    for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b) D(a, b) = T(pair(idx[a][0], idx[a][1]), pair(idx[b][0], idx[b][1]));
    return D;
}

Mat3 deviator(const Mat3& A) { return A - A.trace() / 3.0 * Mat3::Identity(); }

ElasticParams ElasticParams::from_lame(double mu, double lambda) {
    if (!(mu > 0.0) || !(lambda + 2.0 * mu / 3.0 > 0.0)) {
        throw ValidationError("elastic parameters: Lame constants must give positive shear and bulk moduli");
    }
    ElasticParams p;
    p.E = mu * (3.0 * lambda + 2.0 * mu) / (lambda + mu);
    p.nu = lambda / (2.0 * (lambda + mu));
    return p;
}

void ElasticParams::validate() const {
    if (!(E > 0.0) || !std::isfinite(E)) throw ValidationError("elastic parameters: E must be positive");
    if (!(nu > -1.0 && nu < 0.5)) throw ValidationError("elastic parameters: nu must lie in (-1, 0.5)");
}

void HardeningLaw::validate() const {
    if (!(sigma_y > 0.0) || !std::isfinite(sigma_y)) throw ValidationError("hardening: yield stress must be positive");
    if (!(H >= 0.0) || !std::isfinite(H)) throw ValidationError("hardening: modulus must be nonnegative");
}

StVenantKirchhoff::StVenantKirchhoff(ElasticParams p) : p_(p) { p_.validate(); }

PointResponse StVenantKirchhoff::evaluate(const Mat3& C, const PlasticHistory& history) const {
    const Mat3 E = 0.5 * (C - Mat3::Identity());
    const double lam = p_.lame();
    const double mu = p_.shear();
    PointResponse r;
    r.S = lam * E.trace() * Mat3::Identity() + 2.0 * mu * E;
    r.tangent = lam * outer(Mat3::Identity(), Mat3::Identity()) + 2.0 * mu * symmetric_identity();
    r.history = history;
    return r;
}

double StVenantKirchhoff::energy(const Mat3& C, const PlasticHistory&) const {
    const Mat3 E = 0.5 * (C - Mat3::Identity());
    return 0.5 * p_.lame() * E.trace() * E.trace() + p_.shear() * (E.array() * E.array()).sum();
}

NeoHookean::NeoHookean(double mu, double lambda) : mu_(mu), lambda_(lambda) {
    ElasticParams::from_lame(mu, lambda).validate();
}

double NeoHookean::modulus() const { return ElasticParams::from_lame(mu_, lambda_).E; }

PointResponse NeoHookean::evaluate(const Mat3& C, const PlasticHistory& history) const {
    const double J2 = C.determinant();
    if (!(J2 > 0.0)) throw MaterialError("neo-Hookean: inverted state (det C <= 0)");
    const Mat3 Ci = C.inverse();
    PointResponse r;
    r.S = mu_ * Mat3::Identity() + (0.5 * lambda_ * (J2 - 1.0) - mu_) * Ci;
    r.tangent = lambda_ * J2 * outer(Ci, Ci) + (2.0 * mu_ - lambda_ * (J2 - 1.0)) * symmetric_product(Ci);
    r.history = history;
    return r;
}

double NeoHookean::energy(const Mat3& C, const PlasticHistory&) const {
    const double J2 = C.determinant();
    if (!(J2 > 0.0)) throw MaterialError("neo-Hookean: inverted state (det C <= 0)");
    const double lnJ = 0.5 * std::log(J2);
    return 0.5 * mu_ * (C.trace() - 3.0) - mu_ * lnJ + 0.25 * lambda_ * (J2 - 1.0 - 2.0 * lnJ);
}

}  // namespace igashell::material
