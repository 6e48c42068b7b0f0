#include "igashell/material.hpp"

#include <algorithm>
#include <cmath>

namespace igashell::material {

namespace {

const double kSqrt23 = std::sqrt(2.0 / 3.0);

// Spherical part that makes det(A + x I) = 1 for traceless A.
double isochoric_shift(const Mat3& A, double x0) {
    const double i2 = -0.5 * (A * A).trace();
    const double i3 = A.determinant();
    double x = x0;
    for (int it = 0; it < 50; ++it) {
        const double f = x * x * x + i2 * x + i3 - 1.0;
        const double df = 3.0 * x * x + i2;
        const double dx = f / df;
        x -= dx;
        if (std::abs(dx) <= 1e-16 * std::abs(x)) break;
    }
    return x;
}

}  // namespace

TrialState j2_trial(const Mat3& F, const PlasticHistory& history, const ElasticParams& params,
                    const HardeningLaw& hardening) {
    TrialState t;
    t.F = F;
    t.J = F.determinant();
    if (!(t.J > 0.0)) throw MaterialError("J2 return map: inverted state (det F <= 0)");
    const Mat3 Fb = std::pow(t.J, -1.0 / 3.0) * F;
    t.be_bar = Fb * history.cp_inv * Fb.transpose();
    t.be_bar = 0.5 * (t.be_bar + t.be_bar.transpose()).eval();
    const double G = params.shear();
    t.s = G * deviator(t.be_bar);
    t.norm_s = t.s.norm();
    t.mu_bar = G * t.be_bar.trace() / 3.0;
    t.alpha_n = history.alpha;
    t.phi = t.norm_s - kSqrt23 * hardening.k(history.alpha);
    return t;
}

double return_residual(const TrialState& t, double dgamma, const HardeningLaw& hardening) {
    return t.norm_s - kSqrt23 * hardening.k(t.alpha_n + kSqrt23 * dgamma) - 2.0 * t.mu_bar * dgamma;
}

Tensor4 consistent_tangent(const TrialState& t, double dgamma, const ElasticParams& params,
                           const HardeningLaw& hardening) {
    const Mat3 I = Mat3::Identity();
    const double K = params.bulk();
    const double J2 = t.J * t.J;
    const Tensor4 one = outer(I, I);
    const Tensor4 II = symmetric_identity();
    const Tensor4 c_vol = K * (J2 * one - (J2 - 1.0) * II);
    const Tensor4 c_bar = 2.0 * t.mu_bar * (II - one / 3.0) - (2.0 / 3.0) * (outer(t.s, I) + outer(I, t.s));
    if (dgamma == 0.0) return c_vol + c_bar;

    const Mat3 n = t.s / t.norm_s;
    const double alpha = t.alpha_n + kSqrt23 * dgamma;
    const double b0 = 1.0 + hardening.slope(alpha) / (3.0 * t.mu_bar);
    const double b1 = 2.0 * t.mu_bar * dgamma / t.norm_s;
    const double b2 = (1.0 - 1.0 / b0) * (2.0 / 3.0) * (t.norm_s / t.mu_bar) * dgamma;
    const double b3 = 1.0 / b0 - b1 + b2;
    const double b4 = (1.0 / b0 - b1) * t.norm_s / t.mu_bar;
    return c_vol + (1.0 - b1) * c_bar - 2.0 * t.mu_bar * b3 * outer(n, n) -
           2.0 * t.mu_bar * b4 * outer(n, deviator(n * n));
}

ReturnMapResult j2_return_mapping(const Mat3& F, const PlasticHistory& history, const ElasticParams& params,
                                  const HardeningLaw& hardening) {
    ReturnMapResult out;
    out.trial = j2_trial(F, history, params, hardening);
    const TrialState& t = out.trial;
    const double K = params.bulk();
    const double G = params.shear();
    MaterialResponse& r = out.response;
    r.tau_vol = 0.5 * K * (t.J * t.J - 1.0) * Mat3::Identity();

    if (t.phi <= 0.0) {
        r.tau_dev = t.s;
        r.sigma = (r.tau_vol + r.tau_dev) / t.J;
        r.moduli = consistent_tangent(t, 0.0, params, hardening);
        out.history = history;
        return out;
    }

    // Newton on the scalar return equation, safeguarded by bisection.
    double lo = 0.0;
    double hi = t.norm_s / (2.0 * t.mu_bar);
    double dg = 0.0;
    double g = return_residual(t, dg, hardening);
    const double tol = 1e-14 * t.norm_s;
    bool converged = false;
    for (int it = 1; it <= 50; ++it) {
        out.iterations = it;
        const double alpha = t.alpha_n + kSqrt23 * dg;
        const double dgdx = -(2.0 / 3.0) * hardening.slope(alpha) - 2.0 * t.mu_bar;
        double next = dg - g / dgdx;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        dg = next;
        g = return_residual(t, dg, hardening);
        if (g > 0.0) lo = dg; else hi = dg;
        if (std::abs(g) <= tol || hi - lo <= 1e-16 * hi) {
            converged = true;
            break;
        }
    }
    if (!converged) throw MaterialError("J2 return map: scalar return equation did not converge in 50 iterations");
    if (dg < 0.0) throw Error("J2 return map: negative plastic multiplier");

    const Mat3 n = t.s / t.norm_s;
    r.tau_dev = t.s - 2.0 * t.mu_bar * dg * n;
    r.sigma = (r.tau_vol + r.tau_dev) / t.J;
    r.plastic = true;
    r.dgamma = dg;
    r.moduli = consistent_tangent(t, dg, params, hardening);

    const Mat3 A = r.tau_dev / G;
    const Mat3 be = A + isochoric_shift(A, t.mu_bar / G) * Mat3::Identity();
    const Mat3 Fb_inv = std::pow(t.J, 1.0 / 3.0) * F.inverse();
    Mat3 cp = Fb_inv * be * Fb_inv.transpose();
    out.history.cp_inv = 0.5 * (cp + cp.transpose());
    out.history.alpha = t.alpha_n + kSqrt23 * dg;
    return out;
}

J2Plasticity::J2Plasticity(ElasticParams p, HardeningLaw h) : p_(p), h_(h) {
    p_.validate();
    h_.validate();
}

namespace {

Mat3 stretch_factor(const Mat3& C) {
    Eigen::LLT<Mat3> llt(C);
    if (llt.info() != Eigen::Success) throw MaterialError("J2: right Cauchy-Green tensor is not positive definite");
    return llt.matrixL().transpose();
}

}  // namespace

PointResponse J2Plasticity::evaluate(const Mat3& C, const PlasticHistory& history) const {
    // Any F with F^T F = C yields the same material response (objectivity).
    const Mat3 F = stretch_factor(C);
    const ReturnMapResult rm = j2_return_mapping(F, history, p_, h_);
    const Mat3 Finv = F.inverse();
    PointResponse out;
    const Mat3 tau = rm.response.tau_vol + rm.response.tau_dev;
    out.S = Finv * tau * Finv.transpose();
    out.S = 0.5 * (out.S + out.S.transpose()).eval();
    out.tangent = pull_back(rm.response.moduli, Finv);
    out.history = rm.history;
    out.plastic = rm.response.plastic;
    out.dgamma = rm.response.dgamma;
    return out;
}

double J2Plasticity::energy(const Mat3& C, const PlasticHistory& history) const {
    const double J2 = C.determinant();
    if (!(J2 > 0.0)) throw MaterialError("J2: inverted state (det C <= 0)");
    const double J = std::sqrt(J2);
    const double vol = 0.5 * p_.bulk() * (0.5 * (J2 - 1.0) - std::log(J));
    const double tr = std::pow(J, -2.0 / 3.0) * (C * history.cp_inv).trace();
    return vol + 0.5 * p_.shear() * (tr - 3.0);
}

}  // namespace igashell::material
