#pragma once

// Three-dimensional constitutive models and plane-stress condensation.
//
// Stresses returned to the shell element are second Piola-Kirchhoff stresses S
// with the material tangent C = 2 dS/dC (Green-Lagrange pairing). Fourth-order
// tensors are stored as 9x9 matrices indexed (3i+j, 3k+l).

#include "igashell/common.hpp"

#include <memory>
#include <string>

namespace igashell::material {

using Tensor4 = Eigen::Matrix<double, 9, 9>;

inline int pair(int i, int j) { return 3 * i + j; }

/// Symmetric fourth-order identity: 1/2 (d_ik d_jl + d_il d_jk).
Tensor4 symmetric_identity();
/// A (x) B.
Tensor4 outer(const Mat3& A, const Mat3& B);
/// 1/2 (A_ik A_jl + A_il A_jk) for symmetric A.
Tensor4 symmetric_product(const Mat3& A);
/// T:A, i.e. (T:A)_ij = T_ijkl A_kl.
Mat3 contract(const Tensor4& T, const Mat3& A);
/// Pull back Kirchhoff moduli with F^{-1} on all four legs.
Tensor4 pull_back(const Tensor4& c, const Mat3& Finv);
/// 6x6 matrix in order [11, 22, 33, 12, 23, 13], acting on engineering strains.
Mat6 to_voigt(const Tensor4& T);

Mat3 deviator(const Mat3& A);

/// Isotropic elastic constants. Neo-Hookean input may be given as a Lame pair.
struct ElasticParams {
    double E = 1.0;
    double nu = 0.0;

    static ElasticParams from_lame(double mu, double lambda);
    double shear() const { return E / (2.0 * (1.0 + nu)); }
    double bulk() const { return E / (3.0 * (1.0 - 2.0 * nu)); }
    double lame() const { return E * nu / ((1.0 + nu) * (1.0 - 2.0 * nu)); }
    void validate() const;
};

/// k(alpha) = sigma_y + H alpha.
struct HardeningLaw {
    double sigma_y = 1.0;
    double H = 0.0;

    double k(double alpha) const { return sigma_y + H * alpha; }
    double slope(double /*alpha*/) const { return H; }
    void validate() const;
};

/// Inverse plastic right Cauchy-Green tensor and equivalent plastic strain.
struct PlasticHistory {
    Mat3 cp_inv = Mat3::Identity();
    double alpha = 0.0;
};

/// Result of one constitutive evaluation at a material point.
struct PointResponse {
    Mat3 S = Mat3::Zero();
    Tensor4 tangent = Tensor4::Zero();
    PlasticHistory history;
    bool plastic = false;
    double dgamma = 0.0;
};

class Material {
public:
    virtual ~Material() = default;
    /// Evaluate at right Cauchy-Green tensor C given the committed history.
    virtual PointResponse evaluate(const Mat3& C, const PlasticHistory& history) const = 0;
    /// Stored energy per reference volume (elastic part for plasticity).
    virtual double energy(const Mat3& C, const PlasticHistory& history) const = 0;
    virtual bool inelastic() const { return false; }
    /// Young's modulus, used to scale tolerances.
    virtual double modulus() const = 0;
    virtual std::string name() const = 0;
};

class StVenantKirchhoff final : public Material {
public:
    explicit StVenantKirchhoff(ElasticParams p);
    PointResponse evaluate(const Mat3& C, const PlasticHistory& history) const override;
    double energy(const Mat3& C, const PlasticHistory& history) const override;
    double modulus() const override { return p_.E; }
    std::string name() const override { return "stvk"; }
    const ElasticParams& params() const { return p_; }

private:
    ElasticParams p_;
};

/// W = mu/2 (tr C - 3) - mu ln J + lambda/4 (J^2 - 1 - 2 ln J).
class NeoHookean final : public Material {
public:
    NeoHookean(double mu, double lambda);
    PointResponse evaluate(const Mat3& C, const PlasticHistory& history) const override;
    double energy(const Mat3& C, const PlasticHistory& history) const override;
    double modulus() const override;
    std::string name() const override { return "neo_hookean"; }
    double mu() const { return mu_; }
    double lambda() const { return lambda_; }

private:
    double mu_;
    double lambda_;
};

/// Spatial response of the multiplicative J2 model (Kirchhoff quantities).
struct MaterialResponse {
    Mat3 tau_vol = Mat3::Zero();
    Mat3 tau_dev = Mat3::Zero();
    Mat3 sigma = Mat3::Zero();
    Tensor4 moduli = Tensor4::Zero();   ///< Kirchhoff moduli c with L_v tau = c : d
    bool plastic = false;
    double dgamma = 0.0;
};

/// Elastic trial state of the return map.
struct TrialState {
    Mat3 F = Mat3::Identity();
    double J = 1.0;
    Mat3 be_bar = Mat3::Identity();
    Mat3 s = Mat3::Zero();        ///< G dev(be_bar)
    double norm_s = 0.0;
    double mu_bar = 0.0;          ///< G tr(be_bar) / 3
    double alpha_n = 0.0;
    double phi = 0.0;
};

TrialState j2_trial(const Mat3& F, const PlasticHistory& history, const ElasticParams& params,
                    const HardeningLaw& hardening);

struct ReturnMapResult {
    MaterialResponse response;
    PlasticHistory history;
    TrialState trial;
    int iterations = 0;
};

ReturnMapResult j2_return_mapping(const Mat3& F, const PlasticHistory& history,
                                  const ElasticParams& params, const HardeningLaw& hardening);

/// Consistent Kirchhoff moduli; dgamma = 0 gives the elastic trial moduli.
Tensor4 consistent_tangent(const TrialState& trial, double dgamma, const ElasticParams& params,
                           const HardeningLaw& hardening);

/// Residual of the scalar return equation at dgamma.
double return_residual(const TrialState& trial, double dgamma, const HardeningLaw& hardening);

class J2Plasticity final : public Material {
public:
    J2Plasticity(ElasticParams p, HardeningLaw h);
    PointResponse evaluate(const Mat3& C, const PlasticHistory& history) const override;
    double energy(const Mat3& C, const PlasticHistory& history) const override;
    bool inelastic() const override { return true; }
    double modulus() const override { return p_.E; }
    std::string name() const override { return "j2"; }
    const ElasticParams& params() const { return p_; }
    const HardeningLaw& hardening() const { return h_; }

private:
    ElasticParams p_;
    HardeningLaw h_;
};

struct PlaneStressOptions {
    double tol_rel = 1e-10;
    double tol_abs_factor = 1e-14;   ///< times the Young's modulus
    int max_iterations = 30;
    double step_tol = 1e-12;         ///< relative size of the next C33 correction
};

/// In-plane response after enforcing S33 = 0.
struct CondensedModuli {
    Voigt3 S = Voigt3::Zero();              ///< S11, S22, S12
    Voigt3x3 C = Voigt3x3::Zero();          ///< condensed tangent, engineering strains
    double lambda3 = 1.0;
    double c33 = 1.0;
    double s33 = 0.0;
    int iterations = 0;
    PlasticHistory history;
    bool plastic = false;
};

/// strain: local in-plane Green-Lagrange strain [E11, E22, 2 E12]. c33_init > 0.
CondensedModuli plane_stress_enforce(const Material& material, const Voigt3& strain,
                                     const PlasticHistory& history, double c33_init,
                                     const PlaneStressOptions& options = {});

}  // namespace igashell::material
