#pragma once

// Mid-surface differential geometry and Kirchhoff-Love strain measures.
//
// Conventions: strain-like Voigt vectors are [11, 22, 2*12]; curvature
// coefficients follow b_ab = 1/2 (a_a . a3,b + a_b . a3,a) = -a_a,b . a3, so the
// through-thickness Green-Lagrange strain is E_ab = eps_ab + xi3 * kappa_ab with
// kappa = b - B. Degrees of freedom of an element are ordered 3*a + i
// (control point a, component i).

#include "igashell/common.hpp"
#include "igashell/splines.hpp"

#include <array>
#include <span>

namespace igashell::kinematics {

/// Geometry of one configuration at one parametric point.
struct SurfaceGeometry {
    std::array<Vec3, 2> a;          ///< covariant tangent vectors
    std::array<Vec3, 3> da;         ///< a_{1,1}, a_{2,2}, a_{1,2}
    Vec3 a3;                        ///< unit normal
    std::array<Vec3, 2> da3;        ///< a3_{,1}, a3_{,2}
    double jacobian = 0.0;          ///< |a1 x a2|
    Mat2 metric;                    ///< a_ab
    Mat2 metric_inv;                ///< a^ab
    std::array<Vec3, 2> contra;     ///< a^1, a^2
    Mat2 curvature;                 ///< b_ab
};

/// Reference and deformed geometry at the same parametric point.
struct MidsurfaceState {
    SurfaceGeometry reference;
    SurfaceGeometry deformed;
};

/// Throws DegenerateGeometryError when |a1 x a2| < 1e-14 |a1||a2|.
SurfaceGeometry surface_geometry(const splines::BasisEvaluation& basis,
                                 std::span<const Vec3> positions);

MidsurfaceState configure(const splines::BasisEvaluation& basis, std::span<const Vec3> reference,
                          std::span<const Vec3> displacements);

/// Orthonormal frame E1 || G1, E3 = G3, built from the reference configuration.
struct LocalFrame {
    std::array<Vec3, 3> e;
    /// Maps curvilinear strain Voigt components onto the local Cartesian ones.
    Voigt3x3 strain_transform;
};

LocalFrame local_frame(const SurfaceGeometry& reference);

/// Covariant tensor components (curvilinear) to local Cartesian components.
Mat2 to_local(const Mat2& covariant, const SurfaceGeometry& reference, const LocalFrame& frame);
/// Inverse of to_local.
Mat2 from_local(const Mat2& local, const SurfaceGeometry& reference, const LocalFrame& frame);

struct StrainMeasures {
    Voigt3 membrane;   ///< eps
    Voigt3 bending;    ///< kappa
};

/// Curvilinear covariant components.
StrainMeasures curvilinear_strains(const MidsurfaceState& state);

/// Same quantities from the displacement field, without subtracting reference
/// from deformed metric and curvature. Accurate when |u| << |x|.
StrainMeasures curvilinear_strains(const splines::BasisEvaluation& basis, const SurfaceGeometry& reference,
                                   std::span<const Vec3> displacements);

/// Local Cartesian components.
StrainMeasures strains(const MidsurfaceState& state, const LocalFrame& frame);

/// First variations w.r.t. element dofs, curvilinear Voigt components (3 x ndof).
struct FirstVariations {
    MatX membrane;
    MatX bending;
};

FirstVariations first_variations(const splines::BasisEvaluation& basis,
                                 const SurfaceGeometry& deformed);

/// sum_k w_k d2(eps_k)/du_r du_s; independent of the configuration.
MatX membrane_second_variation(const splines::BasisEvaluation& basis, const Voigt3& weights);

/// sum_k w_k d2(kappa_k)/du_r du_s at the deformed configuration.
MatX bending_second_variation(const splines::BasisEvaluation& basis,
                              const SurfaceGeometry& deformed, const Voigt3& weights);

struct StrainVariations {
    FirstVariations first;
    std::array<MatX, 3> membrane_second;
    std::array<MatX, 3> bending_second;
};

/// All four variation arrays, curvilinear Voigt components.
StrainVariations strain_variations(const splines::BasisEvaluation& basis,
                                   const SurfaceGeometry& deformed);

/// Deformation gradient of a shell layer. Components refer to the deformed local
/// frame on the left and the reference local frame on the right, so F_33 = lambda3.
struct LayerState {
    double xi3 = 0.0;
    Mat3 F = Mat3::Identity();
    double lambda3 = 1.0;
    double J = 1.0;
};

/// F = g_a(xi3) (x) G^a(xi3) + lambda3 g3 (x) G3 with g_a(xi3) = g_a + xi3 g3_{,a}.
LayerState layer_deformation_gradient(const MidsurfaceState& state, const LocalFrame& frame,
                                      double xi3, double lambda3);

/// Right Cauchy-Green tensor of a layer from local membrane and bending strains:
/// C_ab = delta_ab + 2 (eps_ab + xi3 kappa_ab), C_a3 = 0, C_33 = c33.
Mat3 layer_right_cauchy_green(const StrainMeasures& local, double xi3, double c33);

}  // namespace igashell::kinematics
