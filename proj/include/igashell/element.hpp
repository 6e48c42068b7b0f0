#pragma once

// Bezier shell elements: thickness integration, internal force, tangent,
// bending strips and consistent external loads.

#include "igashell/common.hpp"
#include "igashell/kinematics.hpp"
#include "igashell/material.hpp"
#include "igashell/splines.hpp"

#include <span>
#include <string>
#include <vector>

namespace igashell::element {

struct GaussRule {
    std::vector<double> points;    ///< on [-1, 1]
    std::vector<double> weights;
};

GaussRule gauss_legendre(int n);

/// Converged material-point state carried between load steps.
struct PointHistory {
    material::PlasticHistory plastic;
    double c33 = 1.0;
};

/// Precomputed reference data at one in-plane quadrature point.
struct QuadraturePoint {
    Vec2 xi;
    splines::BasisEvaluation basis;
    kinematics::SurfaceGeometry reference;
    kinematics::LocalFrame frame;
    double weight = 0.0;    ///< Gauss weight times |G1 x G2| times parametric Jacobian
};

/// Quadrature data on one Bezier element with an n1 x n2 Gauss rule.
std::vector<QuadraturePoint> element_quadrature(const splines::NurbsPatch& patch, int element, int n1, int n2);

struct ShellElement {
    int patch = 0;
    int element = 0;
    std::vector<int> connectivity;       ///< patch-local control point ids
    std::vector<Vec3> reference;         ///< reference control points
    double thickness = 0.0;
    std::vector<QuadraturePoint> points;
    GaussRule thickness_rule;

    int num_dofs() const { return 3 * static_cast<int>(connectivity.size()); }
    std::size_t history_size() const { return points.size() * thickness_rule.points.size(); }
};

/// (p+1) x (q+1) in-plane rule; thickness_points Gauss points through the thickness.
ShellElement make_shell_element(const splines::NurbsPatch& patch, int patch_id, int element, int thickness_points);

/// Stress resultants in local Cartesian components with the integrated moduli blocks.
struct StressResultants {
    Voigt3 n = Voigt3::Zero();
    Voigt3 m = Voigt3::Zero();
    Voigt3x3 D0 = Voigt3x3::Zero();
    Voigt3x3 D1 = Voigt3x3::Zero();
    Voigt3x3 D2 = Voigt3x3::Zero();
    double energy = 0.0;       ///< stored energy per unit reference area
    int plastic_points = 0;
};

StressResultants thickness_integrate(const kinematics::StrainMeasures& local, double thickness,
                                     const GaussRule& rule, const material::Material& material,
                                     std::span<const PointHistory> history, std::span<PointHistory> updated);

struct ElementResult {
    VecX residual;
    MatX tangent;
    double energy = 0.0;
    std::vector<PointHistory> history;   ///< trial history, committed by the caller
    int plastic_points = 0;
};

/// Internal force (and tangent when requested) at element displacements u.
ElementResult evaluate_element(const ShellElement& element, const material::Material& material,
                               std::span<const Vec3> displacements, std::span<const PointHistory> history,
                               bool want_tangent);

VecX element_internal_force(const ShellElement& element, const material::Material& material,
                            std::span<const Vec3> displacements, std::span<const PointHistory> history);

MatX element_tangent(const ShellElement& element, const material::Material& material,
                     std::span<const Vec3> displacements, std::span<const PointHistory> history);

/// Control points of an interface: row in patch A, shared row, row in patch B.
struct StripTriple {
    int a = 0;
    int interface = 0;
    int b = 0;
};

/// Bending strip along one patch interface. Node ids refer to the caller's numbering.
struct BendingStrip {
    std::vector<StripTriple> triples;   ///< ordered along the interface
    double modulus = 0.0;               ///< E_strip
    double thickness = 0.0;
};

/// One strip element: linear along the interface, quadratic across it.
struct StripElement {
    std::array<int, 6> nodes{};         ///< i fastest along, j across (a, interface, b)
    std::array<Vec3, 6> reference;
    std::vector<QuadraturePoint> points;
    double modulus = 0.0;
    double thickness = 0.0;
};

/// Strip elements for a strip whose node coordinates are given by `coords`.
std::vector<StripElement> make_strip_elements(const BendingStrip& strip, std::span<const Vec3> coords);

struct StripResult {
    VecX residual;
    MatX tangent;
    double energy = 0.0;
};

/// Penalty on the curvature change across the interface only.
StripResult strip_stiffness(const StripElement& strip, std::span<const Vec3> displacements, bool want_tangent);

/// Patch edges in parameter space.
enum class Edge { u0, u1, v0, v1 };

Edge parse_edge(const std::string& name);
std::string edge_name(Edge e);

/// Control point ids of the boundary row (layer 0) or rows further inside.
std::vector<int> edge_points(const splines::NurbsPatch& patch, Edge edge, int layer = 0);

/// Consistent nodal forces, one entry per patch control point.
std::vector<Vec3> point_load(const splines::NurbsPatch& patch, const Vec2& xi, const Vec3& force);
/// Force per unit reference length along a parametric edge.
std::vector<Vec3> line_load(const splines::NurbsPatch& patch, Edge edge, const Vec3& force_per_length);
/// Force per unit reference area (gravity, body loads).
std::vector<Vec3> area_load(const splines::NurbsPatch& patch, const Vec3& force_per_area);
/// Dead pressure along the reference normal G3.
std::vector<Vec3> pressure_load(const splines::NurbsPatch& patch, double pressure);

/// Reference length of a parametric edge.
double edge_length(const splines::NurbsPatch& patch, Edge edge);
/// Reference area of a patch.
double patch_area(const splines::NurbsPatch& patch);

}  // namespace igashell::element
