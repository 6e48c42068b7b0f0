#include "igashell/element.hpp"

namespace igashell::element {

namespace {

splines::NurbsPatch strip_patch(const std::array<Vec3, 6>& pts, double thickness) {
    splines::KnotVector along(1, {0, 0, 1, 1});
    splines::KnotVector across(2, {0, 0, 0, 1, 1, 1});
    return splines::NurbsPatch(along, across, std::vector<Vec3>(pts.begin(), pts.end()), std::vector<double>(6, 1.0),
                               thickness);
}

}  // namespace

std::vector<StripElement> make_strip_elements(const BendingStrip& strip, std::span<const Vec3> coords) {
    if (strip.triples.size() < 2) throw ModelError("bending strip: an interface needs at least two control points");
    if (!(strip.modulus > 0.0) || !(strip.thickness > 0.0)) {
        throw ModelError("bending strip: modulus and thickness must be positive");
    }
    std::vector<StripElement> out;
    for (std::size_t k = 0; k + 1 < strip.triples.size(); ++k) {
        StripElement s;
        const StripTriple& t0 = strip.triples[k];
        const StripTriple& t1 = strip.triples[k + 1];
        s.nodes = {t0.a, t1.a, t0.interface, t1.interface, t0.b, t1.b};
        for (int i = 0; i < 6; ++i) s.reference[i] = coords[s.nodes[i]];
        s.modulus = strip.modulus;
        s.thickness = strip.thickness;
        try {
            s.points = element_quadrature(strip_patch(s.reference, strip.thickness), 0, 2, 3);
        } catch (const Error& err) {
            throw ModelError(std::string("bending strip: degenerate strip geometry (") + err.what() + ")");
        }
        out.push_back(std::move(s));
    }
    return out;
}

StripResult strip_stiffness(const StripElement& s, std::span<const Vec3> u, bool want_tangent) {
    StripResult out;
    out.residual = VecX::Zero(18);
    if (want_tangent) out.tangent = MatX::Zero(18, 18);
    std::array<Vec3, 6> x;
    for (int k = 0; k < 6; ++k) x[k] = s.reference[k] + u[k];
    const double D = s.modulus * s.thickness * s.thickness * s.thickness / 12.0;
    for (const QuadraturePoint& q : s.points) {
        const kinematics::SurfaceGeometry cur = kinematics::surface_geometry(q.basis, x);
        const Voigt3 kappa = kinematics::curvilinear_strains(q.basis, q.reference, u).bending;
        const Voigt3 row = q.frame.strain_transform.row(1).transpose();
        const double k22 = row.dot(kappa);
        const double m = D * k22;
        out.energy += q.weight * 0.5 * m * k22;
        const kinematics::FirstVariations dv = kinematics::first_variations(q.basis, cur);
        const VecX dk22 = dv.bending.transpose() * row;
        out.residual.noalias() += q.weight * m * dk22;
        if (want_tangent) {
            out.tangent.noalias() += q.weight * D * dk22 * dk22.transpose();
            out.tangent.noalias() += q.weight * kinematics::bending_second_variation(q.basis, cur, m * row);
        }
    }
    return out;
}

}  // namespace igashell::element
