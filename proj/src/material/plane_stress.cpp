#include "igashell/material.hpp"

#include <cmath>
#include <sstream>

namespace igashell::material {

namespace {

Mat3 right_cauchy_green(const Voigt3& e, double c33) {
    Mat3 C = Mat3::Zero();
    C(0, 0) = 1.0 + 2.0 * e[0];
    C(1, 1) = 1.0 + 2.0 * e[1];
    C(0, 1) = C(1, 0) = e[2];
    C(2, 2) = c33;
    return C;
}

}  // namespace

CondensedModuli plane_stress_enforce(const Material& material, const Voigt3& strain,
                                     const PlasticHistory& history, double c33_init,
                                     const PlaneStressOptions& opt) {
    if (!(c33_init > 0.0)) throw DomainError("plane stress: initial thickness stretch must be positive");
    const double tol_abs = opt.tol_abs_factor * material.modulus();
    double c33 = c33_init;
    bool clamped = false;
    int iterations = 0;
    while (true) {
        const PointResponse r = material.evaluate(right_cauchy_green(strain, c33), history);
        ++iterations;
        const double s33 = r.S(2, 2);
        const Mat6 D = to_voigt(r.tangent);
        const double step = -2.0 * s33 / D(2, 2);
        if (std::abs(s33) <= tol_abs + opt.tol_rel * r.S.norm() && std::abs(step) <= opt.step_tol * c33) {
            CondensedModuli out;
            static constexpr int in[3] = {0, 1, 3};
            for (int a = 0; a < 3; ++a) {
                for (int b = 0; b < 3; ++b) out.C(a, b) = D(in[a], in[b]) - D(in[a], 2) * D(2, in[b]) / D(2, 2);
            }
            out.S = Voigt3(r.S(0, 0), r.S(1, 1), r.S(0, 1));
            out.c33 = c33;
            out.lambda3 = std::sqrt(c33);
            out.s33 = s33;
            out.iterations = iterations;
            out.history = r.history;
            out.plastic = r.plastic;
            return out;
        }
        if (iterations >= opt.max_iterations) {
            std::ostringstream msg;
            msg << "plane stress: thickness iteration did not converge in " << opt.max_iterations
                << " iterations (|S33| = " << std::abs(s33) << ", |S| = " << r.S.norm() << ", last step " << step
                << ")";
            throw MaterialError(msg.str());
        }
        c33 += step;
        if (!(c33 > 0.0)) {
            if (clamped) throw MaterialError("plane stress: thickness stretch became nonpositive");
            clamped = true;
            c33 = 1e-6;
        }
    }
}

}  // namespace igashell::material
