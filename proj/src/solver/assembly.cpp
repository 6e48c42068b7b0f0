#include "igashell/solver.hpp"

#include <sstream>

namespace igashell::solver {

Analysis::Analysis(Model model) : model_(std::move(model)) {
    validate_model(model_);
    dofs_ = merge_interfaces(model_);
    for (const auto& spec : model_.materials) materials_.push_back(make_material(spec));

    for (std::size_t p = 0; p < model_.patches.size(); ++p) {
        const auto& patch = model_.patches[p];
        const auto& mat = *materials_[model_.patch_material[p]];
        const int ntp = model_.thickness_points > 0 ? model_.thickness_points : (mat.inelastic() ? 5 : 3);
        for (std::size_t e = 0; e < patch.num_elements(); ++e) {
            try {
                elements_.push_back(element::make_shell_element(patch, static_cast<int>(p), static_cast<int>(e), ntp));
            } catch (const DegenerateGeometryError& err) {
                throw ModelError("patch " + std::to_string(p) + ", element " + std::to_string(e) + ": " + err.what());
            }
            element_material_.push_back(model_.patch_material[p]);
        }
    }

    if (model_.strips.automatic) strips_ = detect_strips(model_, dofs_);
    for (const auto& es : model_.strips.explicit_strips) {
        element::BendingStrip strip;
        for (const auto& t : es.triples) {
            strip.triples.push_back({dofs_.node[t[0].patch][t[0].point], dofs_.node[t[1].patch][t[1].point],
                                     dofs_.node[t[2].patch][t[2].point]});
        }
        const int pa = es.triples.front()[0].patch;
        const int pb = es.triples.front()[2].patch;
        strip.modulus = model_.strips.modulus_factor *
                        std::max(materials_[model_.patch_material[pa]]->modulus(),
                                 materials_[model_.patch_material[pb]]->modulus());
        strip.thickness = 0.5 * (model_.patches[pa].thickness() + model_.patches[pb].thickness());
        strips_.push_back(std::move(strip));
    }
    for (const auto& s : strips_) {
        auto elems = element::make_strip_elements(s, dofs_.coords);
        strip_elements_.insert(strip_elements_.end(), elems.begin(), elems.end());
    }

    f_ref_ = VecX::Zero(dofs_.num_dofs());
    for (const auto& ld : model_.loads) {
        const auto& patch = model_.patches[ld.patch];
        std::vector<Vec3> f;
        switch (ld.kind) {
            case LoadKind::point: f = element::point_load(patch, ld.xi, ld.vector); break;
            case LoadKind::line: f = element::line_load(patch, ld.edge, ld.vector); break;
            case LoadKind::area: f = element::area_load(patch, ld.vector); break;
            case LoadKind::pressure: f = element::pressure_load(patch, ld.pressure); break;
        }
        for (std::size_t k = 0; k < f.size(); ++k) f_ref_.segment<3>(3 * dofs_.node[ld.patch][k]) += f[k];
    }
}

State Analysis::initial_state() const {
    State s;
    s.u = VecX::Zero(dofs_.num_dofs());
    s.history.reserve(elements_.size());
    for (const auto& el : elements_) s.history.emplace_back(el.history_size());
    return s;
}

std::vector<Vec3> Analysis::element_displacements(const State& state, int e) const {
    const auto& el = elements_[e];
    std::vector<Vec3> u(el.connectivity.size());
    for (std::size_t a = 0; a < u.size(); ++a) u[a] = state.u.segment<3>(3 * dofs_.node[el.patch][el.connectivity[a]]);
    return u;
}

Assembly Analysis::assemble(const State& state, double lambda, bool want_tangent) const {
    Assembly out;
    const int N = dofs_.num_dofs();
    out.internal = VecX::Zero(N);
    out.trial.resize(elements_.size());
    std::vector<Eigen::Triplet<double>> triplets;
    std::vector<std::string> failures;
    std::size_t failure_count = 0;

    auto scatter = [&](const std::vector<int>& nodes, const VecX& r, const MatX* K) {
        const int n = static_cast<int>(nodes.size());
        for (int a = 0; a < n; ++a) out.internal.segment<3>(3 * nodes[a]) += r.segment<3>(3 * a);
        if (!K) return;
        for (int a = 0; a < n; ++a) {
            for (int i = 0; i < 3; ++i) {
                const int row = dofs_.equation[3 * nodes[a] + i];
                if (row < 0) continue;
                for (int b = 0; b < n; ++b) {
                    for (int j = 0; j < 3; ++j) {
                        const int col = dofs_.equation[3 * nodes[b] + j];
                        if (col >= 0) triplets.emplace_back(row, col, (*K)(3 * a + i, 3 * b + j));
                    }
                }
            }
        }
    };

    std::vector<int> nodes;
    for (std::size_t e = 0; e < elements_.size(); ++e) {
        const auto& el = elements_[e];
        nodes.clear();
        for (int id : el.connectivity) nodes.push_back(dofs_.node[el.patch][id]);
        try {
            auto r = element::evaluate_element(el, material(static_cast<int>(e)), element_displacements(state, static_cast<int>(e)),
                                               state.history[e], want_tangent);
            scatter(nodes, r.residual, want_tangent ? &r.tangent : nullptr);
            out.energy += r.energy;
            out.plastic_points += r.plastic_points;
            out.trial[e] = std::move(r.history);
        } catch (const MaterialError& err) {
            if (failures.size() < 5) failures.push_back(err.what());
            ++failure_count;
        } catch (const DegenerateGeometryError& err) {
            if (failures.size() < 5) {
                failures.push_back(std::string(err.what()) + " [patch " + std::to_string(el.patch) + ", element " +
                                   std::to_string(el.element) + "]");
            }
            ++failure_count;
        }
    }
    for (std::size_t s = 0; s < strip_elements_.size(); ++s) {
        const auto& st = strip_elements_[s];
        std::vector<Vec3> u(6);
        for (int i = 0; i < 6; ++i) u[i] = state.u.segment<3>(3 * st.nodes[i]);
        nodes.assign(st.nodes.begin(), st.nodes.end());
        try {
            const auto r = element::strip_stiffness(st, u, want_tangent);
            scatter(nodes, r.residual, want_tangent ? &r.tangent : nullptr);
            out.energy += r.energy;
        } catch (const DegenerateGeometryError& err) {
            if (failures.size() < 5) failures.push_back(std::string(err.what()) + " [strip element " + std::to_string(s) + "]");
            ++failure_count;
        }
    }
    if (failure_count > 0) {
        std::ostringstream msg;
        msg << failure_count << " element evaluation(s) failed";
        for (const auto& f : failures) msg << "\n  " << f;
        if (failure_count > failures.size()) msg << "\n  ...";
        throw MaterialError(msg.str());
    }
    out.residual = out.internal - lambda * f_ref_;
    if (want_tangent) {
        out.K.resize(dofs_.num_free, dofs_.num_free);
        out.K.setFromTriplets(triplets.begin(), triplets.end());
    }
    return out;
}

VecX Analysis::restrict_free(const VecX& full) const {
    VecX r(dofs_.num_free);
    for (int d = 0; d < dofs_.num_dofs(); ++d)
        if (dofs_.equation[d] >= 0) r[dofs_.equation[d]] = full[d];
    return r;
}

void Analysis::add_free(const VecX& free, VecX& full) const {
    for (int d = 0; d < dofs_.num_dofs(); ++d)
        if (dofs_.equation[d] >= 0) full[d] += free[dofs_.equation[d]];
}

VecX Analysis::reactions(const Assembly& a) const {
    VecX r = VecX::Zero(dofs_.num_dofs());
    for (int d = 0; d < dofs_.num_dofs(); ++d)
        if (dofs_.equation[d] < 0) r[d] = a.residual[d];
    return r;
}

Vec3 Analysis::surface_displacement(const State& state, int patch, const Vec2& xi) const {
    const auto& p = model_.patches[patch];
    const int e = p.find_element(xi[0], xi[1]);
    const auto basis = splines::nurbs_basis_eval(p, e, xi);
    const auto& conn = p.elements()[e].connectivity;
    Vec3 u = Vec3::Zero();
    for (std::size_t a = 0; a < conn.size(); ++a) u += basis.values[a] * state.u.segment<3>(3 * dofs_.node[patch][conn[a]]);
    return u;
}

Vec3 Analysis::monitor_displacement(const State& state, int monitor) const {
    const Monitor& m = model_.monitors[monitor];
    if (m.xi) return surface_displacement(state, m.patch, *m.xi);
    return state.u.segment<3>(3 * dofs_.node[m.patch][m.point]);
}

double max_transverse_stress_ratio(const Analysis& analysis, const State& state) {
    double worst = 0.0;
    for (std::size_t e = 0; e < analysis.elements().size(); ++e) {
        const auto& el = analysis.elements()[e];
        const auto& mat = analysis.material(static_cast<int>(e));
        const auto u = analysis.element_displacements(state, static_cast<int>(e));
        std::vector<Vec3> x(u.size());
        for (std::size_t a = 0; a < x.size(); ++a) x[a] = el.reference[a] + u[a];
        const std::size_t ntp = el.thickness_rule.points.size();
        for (std::size_t g = 0; g < el.points.size(); ++g) {
            const auto& q = el.points[g];
            const kinematics::MidsurfaceState ms{q.reference, kinematics::surface_geometry(q.basis, x)};
            const auto local = kinematics::strains(ms, q.frame);
            for (std::size_t k = 0; k < ntp; ++k) {
                const double z = 0.5 * el.thickness * el.thickness_rule.points[k];
                const auto& h = state.history[e][g * ntp + k];
                const auto cm = material::plane_stress_enforce(mat, local.membrane + z * local.bending, h.plastic, h.c33);
                const Mat3 C = kinematics::layer_right_cauchy_green(
                    kinematics::StrainMeasures{local.membrane + z * local.bending, Voigt3::Zero()}, 0.0, cm.c33);
                const Mat3 S = mat.evaluate(C, h.plastic).S;
                const double norm = S.norm();
                if (norm > 0.0) worst = std::max(worst, std::abs(S(2, 2)) / norm);
            }
        }
    }
    return worst;
}

}  // namespace igashell::solver
