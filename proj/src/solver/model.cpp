#include "igashell/solver.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

namespace igashell::solver {

std::shared_ptr<const material::Material> make_material(const MaterialSpec& spec) {
    if (spec.kind == "stvk") {
        return std::make_shared<material::StVenantKirchhoff>(material::ElasticParams{spec.E, spec.nu});
    }
    if (spec.kind == "neo_hookean") return std::make_shared<material::NeoHookean>(spec.mu, spec.lambda);
    if (spec.kind == "j2_plastic") {
        return std::make_shared<material::J2Plasticity>(material::ElasticParams{spec.E, spec.nu},
                                                        material::HardeningLaw{spec.sigma_y, spec.H});
    }
    throw ValidationError("unknown material kind '" + spec.kind + "'");
}

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw ValidationError(what);
}

std::string at(const std::string& base, std::size_t i) { return base + "[" + std::to_string(i) + "]"; }

void check_patch(const Model& m, int patch, const std::string& where) {
    require(patch >= 0 && patch < static_cast<int>(m.patches.size()), where + ".patch: no patch " + std::to_string(patch));
}

void check_point(const Model& m, int patch, int point, const std::string& where) {
    check_patch(m, patch, where);
    require(point >= 0 && point < m.patches[patch].num_points(),
            where + ": control point " + std::to_string(point) + " outside patch " + std::to_string(patch));
}

}  // namespace

void validate_model(const Model& m) {
    require(!m.patches.empty(), "patches: at least one patch is required");
    require(!m.materials.empty(), "materials: at least one material is required");
    require(m.patch_material.size() == m.patches.size(), "patches: every patch needs a material");
    for (std::size_t i = 0; i < m.materials.size(); ++i) {
        try {
            make_material(m.materials[i]);
        } catch (const Error& e) {
            throw ValidationError(at("materials", i) + ": " + e.what());
        }
    }
    for (std::size_t p = 0; p < m.patches.size(); ++p) {
        require(m.patch_material[p] >= 0 && m.patch_material[p] < static_cast<int>(m.materials.size()),
                at("patches", p) + ".material: unknown material index");
        require(m.patches[p].thickness() > 0.0, at("patches", p) + ".thickness: must be positive");
    }
    require(m.thickness_points >= 0 && m.thickness_points <= 20, "thickness_points: must lie in [0, 20]");
    require(m.strips.modulus_factor > 0.0, "strips.modulus_factor: must be positive");
    for (std::size_t s = 0; s < m.strips.explicit_strips.size(); ++s) {
        const auto& st = m.strips.explicit_strips[s];
        require(st.triples.size() >= 2, at("strips", s) + ".triples: at least two triples are required");
        for (std::size_t t = 0; t < st.triples.size(); ++t) {
            for (const auto& r : st.triples[t]) check_point(m, r.patch, r.point, at(at("strips", s) + ".triples", t));
        }
    }
    for (std::size_t c = 0; c < m.constraints.size(); ++c) {
        const auto& con = m.constraints[c];
        for (int id : con.points) check_point(m, con.patch, id, at("constraints", c));
    }
    for (std::size_t l = 0; l < m.loads.size(); ++l) {
        const auto& ld = m.loads[l];
        check_patch(m, ld.patch, at("loads", l));
        if (ld.kind == LoadKind::point) {
            require(ld.xi.minCoeff() >= 0.0 && ld.xi.maxCoeff() <= 1.0, at("loads", l) + ".xi: must lie in [0, 1]^2");
        }
    }
    for (std::size_t i = 0; i < m.monitors.size(); ++i) {
        const auto& mon = m.monitors[i];
        if (mon.xi) {
            check_patch(m, mon.patch, at("monitors", i));
            require(mon.xi->minCoeff() >= 0.0 && mon.xi->maxCoeff() <= 1.0, at("monitors", i) + ".xi: must lie in [0, 1]^2");
        } else {
            check_point(m, mon.patch, mon.point, at("monitors", i));
        }
    }
    const auto& n = m.newton;
    require(n.residual_tol > 0.0 && n.displacement_tol > 0.0, "solver.residual_tol: tolerances must be positive");
    require(n.max_iterations >= 1, "solver.max_iterations: must be >= 1");
    require(n.increments >= 1, "solver.increments: must be >= 1");
    require(n.max_cutbacks >= 0, "solver.max_cutbacks: must be >= 0");
    const auto& a = m.arc_length;
    require(a.radius > 0.0, "solver.radius: must be positive");
    require(a.min_radius > 0.0 && a.min_radius <= a.radius && a.radius <= a.max_radius,
            "solver.min_radius: need 0 < min_radius <= radius <= max_radius");
    require(a.max_steps >= 1 && a.desired_iterations >= 1 && a.max_iterations >= 1,
            "solver.max_steps: step and iteration counts must be >= 1");
    require(a.residual_tol > 0.0 && a.displacement_tol > 0.0, "solver.residual_tol: tolerances must be positive");
    require(a.stop_monitor < static_cast<int>(m.monitors.size()), "solver.stop_monitor: unknown monitor");
    require(a.stop_component >= -1 && a.stop_component <= 2, "solver.stop_component: must be -1, 0, 1 or 2");
}

DofMap merge_interfaces(const Model& model) {
    struct Entry {
        Vec3 x;
        int patch;
        int point;
    };
    std::vector<Entry> all;
    Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
    Vec3 hi = -lo;
    for (std::size_t p = 0; p < model.patches.size(); ++p) {
        const auto& pts = model.patches[p].points();
        for (std::size_t k = 0; k < pts.size(); ++k) {
            all.push_back({pts[k], static_cast<int>(p), static_cast<int>(k)});
            lo = lo.cwiseMin(pts[k]);
            hi = hi.cwiseMax(pts[k]);
        }
    }
    DofMap map;
    map.tolerance = 1e-8 * (hi - lo).norm();
    const double tol = map.tolerance;

    std::vector<int> parent(all.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    std::vector<int> order(all.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return all[a].x[0] < all[b].x[0]; });
    for (std::size_t i = 0; i < order.size(); ++i) {
        for (std::size_t j = i + 1; j < order.size() && all[order[j]].x[0] - all[order[i]].x[0] <= tol; ++j) {
            if ((all[order[i]].x - all[order[j]].x).norm() <= tol) {
                const int a = find(order[i]);
                const int b = find(order[j]);
                if (a != b) parent[std::max(a, b)] = std::min(a, b);
            }
        }
    }

    std::map<int, std::vector<int>> clusters;
    for (std::size_t i = 0; i < all.size(); ++i) clusters[find(static_cast<int>(i))].push_back(static_cast<int>(i));
    for (const auto& [root, members] : clusters) {
        for (std::size_t a = 0; a < members.size(); ++a) {
            for (std::size_t b = a + 1; b < members.size(); ++b) {
                if ((all[members[a]].x - all[members[b]].x).norm() > tol) {
                    std::ostringstream msg;
                    msg << "ambiguous interface merge: patch " << all[members[a]].patch << " point "
                        << all[members[a]].point << " and patch " << all[members[b]].patch << " point "
                        << all[members[b]].point << " are linked through intermediate points but lie "
                        << (all[members[a]].x - all[members[b]].x).norm() << " apart (tolerance " << tol << ")";
                    throw ModelError(msg.str());
                }
            }
        }
    }

    map.node.resize(model.patches.size());
    for (std::size_t p = 0; p < model.patches.size(); ++p) map.node[p].assign(model.patches[p].num_points(), -1);
    std::vector<int> node_of_root(all.size(), -1);
    for (std::size_t i = 0; i < all.size(); ++i) {
        const int r = find(static_cast<int>(i));
        if (node_of_root[r] < 0) {
            node_of_root[r] = map.num_nodes();
            map.coords.push_back(all[r].x);
        }
        map.node[all[i].patch][all[i].point] = node_of_root[r];
    }

    std::vector<char> fixed(map.num_dofs(), 0);
    for (const auto& c : model.constraints) {
        for (int id : c.points) {
            for (int i = 0; i < 3; ++i)
                if (c.components[i]) fixed[3 * map.node[c.patch][id] + i] = 1;
        }
    }
    map.equation.assign(map.num_dofs(), -1);
    for (int d = 0; d < map.num_dofs(); ++d)
        if (!fixed[d]) map.equation[d] = map.num_free++;
    return map;
}

std::vector<Interface> find_interfaces(const Model& model, const DofMap& dofs) {
    struct EdgeRow {
        int patch;
        element::Edge edge;
        std::vector<int> boundary;
        std::vector<int> inner;
    };
    std::map<std::vector<int>, std::vector<EdgeRow>> by_key;
    const std::array<element::Edge, 4> edges{element::Edge::u0, element::Edge::u1, element::Edge::v0,
                                             element::Edge::v1};
    for (std::size_t p = 0; p < model.patches.size(); ++p) {
        const auto& patch = model.patches[p];
        for (element::Edge e : edges) {
            EdgeRow row{static_cast<int>(p), e, {}, {}};
            for (int id : element::edge_points(patch, e, 0)) row.boundary.push_back(dofs.node[p][id]);
            for (int id : element::edge_points(patch, e, 1)) row.inner.push_back(dofs.node[p][id]);
            std::vector<int> key = row.boundary;
            std::sort(key.begin(), key.end());
            key.erase(std::unique(key.begin(), key.end()), key.end());
            if (key.size() < 2) continue;
            by_key[key].push_back(std::move(row));
        }
    }
    std::vector<Interface> out;
    for (auto& [key, rows] : by_key) {
        for (std::size_t k = 1; k < rows.size(); ++k) {
            const EdgeRow& A = rows[0];
            EdgeRow B = rows[k];
            bool reversed = false;
            if (B.boundary != A.boundary) {
                std::reverse(B.boundary.begin(), B.boundary.end());
                std::reverse(B.inner.begin(), B.inner.end());
                if (B.boundary != A.boundary) continue;
                reversed = true;
            }
            out.push_back(Interface{A.patch, A.edge, B.patch, B.edge, reversed, A.boundary, A.inner, B.inner});
        }
    }
    return out;
}

std::vector<element::BendingStrip> detect_strips(const Model& model, const DofMap& dofs) {
    std::vector<element::BendingStrip> out;
    for (const auto& itf : find_interfaces(model, dofs)) {
        element::BendingStrip strip;
        for (std::size_t i = 0; i < itf.boundary.size(); ++i) {
            strip.triples.push_back({itf.inner_a[i], itf.boundary[i], itf.inner_b[i]});
        }
        const auto ma = make_material(model.materials[model.patch_material[itf.patch_a]]);
        const auto mb = make_material(model.materials[model.patch_material[itf.patch_b]]);
        strip.modulus = model.strips.modulus_factor * std::max(ma->modulus(), mb->modulus());
        strip.thickness = 0.5 * (model.patches[itf.patch_a].thickness() + model.patches[itf.patch_b].thickness());
        out.push_back(std::move(strip));
    }
    return out;
}

}  // namespace igashell::solver
