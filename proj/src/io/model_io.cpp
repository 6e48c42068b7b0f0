#include "igashell/io.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace igashell::io {

using solver::Constraint;
using solver::Load;
using solver::LoadKind;
using solver::MaterialSpec;
using solver::Model;
using solver::Monitor;

namespace {

// A JSON node together with its path for error messages.
class Node {
public:
    Node(const Json& j, std::string path) : j_(j), path_(std::move(path)) {}

    const std::string& path() const { return path_; }
    const Json& raw() const { return j_; }

    [[noreturn]] void fail(const std::string& what) const { throw ValidationError(path_ + ": " + what); }

    bool has(const std::string& key) const { return j_.is_object() && j_.contains(key); }

    Node operator[](const std::string& key) const {
        if (!j_.is_object()) fail("expected an object");
        if (!j_.contains(key)) fail("missing field '" + key + "'");
        return Node(j_.at(key), path_ + "." + key);
    }

    Node operator[](std::size_t i) const { return Node(j_.at(i), path_ + "[" + std::to_string(i) + "]"); }

    std::size_t size() const {
        if (!j_.is_array()) fail("expected an array");
        return j_.size();
    }

    double number() const {
        if (!j_.is_number()) fail("expected a number");
        const double v = j_.get<double>();
        if (!std::isfinite(v)) fail("expected a finite number");
        return v;
    }

    double positive() const {
        const double v = number();
        if (!(v > 0.0)) fail("must be positive");
        return v;
    }

    int integer() const {
        if (!j_.is_number_integer()) fail("expected an integer");
        return j_.get<int>();
    }

    std::string string() const {
        if (!j_.is_string()) fail("expected a string");
        return j_.get<std::string>();
    }

    bool boolean() const {
        if (!j_.is_boolean()) fail("expected true or false");
        return j_.get<bool>();
    }

    std::vector<double> numbers() const {
        std::vector<double> out(size());
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = (*this)[i].number();
        return out;
    }

    std::vector<int> integers() const {
        std::vector<int> out(size());
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = (*this)[i].integer();
        return out;
    }

    Vec3 vec3() const {
        if (size() != 3) fail("expected 3 components");
        return Vec3((*this)[0].number(), (*this)[1].number(), (*this)[2].number());
    }

    Vec2 vec2() const {
        if (size() != 2) fail("expected 2 components");
        return Vec2((*this)[0].number(), (*this)[1].number());
    }

    void only(std::initializer_list<const char*> keys) const {
        if (!j_.is_object()) fail("expected an object");
        std::set<std::string> allowed(keys.begin(), keys.end());
        for (const auto& [k, v] : j_.items())
            if (!allowed.count(k)) fail("unknown field '" + k + "'");
    }

private:
    const Json& j_;
    std::string path_;
};

splines::NurbsPatch read_patch(const Node& n) {
    n.only({"name", "degrees", "knots", "control_points", "thickness", "material", "elevate", "refine"});
    const auto deg = n["degrees"].integers();
    if (deg.size() != 2) n["degrees"].fail("expected 2 degrees");
    const Node knots = n["knots"];
    if (knots.size() != 2) knots.fail("expected 2 knot vectors");
    std::array<splines::KnotVector, 2> kv{splines::KnotVector(1, {0, 0, 1, 1}), splines::KnotVector(1, {0, 0, 1, 1})};
    for (int d = 0; d < 2; ++d) {
        try {
            kv[d] = splines::KnotVector(deg[d], knots[d].numbers());
        } catch (const Error& e) {
            knots[d].fail(e.what());
        }
    }
    const Node cps = n["control_points"];
    const std::size_t expected = static_cast<std::size_t>(kv[0].num_basis()) * kv[1].num_basis();
    if (cps.size() != expected) {
        cps.fail("expected " + std::to_string(expected) + " control points, got " + std::to_string(cps.size()));
    }
    std::vector<Vec3> pts;
    std::vector<double> w;
    for (std::size_t i = 0; i < cps.size(); ++i) {
        const Node c = cps[i];
        if (c.size() != 4) c.fail("expected [x, y, z, w]");
        pts.emplace_back(c[0].number(), c[1].number(), c[2].number());
        const double wi = c[3].number();
        if (!(wi > 0.0)) c[3].fail("weight must be positive");
        w.push_back(wi);
    }
    const double t = n["thickness"].positive();
    splines::NurbsPatch patch(kv[0], kv[1], pts, w, t);
    if (n.has("elevate")) {
        const auto e = n["elevate"].integers();
        if (e.size() != 2 || e[0] < 0 || e[1] < 0) n["elevate"].fail("expected two nonnegative counts");
        for (int d = 0; d < 2; ++d) {
            for (int k = 0; k < e[d]; ++k) {
                try {
                    patch = splines::elevate_degree(patch, d);
                } catch (const Error& err) {
                    n["elevate"].fail(err.what());
                }
            }
        }
    }
    if (n.has("refine")) {
        const auto r = n["refine"].integers();
        if (r.size() != 2 || r[0] < 1 || r[1] < 1) n["refine"].fail("expected two counts >= 1");
        patch = splines::refine_uniform(patch, r[0], r[1]);
    }
    return patch;
}

MaterialSpec read_material(const Node& n) {
    n.only({"name", "kind", "E", "nu", "mu", "lambda", "sigma_y", "H"});
    MaterialSpec m;
    m.kind = n["kind"].string();
    if (m.kind == "stvk" || m.kind == "j2_plastic") {
        m.E = n["E"].number();
        m.nu = n["nu"].number();
    } else if (m.kind == "neo_hookean") {
        m.mu = n["mu"].number();
        m.lambda = n["lambda"].number();
    } else {
        n["kind"].fail("expected stvk, neo_hookean or j2_plastic");
    }
    if (m.kind == "j2_plastic") {
        m.sigma_y = n["sigma_y"].number();
        m.H = n.has("H") ? n["H"].number() : 0.0;
    }
    try {
        solver::make_material(m);
    } catch (const Error& e) {
        n.fail(e.what());
    }
    return m;
}

std::array<bool, 3> read_components(const Node& n) {
    const std::string s = n.string();
    std::array<bool, 3> c{false, false, false};
    for (char ch : s) {
        if (ch < 'x' || ch > 'z') n.fail("components are letters from 'xyz'");
        c[ch - 'x'] = true;
    }
    if (s.empty()) n.fail("at least one component is required");
    return c;
}

std::string components_string(const std::array<bool, 3>& c) {
    std::string s;
    for (int i = 0; i < 3; ++i)
        if (c[i]) s += static_cast<char>('x' + i);
    return s;
}

int read_patch_index(const Node& n, const Model& m) {
    const int p = n.integer();
    if (p < 0 || p >= static_cast<int>(m.patches.size())) n.fail("no patch " + std::to_string(p));
    return p;
}

int read_point_index(const Node& n, const Model& m, int patch) {
    const int id = n.integer();
    if (id < 0 || id >= m.patches[patch].num_points()) {
        n.fail("control point " + std::to_string(id) + " outside patch " + std::to_string(patch));
    }
    return id;
}

element::Edge read_edge(const Node& n) {
    try {
        return element::parse_edge(n.string());
    } catch (const Error& e) {
        n.fail(e.what());
    }
}

Constraint read_constraint(const Node& n, const Model& m) {
    n.only({"patch", "points", "edge", "rows", "components"});
    Constraint c;
    c.patch = read_patch_index(n["patch"], m);
    c.components = n.has("components") ? read_components(n["components"]) : std::array<bool, 3>{true, true, true};
    if (n.has("points")) {
        const Node pts = n["points"];
        for (std::size_t i = 0; i < pts.size(); ++i) c.points.push_back(read_point_index(pts[i], m, c.patch));
    }
    if (n.has("edge")) {
        const element::Edge e = read_edge(n["edge"]);
        const int rows = n.has("rows") ? n["rows"].integer() : 1;
        if (rows < 1) n["rows"].fail("must be >= 1");
        for (int r = 0; r < rows; ++r) {
            try {
                for (int id : element::edge_points(m.patches[c.patch], e, r)) c.points.push_back(id);
            } catch (const Error& err) {
                n["rows"].fail(err.what());
            }
        }
    }
    if (c.points.empty()) n.fail("a constraint needs 'points' or 'edge'");
    return c;
}

Load read_load(const Node& n, const Model& m) {
    Load l;
    const std::string type = n["type"].string();
    l.patch = read_patch_index(n["patch"], m);
    if (type == "point") {
        n.only({"type", "patch", "xi", "vector"});
        l.kind = LoadKind::point;
        l.xi = n["xi"].vec2();
        if (l.xi.minCoeff() < 0.0 || l.xi.maxCoeff() > 1.0) n["xi"].fail("must lie in [0, 1]^2");
        l.vector = n["vector"].vec3();
    } else if (type == "line") {
        n.only({"type", "patch", "edge", "vector"});
        l.kind = LoadKind::line;
        l.edge = read_edge(n["edge"]);
        l.vector = n["vector"].vec3();
    } else if (type == "area") {
        n.only({"type", "patch", "vector"});
        l.kind = LoadKind::area;
        l.vector = n["vector"].vec3();
    } else if (type == "pressure") {
        n.only({"type", "patch", "value"});
        l.kind = LoadKind::pressure;
        l.pressure = n["value"].number();
    } else {
        n["type"].fail("expected point, line, area or pressure");
    }
    return l;
}

Monitor read_monitor(const Node& n, const Model& m) {
    n.only({"name", "patch", "point", "xi"});
    Monitor mon;
    mon.name = n["name"].string();
    if (mon.name.empty() || mon.name.find_first_of(",\"\n") != std::string::npos) {
        n["name"].fail("must be nonempty without commas, quotes or newlines");
    }
    mon.patch = read_patch_index(n["patch"], m);
    if (n.has("xi")) {
        mon.xi = n["xi"].vec2();
        if (mon.xi->minCoeff() < 0.0 || mon.xi->maxCoeff() > 1.0) n["xi"].fail("must lie in [0, 1]^2");
    } else {
        mon.point = read_point_index(n["point"], m, mon.patch);
    }
    return mon;
}

void read_solver(const Node& n, Model& m) {
    const std::string method = n["method"].string();
    auto num = [&](const char* key, double& v) {
        if (n.has(key)) v = n[key].number();
    };
    auto pos = [&](const char* key, double& v) {
        if (n.has(key)) v = n[key].positive();
    };
    auto count = [&](const char* key, int& v, int lo) {
        if (n.has(key)) {
            v = n[key].integer();
            if (v < lo) n[key].fail("must be >= " + std::to_string(lo));
        }
    };
    if (method == "newton") {
        n.only({"method", "increments", "final_load", "residual_tol", "displacement_tol", "max_iterations",
                "max_cutbacks"});
        m.method = solver::Method::newton;
        auto& s = m.newton;
        count("increments", s.increments, 1);
        num("final_load", s.final_load);
        pos("residual_tol", s.residual_tol);
        pos("displacement_tol", s.displacement_tol);
        count("max_iterations", s.max_iterations, 1);
        count("max_cutbacks", s.max_cutbacks, 0);
    } else if (method == "arc_length") {
        n.only({"method", "radius", "min_radius", "max_radius", "max_steps", "desired_iterations", "max_retries",
                "residual_tol", "displacement_tol", "max_iterations", "max_load_factor", "stop_monitor",
                "stop_component", "stop_displacement"});
        m.method = solver::Method::arc_length;
        auto& s = m.arc_length;
        pos("radius", s.radius);
        pos("min_radius", s.min_radius);
        pos("max_radius", s.max_radius);
        count("max_steps", s.max_steps, 1);
        count("desired_iterations", s.desired_iterations, 1);
        count("max_retries", s.max_retries, 0);
        pos("residual_tol", s.residual_tol);
        pos("displacement_tol", s.displacement_tol);
        count("max_iterations", s.max_iterations, 1);
        pos("max_load_factor", s.max_load_factor);
        pos("stop_displacement", s.stop_displacement);
        if (n.has("stop_monitor")) {
            const std::string name = n["stop_monitor"].string();
            s.stop_monitor = -1;
            for (std::size_t i = 0; i < m.monitors.size(); ++i)
                if (m.monitors[i].name == name) s.stop_monitor = static_cast<int>(i);
            if (s.stop_monitor < 0) n["stop_monitor"].fail("unknown monitor '" + name + "'");
        }
        if (n.has("stop_component")) {
            const std::string c = n["stop_component"].string();
            if (c == "x") s.stop_component = 0;
            else if (c == "y") s.stop_component = 1;
            else if (c == "z") s.stop_component = 2;
            else if (c == "norm") s.stop_component = -1;
            else n["stop_component"].fail("expected x, y, z or norm");
        }
        if (!(s.min_radius <= s.radius && s.radius <= s.max_radius)) n.fail("need min_radius <= radius <= max_radius");
    } else {
        n["method"].fail("expected newton or arc_length");
    }
}

Json vec_json(const Vec3& v) { return Json::array({v[0], v[1], v[2]}); }
Json vec_json(const Vec2& v) { return Json::array({v[0], v[1]}); }

}  // namespace

Model model_from_json(const Json& description) {
    const Node root(description, "$");
    root.only({"format", "version", "description", "patches", "materials", "thickness_points", "strips",
               "constraints", "loads", "monitors", "solver"});
    if (root["format"].string() != "igashell-model") root["format"].fail("expected \"igashell-model\"");
    if (root["version"].integer() != format_version) {
        root["version"].fail("unsupported version (this build reads version " + std::to_string(format_version) + ")");
    }
    Model m;

    const Node mats = root["materials"];
    std::vector<std::string> names;
    for (std::size_t i = 0; i < mats.size(); ++i) {
        m.materials.push_back(read_material(mats[i]));
        names.push_back(mats[i].has("name") ? mats[i]["name"].string() : std::to_string(i));
    }
    if (m.materials.empty()) mats.fail("at least one material is required");

    const Node patches = root["patches"];
    if (patches.size() == 0) patches.fail("at least one patch is required");
    for (std::size_t i = 0; i < patches.size(); ++i) {
        const Node p = patches[i];
        m.patches.push_back(read_patch(p));
        const Node mat = p["material"];
        int idx = -1;
        if (mat.raw().is_string()) {
            for (std::size_t k = 0; k < names.size(); ++k)
                if (names[k] == mat.string()) idx = static_cast<int>(k);
            if (idx < 0) mat.fail("unknown material '" + mat.string() + "'");
        } else {
            idx = mat.integer();
            if (idx < 0 || idx >= static_cast<int>(m.materials.size())) mat.fail("unknown material index");
        }
        m.patch_material.push_back(idx);
    }

    if (root.has("thickness_points")) {
        m.thickness_points = root["thickness_points"].integer();
        if (m.thickness_points < 0 || m.thickness_points > 20) root["thickness_points"].fail("must lie in [0, 20]");
    }

    if (root.has("strips")) {
        const Node s = root["strips"];
        if (s.raw().is_string()) {
            const std::string mode = s.string();
            if (mode == "auto") m.strips.automatic = true;
            else if (mode != "none") s.fail("expected \"auto\", \"none\" or an object");
        } else {
            s.only({"mode", "modulus_factor", "explicit"});
            const std::string mode = s.has("mode") ? s["mode"].string() : "none";
            if (mode != "auto" && mode != "none") s["mode"].fail("expected auto or none");
            m.strips.automatic = mode == "auto";
            if (s.has("modulus_factor")) m.strips.modulus_factor = s["modulus_factor"].positive();
            if (s.has("explicit")) {
                const Node ex = s["explicit"];
                for (std::size_t k = 0; k < ex.size(); ++k) {
                    solver::ExplicitStrip strip;
                    const Node tr = ex[k];
                    if (tr.size() < 2) tr.fail("a strip needs at least two triples");
                    for (std::size_t t = 0; t < tr.size(); ++t) {
                        if (tr[t].size() != 3) tr[t].fail("expected three [patch, point] pairs");
                        std::array<solver::PointRef, 3> refs;
                        for (int r = 0; r < 3; ++r) {
                            const Node pr = tr[t][r];
                            if (pr.size() != 2) pr.fail("expected [patch, point]");
                            refs[r].patch = read_patch_index(pr[0], m);
                            refs[r].point = read_point_index(pr[1], m, refs[r].patch);
                        }
                        strip.triples.push_back(refs);
                    }
                    m.strips.explicit_strips.push_back(std::move(strip));
                }
            }
        }
    }

    if (root.has("constraints")) {
        const Node cs = root["constraints"];
        for (std::size_t i = 0; i < cs.size(); ++i) m.constraints.push_back(read_constraint(cs[i], m));
    }
    if (root.has("loads")) {
        const Node ls = root["loads"];
        for (std::size_t i = 0; i < ls.size(); ++i) m.loads.push_back(read_load(ls[i], m));
    }
    if (root.has("monitors")) {
        const Node ms = root["monitors"];
        for (std::size_t i = 0; i < ms.size(); ++i) m.monitors.push_back(read_monitor(ms[i], m));
    }
    if (root.has("solver")) read_solver(root["solver"], m);

    try {
        solver::validate_model(m);
    } catch (const ValidationError& e) {
        throw ValidationError(std::string("$.") + e.what());
    }
    return m;
}

Model parse_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open model file " + path.string());
    Json j;
    try {
        j = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
    return model_from_json(j);
}

Json model_to_json(const Model& m) {
    Json j;
    j["format"] = "igashell-model";
    j["version"] = format_version;
    j["materials"] = Json::array();
    for (const auto& mat : m.materials) {
        Json o{{"kind", mat.kind}};
        if (mat.kind == "neo_hookean") {
            o["mu"] = mat.mu;
            o["lambda"] = mat.lambda;
        } else {
            o["E"] = mat.E;
            o["nu"] = mat.nu;
        }
        if (mat.kind == "j2_plastic") {
            o["sigma_y"] = mat.sigma_y;
            o["H"] = mat.H;
        }
        j["materials"].push_back(o);
    }
    j["patches"] = Json::array();
    for (std::size_t p = 0; p < m.patches.size(); ++p) {
        const auto& patch = m.patches[p];
        Json cps = Json::array();
        for (int k = 0; k < patch.num_points(); ++k) {
            const Vec3& x = patch.points()[k];
            cps.push_back({x[0], x[1], x[2], patch.weights()[k]});
        }
        j["patches"].push_back({{"degrees", {patch.degree(0), patch.degree(1)}},
                                {"knots", {patch.knots(0).values(), patch.knots(1).values()}},
                                {"control_points", cps},
                                {"thickness", patch.thickness()},
                                {"material", m.patch_material[p]}});
    }
    j["thickness_points"] = m.thickness_points;
    Json strips{{"mode", m.strips.automatic ? "auto" : "none"}, {"modulus_factor", m.strips.modulus_factor}};
    if (!m.strips.explicit_strips.empty()) {
        Json ex = Json::array();
        for (const auto& s : m.strips.explicit_strips) {
            Json tr = Json::array();
            for (const auto& t : s.triples) {
                tr.push_back({{t[0].patch, t[0].point}, {t[1].patch, t[1].point}, {t[2].patch, t[2].point}});
            }
            ex.push_back(tr);
        }
        strips["explicit"] = ex;
    }
    j["strips"] = strips;
    j["constraints"] = Json::array();
    for (const auto& c : m.constraints) {
        j["constraints"].push_back({{"patch", c.patch}, {"points", c.points}, {"components", components_string(c.components)}});
    }
    j["loads"] = Json::array();
    for (const auto& l : m.loads) {
        Json o{{"patch", l.patch}};
        switch (l.kind) {
            case LoadKind::point:
                o["type"] = "point";
                o["xi"] = vec_json(l.xi);
                o["vector"] = vec_json(l.vector);
                break;
            case LoadKind::line:
                o["type"] = "line";
                o["edge"] = element::edge_name(l.edge);
                o["vector"] = vec_json(l.vector);
                break;
            case LoadKind::area:
                o["type"] = "area";
                o["vector"] = vec_json(l.vector);
                break;
            case LoadKind::pressure:
                o["type"] = "pressure";
                o["value"] = l.pressure;
                break;
        }
        j["loads"].push_back(o);
    }
    j["monitors"] = Json::array();
    for (const auto& mon : m.monitors) {
        Json o{{"name", mon.name}, {"patch", mon.patch}};
        if (mon.xi) o["xi"] = vec_json(*mon.xi);
        else o["point"] = mon.point;
        j["monitors"].push_back(o);
    }
    if (m.method == solver::Method::newton) {
        const auto& s = m.newton;
        j["solver"] = {{"method", "newton"},         {"increments", s.increments},
                       {"final_load", s.final_load}, {"residual_tol", s.residual_tol},
                       {"displacement_tol", s.displacement_tol}, {"max_iterations", s.max_iterations},
                       {"max_cutbacks", s.max_cutbacks}};
    } else {
        const auto& s = m.arc_length;
        Json o{{"method", "arc_length"},
               {"radius", s.radius},
               {"min_radius", s.min_radius},
               {"max_radius", s.max_radius},
               {"max_steps", s.max_steps},
               {"desired_iterations", s.desired_iterations},
               {"max_retries", s.max_retries},
               {"residual_tol", s.residual_tol},
               {"displacement_tol", s.displacement_tol},
               {"max_iterations", s.max_iterations}};
        if (std::isfinite(s.max_load_factor)) o["max_load_factor"] = s.max_load_factor;
        if (std::isfinite(s.stop_displacement)) o["stop_displacement"] = s.stop_displacement;
        if (s.stop_monitor >= 0) {
            o["stop_monitor"] = m.monitors[s.stop_monitor].name;
            o["stop_component"] = s.stop_component < 0 ? std::string("norm") : std::string(1, static_cast<char>('x' + s.stop_component));
        }
        j["solver"] = o;
    }
    return j;
}

bool same_model(const Model& a, const Model& b) {
    if (a.patches.size() != b.patches.size()) return false;
    for (std::size_t p = 0; p < a.patches.size(); ++p) {
        const auto& x = a.patches[p];
        const auto& y = b.patches[p];
        for (int d = 0; d < 2; ++d) {
            if (x.degree(d) != y.degree(d) || x.knots(d).values() != y.knots(d).values()) return false;
        }
        if (x.points() != y.points() || x.weights() != y.weights() || x.thickness() != y.thickness()) return false;
    }
    return a.materials == b.materials && a.patch_material == b.patch_material &&
           a.thickness_points == b.thickness_points && a.strips == b.strips && a.constraints == b.constraints &&
           a.loads == b.loads && a.monitors == b.monitors && a.method == b.method && a.newton == b.newton &&
           a.arc_length == b.arc_length;
}

}  // namespace igashell::io
