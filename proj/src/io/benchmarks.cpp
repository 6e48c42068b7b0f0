#include "igashell/io.hpp"

#include <cmath>

namespace igashell::io {

namespace {

const double pi = std::acos(-1.0);

struct PatchSpec {
    std::array<int, 2> degrees{1, 1};
    std::vector<std::array<double, 4>> points;   // i (dir 0) fastest
    double thickness = 0.0;
    int material = 0;
    std::array<int, 2> elevate{0, 0};
    std::array<int, 2> refine{1, 1};
};

std::vector<double> bezier_knots(int p) {
    std::vector<double> k(p + 1, 0.0);
    k.insert(k.end(), p + 1, 1.0);
    return k;
}

Json to_json(const PatchSpec& s) {
    Json cps = Json::array();
    for (const auto& c : s.points) cps.push_back({c[0], c[1], c[2], c[3]});
    Json j{{"degrees", {s.degrees[0], s.degrees[1]}},
           {"knots", {bezier_knots(s.degrees[0]), bezier_knots(s.degrees[1])}},
           {"control_points", cps},
           {"thickness", s.thickness},
           {"material", s.material}};
    if (s.elevate != std::array<int, 2>{0, 0}) j["elevate"] = {s.elevate[0], s.elevate[1]};
    if (s.refine != std::array<int, 2>{1, 1}) j["refine"] = {s.refine[0], s.refine[1]};
    return j;
}

// Cylinder segment with axis x: linear along x in [x0, x1], quadratic circular
// arc from angle a0 to a1 (radians, measured from +y towards +z).
PatchSpec cylinder_segment(double R, double x0, double x1, double a0, double a1, double t) {
    PatchSpec s;
    s.degrees = {1, 2};
    s.thickness = t;
    const double half = 0.5 * (a1 - a0);
    const double w = std::cos(half);
    const double mid = 0.5 * (a0 + a1);
    const std::array<std::array<double, 3>, 3> arc{{{R * std::cos(a0), R * std::sin(a0), 1.0},
                                                    {R / w * std::cos(mid), R / w * std::sin(mid), w},
                                                    {R * std::cos(a1), R * std::sin(a1), 1.0}}};
    for (const auto& c : arc) {
        s.points.push_back({x0, c[0], c[1], c[2]});
        s.points.push_back({x1, c[0], c[1], c[2]});
    }
    return s;
}

Json material_stvk(double E, double nu) { return {{"kind", "stvk"}, {"E", E}, {"nu", nu}}; }

Json edge_constraint(int patch, const std::string& edge, int rows, const std::string& components) {
    return {{"patch", patch}, {"edge", edge}, {"rows", rows}, {"components", components}};
}

Json model_header(const std::string& description) {
    return {{"format", "igashell-model"}, {"version", format_version}, {"description", description}};
}

int scaled(int base, int refinement) { return refinement > 0 ? base * refinement : base; }

Json semi_cylinder(const BenchmarkOptions& o) {
    const double L = 3.048, R = 1.016, t = 0.03;
    const int n = o.refinement > 0 ? o.refinement : 16;
    Json j = model_header("Pinched semi-cylindrical shell, StVK, P = 2000");
    j["materials"] = {material_stvk(2.0685e7, 0.3)};
    PatchSpec s;
    s.degrees = {1, 3};
    s.thickness = t;
    const std::array<std::array<double, 3>, 4> arc{{{R, 0.0, 1.0}, {R, 2 * R, 1.0 / 3}, {-R, 2 * R, 1.0 / 3}, {-R, 0.0, 1.0}}};
    for (const auto& c : arc) {
        s.points.push_back({0.0, c[0], c[1], c[2]});
        s.points.push_back({L, c[0], c[1], c[2]});
    }
    s.elevate = {2, 0};
    s.refine = {n, n};
    j["patches"] = {to_json(s)};
    j["constraints"] = {edge_constraint(0, "u0", 2, "xyz"), edge_constraint(0, "v0", 1, "xyz"),
                        edge_constraint(0, "v1", 1, "xyz")};
    j["loads"] = {{{"type", "point"}, {"patch", 0}, {"xi", {1.0, 0.5}}, {"vector", {0.0, 0.0, -2000.0}}}};
    j["monitors"] = {{{"name", "A"}, {"patch", 0}, {"xi", {1.0, 0.5}}}};
    j["solver"] = {{"method", "newton"}, {"increments", 80}, {"final_load", 1.0}, {"residual_tol", 1e-8},
                   {"displacement_tol", 1e-10}, {"max_iterations", 30}, {"max_cutbacks", 6}};
    return j;
}

Json hyperelastic_cylinder(const BenchmarkOptions& o) {
    const double L = 300.0, R = 90.0, t = 2.0;
    Json j = model_header("Pinching of a Neo-Hookean cylinder, 4 patches, load factor = F in kN");
    j["materials"] = {{{"kind", "neo_hookean"}, {"mu", 60.0}, {"lambda", 240.0}}};
    j["patches"] = Json::array();
    for (int q = 0; q < 4; ++q) {
        PatchSpec s = cylinder_segment(R, 0.0, L, q * pi / 2, (q + 1) * pi / 2, t);
        s.elevate = {2, 1};
        s.refine = {scaled(6, o.refinement), scaled(23, o.refinement)};
        j["patches"].push_back(to_json(s));
    }
    j["strips"] = "auto";
    // The bottom generator (angle 270 degrees) is the shared edge v1 of patch 2
    // and v0 of patch 3; the adjacent rows keep it from rotating.
    j["constraints"] = {edge_constraint(2, "v1", 1, "xyz"), edge_constraint(2, "v1", 2, "z"),
                        edge_constraint(3, "v0", 2, "z")};
    j["loads"] = {{{"type", "line"}, {"patch", 0}, {"edge", "v1"}, {"vector", {0.0, 0.0, -1.0 / L}}}};
    j["monitors"] = {{{"name", "A"}, {"patch", 0}, {"xi", {0.5, 1.0}}}};
    j["solver"] = {{"method", "newton"}, {"increments", 8}, {"final_load", 36.0}, {"residual_tol", 1e-8},
                   {"displacement_tol", 1e-10}, {"max_iterations", 40}, {"max_cutbacks", 4}};
    return j;
}

Json scordelis_lo(const BenchmarkOptions& o) {
    const double R = 7600.0, L = 15200.0, t = 76.0, a = 40.0 * pi / 180.0;
    Json j = model_header("Scordelis-Lo roof, perfect J2 plasticity, load factor = f / f0");
    j["materials"] = {{{"kind", "j2_plastic"}, {"E", 21000.0}, {"nu", 0.0}, {"sigma_y", 4.2}, {"H", 0.0}}};
    j["patches"] = Json::array();
    for (int side = 0; side < 2; ++side) {
        PatchSpec s = cylinder_segment(R, 0.0, L, pi / 2 - a + side * a, pi / 2 + side * a, t);
        s.elevate = {1, 0};
        s.refine = {scaled(32, o.refinement), scaled(16, o.refinement)};
        j["patches"].push_back(to_json(s));
    }
    j["strips"] = "auto";
    j["constraints"] = Json::array();
    for (int p = 0; p < 2; ++p) {
        j["constraints"].push_back(edge_constraint(p, "u0", 1, "yz"));
        j["constraints"].push_back(edge_constraint(p, "u1", 1, "yz"));
    }
    j["constraints"].push_back({{"patch", 0}, {"points", {0}}, {"components", "x"}});
    j["loads"] = Json::array();
    for (int p = 0; p < 2; ++p) {
        j["loads"].push_back({{"type", "area"}, {"patch", p}, {"vector", {0.0, 0.0, -4e-3}}});
    }
    j["monitors"] = {{{"name", "A"}, {"patch", 0}, {"xi", {0.5, 0.0}}}};
    j["solver"] = {{"method", "arc_length"}, {"radius", 400.0}, {"min_radius", 1e-3}, {"max_radius", 4000.0},
                   {"max_steps", 400}, {"desired_iterations", 8}, {"residual_tol", 1e-7},
                   {"displacement_tol", 1e-9}, {"max_iterations", 30}, {"stop_monitor", "A"},
                   {"stop_component", "z"}, {"stop_displacement", 2000.0}};
    return j;
}

Json plastic_cylinder(const BenchmarkOptions& o) {
    const double R = 300.0, L = 600.0, t = 3.0;
    Json j = model_header("Pinching of an elastoplastic cylinder, 8 patches, load factor = F in kN");
    j["materials"] = {{{"kind", "j2_plastic"}, {"E", 3000.0}, {"nu", 0.3}, {"sigma_y", 24.3}, {"H", 300.0}}};
    j["patches"] = Json::array();
    for (int half = 0; half < 2; ++half) {
        for (int q = 0; q < 4; ++q) {
            PatchSpec s = cylinder_segment(R, half * L / 2, (half + 1) * L / 2, q * pi / 2, (q + 1) * pi / 2, t);
            s.elevate = {1, 0};
            s.refine = {scaled(10, o.refinement), scaled(15, o.refinement)};
            j["patches"].push_back(to_json(s));
        }
    }
    j["strips"] = "auto";
    j["constraints"] = Json::array();
    for (int q = 0; q < 4; ++q) {
        j["constraints"].push_back(edge_constraint(q, "u0", 1, "yz"));
        j["constraints"].push_back(edge_constraint(4 + q, "u1", 1, "yz"));
    }
    j["constraints"].push_back({{"patch", 0}, {"points", {0}}, {"components", "x"}});
    // Patch 0 spans 0..90 degrees on the first half; its corner (1, 1) is the top
    // point at mid-length. Patch 2 reaches the bottom point at its corner (1, 1).
    j["loads"] = {{{"type", "point"}, {"patch", 0}, {"xi", {1.0, 1.0}}, {"vector", {0.0, 0.0, -1000.0}}},
                  {{"type", "point"}, {"patch", 2}, {"xi", {1.0, 1.0}}, {"vector", {0.0, 0.0, 1000.0}}}};
    j["monitors"] = {{{"name", "A"}, {"patch", 0}, {"xi", {1.0, 1.0}}}};
    j["solver"] = {{"method", "arc_length"}, {"radius", 40.0}, {"min_radius", 1e-3}, {"max_radius", 400.0},
                   {"max_steps", 300}, {"desired_iterations", 6}, {"residual_tol", 1e-7},
                   {"displacement_tol", 1e-9}, {"max_iterations", 30}, {"stop_monitor", "A"},
                   {"stop_component", "z"}, {"stop_displacement", 250.0}};
    return j;
}

Json hex_can(const BenchmarkOptions& o) {
    const double a = 1.0, H = 2.0, t = 0.02;
    const int n = o.refinement > 0 ? o.refinement : 4;
    Json j = model_header(std::string("Hexagonal can under internal pressure, ") +
                          (o.strips ? "with bending strips" : "without bending strips"));
    j["materials"] = {material_stvk(1e5, 0.3)};
    j["patches"] = Json::array();
    for (int k = 0; k < 6; ++k) {
        const double t0 = k * pi / 3, t1 = (k + 1) * pi / 3;
        PatchSpec s;
        s.degrees = {1, 1};
        s.thickness = t;
        for (double z : {0.0, H}) {
            s.points.push_back({a * std::cos(t0), a * std::sin(t0), z, 1.0});
            s.points.push_back({a * std::cos(t1), a * std::sin(t1), z, 1.0});
        }
        s.elevate = {1, 1};
        s.refine = {n, 2 * n};
        j["patches"].push_back(to_json(s));
    }
    j["strips"] = o.strips ? "auto" : "none";
    j["constraints"] = Json::array();
    for (int k = 0; k < 6; ++k) {
        j["constraints"].push_back(edge_constraint(k, "v0", 1, "xyz"));
        j["constraints"].push_back(edge_constraint(k, "v1", 1, "xyz"));
    }
    j["loads"] = Json::array();
    for (int k = 0; k < 6; ++k) j["loads"].push_back({{"type", "pressure"}, {"patch", k}, {"value", 2.0}});
    j["monitors"] = {{{"name", "face"}, {"patch", 0}, {"xi", {0.5, 0.5}}},
                     {{"name", "corner"}, {"patch", 0}, {"xi", {0.0, 0.5}}}};
    j["solver"] = {{"method", "newton"}, {"increments", 10}, {"final_load", 1.0}, {"residual_tol", 1e-8},
                   {"displacement_tol", 1e-10}, {"max_iterations", 30}, {"max_cutbacks", 4}};
    return j;
}

}  // namespace

std::vector<std::string> benchmark_names() { return {"1", "2", "3", "4", "hexcan"}; }

Json benchmark(const std::string& name, const BenchmarkOptions& options) {
    if (name == "1") return semi_cylinder(options);
    if (name == "2") return hyperelastic_cylinder(options);
    if (name == "3") return scordelis_lo(options);
    if (name == "4") return plastic_cylinder(options);
    if (name == "hexcan") return hex_can(options);
    throw ValidationError("unknown benchmark '" + name + "' (expected 1, 2, 3, 4 or hexcan)");
}

}  // namespace igashell::io
