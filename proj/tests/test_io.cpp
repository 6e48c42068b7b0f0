#include <doctest.h>

#include "fixtures.hpp"
#include "igashell/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

using namespace igashell;
using io::Json;

namespace {

const std::filesystem::path models_dir = IGASHELL_MODELS_DIR;

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "igashell_test_io";
    std::filesystem::create_directories(dir);
    return dir / name;
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
    std::ifstream in(path);
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);) lines.push_back(line);
    return lines;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, sep);) out.push_back(item);
    return out;
}

std::string error_of(const Json& j) {
    try {
        io::model_from_json(j);
    } catch (const ValidationError& e) {
        return e.what();
    }
    return "";
}

Json plate_model(int n = 2) {
    Json j = io::benchmark("hexcan");
    const auto plate = fixture::flat_plate(2.0, 1.0, 2, 1);
    Json cps = Json::array();
    for (const auto& x : plate.points()) cps.push_back({x[0], x[1], x[2], 1.0});
    j["patches"] = {{{"degrees", {2, 2}},
                     {"knots", {plate.knots(0).values(), plate.knots(1).values()}},
                     {"control_points", cps},
                     {"thickness", 0.1},
                     {"material", 0},
                     {"refine", {n, n}}}};
    j["strips"] = "none";
    j["constraints"] = {{{"patch", 0}, {"edge", "u0"}, {"components", "xyz"}}};
    j["loads"] = {{{"type", "area"}, {"patch", 0}, {"vector", {0.0, 0.0, 1.0}}}};
    j["monitors"] = {{{"name", "tip"}, {"patch", 0}, {"xi", {1.0, 0.5}}}};
    return j;
}

}  // namespace

TEST_CASE("model files: every benchmark survives parse, serialize, parse") {
    for (const auto& name : io::benchmark_names()) {
        CAPTURE(name);
        const solver::Model a = io::model_from_json(io::benchmark(name));
        const std::string text = io::model_to_json(a).dump(1);
        const solver::Model b = io::model_from_json(Json::parse(text));
        CHECK(io::same_model(a, b));
        CHECK(io::model_to_json(b).dump(1) == text);
    }
}

TEST_CASE("model files: bundled files match the benchmark builders") {
    const std::vector<std::pair<std::string, std::string>> files{
        {"example1.json", "1"}, {"example2.json", "2"}, {"example3.json", "3"}, {"example4.json", "4"},
        {"hexcan.json", "hexcan"}};
    for (const auto& [file, name] : files) {
        CAPTURE(file);
        const solver::Model parsed = io::parse_model(models_dir / file);
        CHECK(io::same_model(parsed, io::model_from_json(io::benchmark(name))));
    }
    io::BenchmarkOptions bare;
    bare.strips = false;
    CHECK(io::same_model(io::parse_model(models_dir / "hexcan_nostrips.json"),
                         io::model_from_json(io::benchmark("hexcan", bare))));
}

TEST_CASE("model files: the pinched cylinder has 4 patches and 552 cubic elements") {
    const solver::Model m = io::parse_model(models_dir / "example2.json");
    REQUIRE(m.patches.size() == 4);
    std::size_t elements = 0;
    for (const auto& p : m.patches) {
        CHECK(p.degree(0) == 3);
        CHECK(p.degree(1) == 3);
        elements += p.num_elements();
    }
    CHECK(elements == 552);
    // Exact circle after elevation and refinement.
    const auto& p = m.patches[1];
    for (int k = 0; k <= 20; ++k) {
        const Vec3 x = splines::surface_point(p, 0.37, k / 20.0);
        CHECK(std::abs(x[1] * x[1] + x[2] * x[2] - 8100.0) <= 1e-10 * 8100.0);
    }
    const solver::Analysis a(m);
    CHECK(a.strips().size() == 4);
}

TEST_CASE("model files: errors name the offending field") {
    const Json base = io::benchmark("2");

    Json j = base;
    j["patches"][1]["control_points"][3][3] = -0.5;
    CHECK(error_of(j).find("$.patches[1].control_points[3][3]") == 0);
    CHECK(error_of(j).find("weight must be positive") != std::string::npos);

    j = base;
    j["patches"][0]["thickness"] = "thin";
    CHECK(error_of(j).find("$.patches[0].thickness: expected a number") == 0);

    j = base;
    j["patches"][2]["knots"][0] = {0.0, 0.5, 1.0};
    CHECK(error_of(j).find("$.patches[2].knots[0]") == 0);

    j = base;
    j["patches"][0]["control_points"].erase(0);
    CHECK(error_of(j).find("$.patches[0].control_points: expected 6 control points") == 0);

    j = base;
    j["materials"][0]["kind"] = "rubber";
    CHECK(error_of(j).find("$.materials[0].kind") == 0);

    j = base;
    j["loads"][0]["edge"] = "w2";
    CHECK(error_of(j).find("$.loads[0].edge") == 0);

    j = base;
    j["monitors"][0]["patch"] = 7;
    CHECK(error_of(j).find("$.monitors[0].patch: no patch 7") == 0);

    j = base;
    j["constraints"][0]["points"] = {10000};
    CHECK(error_of(j).find("$.constraints[0].points[0]") == 0);

    j = base;
    j["constraints"][0]["components"] = "xw";
    CHECK(error_of(j).find("$.constraints[0].components") == 0);

    j = base;
    j["solver"]["increments"] = 0;
    CHECK(error_of(j).find("$.solver.increments: must be >= 1") == 0);

    j = base;
    j["solver"]["tolerance"] = 1e-3;
    CHECK(error_of(j).find("$.solver: unknown field 'tolerance'") == 0);

    j = base;
    j["version"] = 2;
    CHECK(error_of(j).find("$.version") == 0);

    j = base;
    j.erase("patches");
    CHECK(error_of(j).find("$: missing field 'patches'") == 0);

    j = io::benchmark("3");
    j["solver"]["stop_monitor"] = "B";
    CHECK(error_of(j).find("$.solver.stop_monitor") == 0);

    CHECK_THROWS_AS(io::parse_model(scratch("missing.json")), ValidationError);
    std::ofstream(scratch("broken.json")) << "{\"format\": ";
    CHECK_THROWS_AS(io::parse_model(scratch("broken.json")), ValidationError);
    CHECK_THROWS_AS(io::benchmark("5"), ValidationError);
}

TEST_CASE("model files: edge constraints expand to rows of control points") {
    Json j = plate_model(2);
    j["constraints"][0]["rows"] = 2;
    j["constraints"][0]["components"] = "z";
    const solver::Model m = io::model_from_json(j);
    REQUIRE(m.constraints.size() == 1);
    const auto& c = m.constraints[0];
    CHECK(c.points.size() == 8);
    CHECK(c.components == std::array<bool, 3>{false, false, true});
    for (int id : c.points) CHECK(id % 4 <= 1);
}

TEST_CASE("history csv: header, column count, precision") {
    const solver::Model m = io::model_from_json(io::benchmark("hexcan"));
    solver::SolutionHistory h;
    const auto path = scratch("history.csv");

    io::write_history(h, m, path);
    auto lines = read_lines(path);
    REQUIRE(lines.size() == 1);
    CHECK(lines[0] == "step,lambda,face_x,face_y,face_z,corner_x,corner_y,corner_z,iterations");

    for (int s = 1; s <= 3; ++s) {
        solver::StepRecord r;
        r.step = s;
        r.lambda = s / 3.0;
        r.monitors = {Vec3(1.0 / 7.0, -2e-9 * s, 12345.678901234), Vec3(0.0, std::sqrt(2.0), -1.0 / 3.0)};
        r.iterations = s + 2;
        h.append(r);
    }
    io::write_history(h, m, path);
    lines = read_lines(path);
    REQUIRE(lines.size() == 4);
    for (std::size_t k = 1; k < lines.size(); ++k) {
        const auto cols = split(lines[k], ',');
        REQUIRE(cols.size() == 1 + 1 + 3 * m.monitors.size() + 1);
        const auto& r = h.steps()[k - 1];
        CHECK(std::stoi(cols[0]) == r.step);
        CHECK(std::abs(std::stod(cols[1]) - r.lambda) <= 1e-9 * std::abs(r.lambda));
        for (int q = 0; q < 2; ++q) {
            for (int i = 0; i < 3; ++i) {
                const double v = r.monitors[q][i];
                CHECK(std::abs(std::stod(cols[2 + 3 * q + i]) - v) <= 1e-9 * std::abs(v));
            }
        }
        CHECK(std::stoi(cols.back()) == r.iterations);
    }
}

TEST_CASE("surface mesh: undeformed flat patch") {
    const solver::Analysis a(io::model_from_json(plate_model(3)));
    const solver::State s = a.initial_state();
    for (int n : {2, 5}) {
        const auto raw = io::sample_surface(a, s, n, false);
        CHECK(raw.points.size() == a.elements().size() * (n + 1) * (n + 1));
        CHECK(raw.quads.size() == a.elements().size() * n * n);
        const auto welded = io::sample_surface(a, s, n, true);
        CHECK(welded.points.size() == static_cast<std::size_t>((3 * n + 1) * (3 * n + 1)));
        CHECK(welded.quads.size() == raw.quads.size());
        for (std::size_t k = 0; k < welded.points.size(); ++k) {
            CHECK(welded.points[k][2] == 0.0);
            CHECK(welded.displacement[k] == 0.0);
        }
        for (const auto& q : welded.quads) {
            // Counter-clockwise, nondegenerate cells.
            const Vec3 e1 = welded.points[q[1]] - welded.points[q[0]];
            const Vec3 e2 = welded.points[q[3]] - welded.points[q[0]];
            CHECK(e1.cross(e2)[2] > 0.0);
        }
    }
    CHECK_THROWS_AS(io::sample_surface(a, s, 1), DomainError);
    CHECK_THROWS_AS(io::write_surface(a, s, scratch("bad.vtk"), 1), DomainError);
}

TEST_CASE("surface mesh: legacy VTK layout and displacement scalar") {
    const solver::Analysis a(io::model_from_json(plate_model(2)));
    solver::State s = a.initial_state();
    for (int k = 0; k < a.dofs().num_nodes(); ++k) s.u[3 * k + 2] = 0.25;
    const auto path = scratch("plate.vtk");
    io::write_surface(a, s, path, 2);
    const auto lines = read_lines(path);
    REQUIRE(lines.size() > 10);
    CHECK(lines[0] == "# vtk DataFile Version 3.0");
    CHECK(lines[2] == "ASCII");
    CHECK(lines[3] == "DATASET UNSTRUCTURED_GRID");
    CHECK(lines[4] == "POINTS 25 double");
    CHECK(lines[5 + 25] == "CELLS 16 80");
    CHECK(lines[5 + 25 + 1 + 16] == "CELL_TYPES 16");
    const std::size_t data = 5 + 25 + 1 + 16 + 1 + 16;
    CHECK(lines[data] == "POINT_DATA 25");
    CHECK(lines[data + 1] == "SCALARS displacement double 1");
    for (int k = 0; k < 25; ++k) {
        CHECK(std::stod(lines[data + 3 + k]) == doctest::Approx(0.25).epsilon(1e-12));
        CHECK(std::stod(split(lines[5 + k], ' ')[2]) == doctest::Approx(0.25).epsilon(1e-12));
    }
}

TEST_CASE("interface kink: zero at rest and under rigid motion") {
    const solver::Analysis a(io::model_from_json(io::benchmark("hexcan")));
    solver::State s = a.initial_state();
    CHECK(io::max_interface_kink(a, s) <= 1e-10);
    const Mat3 Q = Eigen::AngleAxisd(0.7, Vec3(1.0, 2.0, 3.0).normalized()).toRotationMatrix();
    const Vec3 c(0.3, -0.2, 1.5);
    for (int k = 0; k < a.dofs().num_nodes(); ++k) {
        const Vec3& X = a.dofs().coords[k];
        s.u.segment<3>(3 * k) = Q * X + c - X;
    }
    CHECK(io::max_interface_kink(a, s) <= 1e-8);
    // Folding one vertical edge line inward by a known amount changes the kink.
    s = a.initial_state();
    const auto itf = solver::find_interfaces(a.model(), a.dofs());
    REQUIRE(itf.size() == 6);
    for (int node : itf[0].boundary) {
        const Vec3& X = a.dofs().coords[node];
        s.u.segment<3>(3 * node) = -0.05 * Vec3(X[0], X[1], 0.0);
    }
    CHECK(io::max_interface_kink(a, s) > 1.0);
}
