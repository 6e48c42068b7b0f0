#pragma once

// Model files (JSON), result files (CSV history, legacy VTK surfaces) and the
// bundled benchmark definitions.

#include "igashell/solver.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace igashell::io {

using Json = nlohmann::json;

inline constexpr int format_version = 1;

/// Builds a model from a parsed description. Refinement directives are applied
/// and edge constraints expanded. Errors carry the JSON path of the field.
solver::Model model_from_json(const Json& description);

solver::Model parse_model(const std::filesystem::path& path);

/// Canonical description of a model: refined patches, explicit point lists.
Json model_to_json(const solver::Model& model);

bool same_model(const solver::Model& a, const solver::Model& b);

/// `step,lambda,<name>_x,<name>_y,<name>_z,...,iterations`.
void write_history(const solver::SolutionHistory& history, const solver::Model& model,
                   const std::filesystem::path& path);

struct SurfaceMesh {
    std::vector<Vec3> points;              ///< deformed positions
    std::vector<double> displacement;      ///< magnitude per vertex
    std::vector<std::array<int, 4>> quads;
};

/// Samples every Bezier element on an n x n grid of quads; optionally welds
/// vertices closer than 1e-9 of the reference bounding-box diagonal.
SurfaceMesh sample_surface(const solver::Analysis& analysis, const solver::State& state, int n, bool weld = true);

void write_surface(const solver::Analysis& analysis, const solver::State& state, const std::filesystem::path& path,
                   int n);

/// Largest change, in degrees, of the angle between the two patch normals at
/// interface points relative to the reference configuration.
double max_interface_kink(const solver::Analysis& analysis, const solver::State& state, int samples = 16);

/// Benchmark descriptions: "1", "2", "3", "4", "hexcan". Options tune the
/// mesh density where the case allows it.
struct BenchmarkOptions {
    int refinement = 0;        ///< 0 keeps the default mesh
    bool strips = true;        ///< hexcan only
};

Json benchmark(const std::string& name, const BenchmarkOptions& options = {});

std::vector<std::string> benchmark_names();

}  // namespace igashell::io
