// Command-line driver: run a model file, validate it, or run a bundled benchmark.

#include "igashell/io.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace igashell;

namespace {

struct RunOptions {
    fs::path out;
    int steps = 0;
    int mesh_every = 0;
    int mesh_subdivision = 4;
};

void print_model_summary(const solver::Analysis& a) {
    const auto& m = a.model();
    std::printf("patches %zu, elements %zu, strips %zu (%zu strip elements), nodes %d, free dofs %d\n",
                m.patches.size(), a.elements().size(), a.strips().size(), a.strip_elements().size(),
                a.dofs().num_nodes(), a.dofs().num_free);
}

int run_model(solver::Model model, const RunOptions& opt) {
    if (opt.steps > 0) {
        if (model.method == solver::Method::newton) model.newton.increments = opt.steps;
        else model.arc_length.max_steps = opt.steps;
    }
    fs::create_directories(opt.out);
    const solver::Analysis analysis(model);
    print_model_summary(analysis);
    solver::State state = analysis.initial_state();
    solver::SolutionHistory history;

    auto mesh_name = [&](int step) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "surface_%04d.vtk", step);
        return opt.out / buf;
    };
    auto observer = [&](const solver::StepRecord& rec, const solver::State& s) {
        history.append(rec);
        std::printf("step %4d  lambda %-14.8g iterations %2d", rec.step, rec.lambda, rec.iterations);
        for (std::size_t k = 0; k < rec.monitors.size(); ++k) {
            const Vec3& u = rec.monitors[k];
            std::printf("  %s (%.6g, %.6g, %.6g)", model.monitors[k].name.c_str(), u[0], u[1], u[2]);
        }
        std::printf("\n");
        std::fflush(stdout);
        if (opt.mesh_every > 0 && rec.step % opt.mesh_every == 0) {
            io::write_surface(analysis, s, mesh_name(rec.step), opt.mesh_subdivision);
        }
    };

    int status = 0;
    try {
        solver::solve(analysis, state, observer);
    } catch (const Error& e) {
        std::fprintf(stderr, "solver failure after %zu converged steps: %s\n", history.size(), e.what());
        if (!history.empty()) {
            const auto& last = history.back();
            std::fprintf(stderr, "last converged step %d at lambda %.10g (%d iterations)\n", last.step, last.lambda,
                         last.iterations);
        }
        status = 1;
    }
    io::write_history(history, model, opt.out / "history.csv");
    if (opt.mesh_every > 0 && !history.empty() && history.back().step % opt.mesh_every != 0) {
        io::write_surface(analysis, state, mesh_name(history.back().step), opt.mesh_subdivision);
    }
    if (status == 0) {
        std::printf("converged %zu steps, %d Newton iterations, final lambda %.10g\n", history.size(),
                    history.total_iterations(), state.lambda);
    }
    return status;
}

int validate(const fs::path& path) {
    const solver::Model model = io::parse_model(path);
    const solver::Analysis analysis(model);
    std::printf("%s: valid\n", path.string().c_str());
    print_model_summary(analysis);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Isogeometric Kirchhoff-Love shell solver"};
    app.require_subcommand(1);

    RunOptions run_opt;
    std::string model_path;
    auto* run = app.add_subcommand("run", "Solve a model file");
    run->add_option("model", model_path, "Model file (JSON)")->required()->check(CLI::ExistingFile);
    run->add_option("--out", run_opt.out, "Output directory")->required();
    run->add_option("--steps", run_opt.steps, "Load increments (Newton) or maximum arc-length steps")
        ->check(CLI::PositiveNumber);
    run->add_option("--mesh-every", run_opt.mesh_every, "Write a surface mesh every K converged steps")
        ->check(CLI::NonNegativeNumber);
    run->add_option("--mesh-subdivision", run_opt.mesh_subdivision, "Samples per element edge in meshes")
        ->check(CLI::Range(2, 64));

    std::string validate_path;
    auto* val = app.add_subcommand("validate", "Check a model file without solving");
    val->add_option("model", validate_path, "Model file (JSON)")->required()->check(CLI::ExistingFile);

    std::string bench_case;
    RunOptions bench_opt;
    io::BenchmarkOptions bench_settings;
    bool no_strips = false;
    bool model_only = false;
    auto* bench = app.add_subcommand("benchmarks", "Run a bundled benchmark");
    bench->add_option("--case", bench_case, "Benchmark")->required()->check(CLI::IsMember(io::benchmark_names()));
    bench->add_option("--out", bench_opt.out, "Output directory")->required();
    bench->add_option("--refinement", bench_settings.refinement, "Mesh density override")->check(CLI::NonNegativeNumber);
    bench->add_flag("--no-strips", no_strips, "Disable bending strips (hexcan)");
    bench->add_flag("--model-only", model_only, "Write model.json and stop");
    bench->add_option("--mesh-every", bench_opt.mesh_every, "Write a surface mesh every K converged steps")
        ->check(CLI::NonNegativeNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*run) {
            return run_model(io::parse_model(model_path), run_opt);
        }
        if (*val) return validate(validate_path);
        if (*bench) {
            bench_settings.strips = !no_strips;
            const io::Json description = io::benchmark(bench_case, bench_settings);
            fs::create_directories(bench_opt.out);
            std::ofstream(bench_opt.out / "model.json") << description.dump(2) << '\n';
            if (model_only) return 0;
            if (bench_opt.mesh_every == 0) bench_opt.mesh_every = 1000000;
            return run_model(io::model_from_json(description), bench_opt);
        }
    } catch (const ValidationError& e) {
        std::fprintf(stderr, "invalid model: %s\n", e.what());
        return 1;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
