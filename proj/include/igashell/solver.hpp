#pragma once

// Multi-patch models, dof numbering, sparse assembly and the two
// continuation drivers (load control and cylindrical arc length).

#include "igashell/common.hpp"
#include "igashell/element.hpp"
#include "igashell/material.hpp"
#include "igashell/splines.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <array>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace igashell::solver {

using SparseMatrix = Eigen::SparseMatrix<double>;

struct MaterialSpec {
    std::string kind;      ///< stvk, neo_hookean or j2_plastic
    double E = 0.0;
    double nu = 0.0;
    double mu = 0.0;       ///< neo_hookean only
    double lambda = 0.0;   ///< neo_hookean only
    double sigma_y = 0.0;  ///< j2_plastic: k(alpha) = sigma_y + H alpha
    double H = 0.0;

    bool operator==(const MaterialSpec&) const = default;
};

std::shared_ptr<const material::Material> make_material(const MaterialSpec& spec);

/// A control point of one patch.
struct PointRef {
    int patch = 0;
    int point = 0;
    bool operator==(const PointRef&) const = default;
};

/// Zero displacement for the masked components of a set of control points.
struct Constraint {
    int patch = 0;
    std::vector<int> points;
    std::array<bool, 3> components{true, true, true};
    bool operator==(const Constraint&) const = default;
};

enum class LoadKind { point, line, area, pressure };

/// Reference load, scaled by the load factor.
struct Load {
    LoadKind kind = LoadKind::point;
    int patch = 0;
    Vec2 xi = Vec2::Zero();                        ///< point loads
    element::Edge edge = element::Edge::u0;        ///< line loads
    Vec3 vector = Vec3::Zero();                    ///< force, force per length or per area
    double pressure = 0.0;                         ///< along the reference normal
    bool operator==(const Load&) const = default;
};

/// History output location: a control point, or a surface point when xi is set.
struct Monitor {
    std::string name;
    int patch = 0;
    int point = 0;
    std::optional<Vec2> xi;
    bool operator==(const Monitor&) const = default;
};

struct ExplicitStrip {
    std::vector<std::array<PointRef, 3>> triples;
    bool operator==(const ExplicitStrip&) const = default;
};

struct StripSettings {
    bool automatic = false;
    double modulus_factor = 1e4;          ///< E_strip / E of the stiffer neighbour
    std::vector<ExplicitStrip> explicit_strips;
    bool operator==(const StripSettings&) const = default;
};

struct NewtonSettings {
    double residual_tol = 1e-8;        ///< relative to the first residual of the step
    double displacement_tol = 1e-10;   ///< relative to the displacement norm
    int max_iterations = 25;
    int increments = 1;
    double final_load = 1.0;
    int max_cutbacks = 0;              ///< bisections of a failed increment
    bool operator==(const NewtonSettings&) const = default;
};

struct ArcLengthSettings {
    double radius = 1.0;
    double min_radius = 1e-6;
    double max_radius = 1e6;
    int max_steps = 100;
    int desired_iterations = 5;
    int max_retries = 8;
    double residual_tol = 1e-8;
    double displacement_tol = 1e-10;
    int max_iterations = 25;
    double max_load_factor = std::numeric_limits<double>::infinity();
    int stop_monitor = -1;             ///< stop once |u| of this monitor component exceeds stop_displacement
    int stop_component = 2;
    double stop_displacement = std::numeric_limits<double>::infinity();
    bool operator==(const ArcLengthSettings&) const = default;
};

enum class Method { newton, arc_length };

struct Model {
    std::vector<splines::NurbsPatch> patches;
    std::vector<MaterialSpec> materials;
    std::vector<int> patch_material;
    int thickness_points = 0;          ///< 0 picks 3 for elastic and 5 for plastic materials
    StripSettings strips;
    std::vector<Constraint> constraints;
    std::vector<Load> loads;
    std::vector<Monitor> monitors;
    Method method = Method::newton;
    NewtonSettings newton;
    ArcLengthSettings arc_length;
};

/// Checks cross references and parameter ranges; throws ValidationError.
void validate_model(const Model& model);

/// Control point numbering after interface merging.
struct DofMap {
    std::vector<std::vector<int>> node;    ///< [patch][local point] -> global node
    std::vector<Vec3> coords;
    double tolerance = 0.0;
    std::vector<int> equation;             ///< 3 node + i -> free equation or -1
    int num_free = 0;

    int num_nodes() const { return static_cast<int>(coords.size()); }
    int num_dofs() const { return 3 * num_nodes(); }
};

/// Coincident control points within 1e-8 of the bounding-box diagonal share a node.
DofMap merge_interfaces(const Model& model);

/// Two patch edges that share their boundary nodes. Edge b is traversed in
/// the direction that matches edge a.
struct Interface {
    int patch_a = 0;
    element::Edge edge_a = element::Edge::u0;
    int patch_b = 0;
    element::Edge edge_b = element::Edge::u0;
    bool reversed = false;
    std::vector<int> boundary;    ///< global nodes along the interface
    std::vector<int> inner_a;     ///< next row into patch a
    std::vector<int> inner_b;     ///< next row into patch b, aligned with boundary
};

std::vector<Interface> find_interfaces(const Model& model, const DofMap& dofs);

/// Strips for every edge shared by two patch boundaries.
std::vector<element::BendingStrip> detect_strips(const Model& model, const DofMap& dofs);

struct State {
    VecX u;                                                 ///< 3 N, all nodes
    double lambda = 0.0;
    std::vector<std::vector<element::PointHistory>> history;   ///< per element
};

struct Assembly {
    SparseMatrix K;          ///< free x free
    VecX internal;           ///< 3 N
    VecX residual;           ///< internal - lambda f_ref, 3 N
    double energy = 0.0;
    int plastic_points = 0;
    std::vector<std::vector<element::PointHistory>> trial;
};

class Analysis {
public:
    explicit Analysis(Model model);

    const Model& model() const { return model_; }
    const DofMap& dofs() const { return dofs_; }
    const std::vector<element::ShellElement>& elements() const { return elements_; }
    const std::vector<int>& element_material() const { return element_material_; }
    const std::vector<element::BendingStrip>& strips() const { return strips_; }
    const std::vector<element::StripElement>& strip_elements() const { return strip_elements_; }
    const material::Material& material(int element) const { return *materials_[element_material_[element]]; }
    const VecX& reference_load() const { return f_ref_; }

    State initial_state() const;

    /// Internal force, residual and (optionally) the free-dof tangent at state.u.
    Assembly assemble(const State& state, double lambda, bool want_tangent) const;

    VecX restrict_free(const VecX& full) const;
    void add_free(const VecX& free, VecX& full) const;
    VecX reactions(const Assembly& a) const;

    /// Displacement of the mid-surface at a monitor.
    Vec3 monitor_displacement(const State& state, int monitor) const;
    /// Element displacements gathered from the nodal vector.
    std::vector<Vec3> element_displacements(const State& state, int element) const;
    Vec3 surface_displacement(const State& state, int patch, const Vec2& xi) const;

private:
    Model model_;
    DofMap dofs_;
    std::vector<std::shared_ptr<const material::Material>> materials_;
    std::vector<element::ShellElement> elements_;
    std::vector<int> element_material_;
    std::vector<element::BendingStrip> strips_;
    std::vector<element::StripElement> strip_elements_;
    VecX f_ref_;
};

/// Sparse LU with the symbolic analysis reused while the pattern is unchanged.
class LinearSolver {
public:
    VecX solve(const SparseMatrix& K, const VecX& rhs);
    void factorize(const SparseMatrix& K);
    VecX solve(const VecX& rhs) const;

private:
    Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu_;
    bool analyzed_ = false;
    Eigen::Index rows_ = -1;
    Eigen::Index nonzeros_ = -1;
};

struct StepRecord {
    int step = 0;
    double lambda = 0.0;
    std::vector<Vec3> monitors;
    int iterations = 0;
    int plastic_points = 0;
    std::vector<double> residual_norms;   ///< free residual norm before each solve and at exit
};

class SolutionHistory {
public:
    void append(StepRecord record);
    const std::vector<StepRecord>& steps() const { return steps_; }
    std::size_t size() const { return steps_.size(); }
    bool empty() const { return steps_.empty(); }
    const StepRecord& back() const { return steps_.back(); }
    int total_iterations() const;

private:
    std::vector<StepRecord> steps_;
};

struct NewtonReport {
    int iterations = 0;
    int plastic_points = 0;
    std::vector<double> residual_norms;
};

/// Equilibrium at load factor lambda starting from state; commits displacement
/// and history on convergence, leaves state untouched on failure.
NewtonReport newton_solve(const Analysis& analysis, State& state, double lambda, const NewtonSettings& settings,
                          LinearSolver& linear);

using StepObserver = std::function<void(const StepRecord&, const State&)>;

/// Equal load increments up to settings.final_load.
SolutionHistory load_control_solve(const Analysis& analysis, State& state, const NewtonSettings& settings,
                                   const StepObserver& observer = {});

/// Crisfield cylindrical arc length on the displacement norm.
SolutionHistory arc_length_solve(const Analysis& analysis, State& state, const ArcLengthSettings& settings,
                                 const StepObserver& observer = {});

/// Runs the method selected in the model.
SolutionHistory solve(const Analysis& analysis, State& state, const StepObserver& observer = {});

/// Observed order from the last three residual norms above floor:
/// log(r3 / r2) / log(r2 / r1). NaN when fewer than three remain.
double convergence_exponent(const std::vector<double>& norms, double floor);

/// Largest |S33| / |S| over all material points of a state.
double max_transverse_stress_ratio(const Analysis& analysis, const State& state);

}  // namespace igashell::solver
