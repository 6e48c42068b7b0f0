#include "igashell/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace igashell::solver {

void LinearSolver::factorize(const SparseMatrix& K) {
    if (!analyzed_ || K.rows() != rows_ || K.nonZeros() != nonzeros_) {
        lu_.analyzePattern(K);
        analyzed_ = true;
        rows_ = K.rows();
        nonzeros_ = K.nonZeros();
    }
    lu_.factorize(K);
    if (lu_.info() != Eigen::Success) throw SolverError("sparse LU factorization failed: singular tangent");
}

VecX LinearSolver::solve(const VecX& rhs) const {
    VecX x = lu_.solve(rhs);
    if (!x.allFinite()) throw SolverError("linear solve produced non-finite values");
    return x;
}

VecX LinearSolver::solve(const SparseMatrix& K, const VecX& rhs) {
    factorize(K);
    return solve(rhs);
}

void SolutionHistory::append(StepRecord record) {
    if (!steps_.empty() && record.step <= steps_.back().step) {
        throw DomainError("solution history: step indices must increase");
    }
    steps_.push_back(std::move(record));
}

int SolutionHistory::total_iterations() const {
    int n = 0;
    for (const auto& s : steps_) n += s.iterations;
    return n;
}

namespace {

StepRecord make_record(const Analysis& analysis, const State& state, int step, int iterations, int plastic,
                       std::vector<double> norms) {
    StepRecord r;
    r.step = step;
    r.lambda = state.lambda;
    for (std::size_t m = 0; m < analysis.model().monitors.size(); ++m) {
        r.monitors.push_back(analysis.monitor_displacement(state, static_cast<int>(m)));
    }
    r.iterations = iterations;
    r.plastic_points = plastic;
    r.residual_norms = std::move(norms);
    return r;
}

void commit(State& state, VecX u, double lambda, Assembly& a) {
    state.u = std::move(u);
    state.lambda = lambda;
    state.history = std::move(a.trial);
}

}  // namespace

NewtonReport newton_solve(const Analysis& analysis, State& state, double lambda, const NewtonSettings& settings,
                          LinearSolver& linear) {
    NewtonReport report;
    VecX u = state.u;
    State probe{u, lambda, state.history};
    double r0 = 0.0;
    double last_step = std::numeric_limits<double>::infinity();
    for (int it = 0;; ++it) {
        probe.u = u;
        Assembly a = analysis.assemble(probe, lambda, it < settings.max_iterations);
        const VecX R = analysis.restrict_free(a.residual);
        const double rn = R.norm();
        report.residual_norms.push_back(rn);
        if (it == 0) r0 = rn;
        const bool residual_ok = rn <= settings.residual_tol * r0 || rn == 0.0;
        const bool step_ok = it > 0 && last_step <= settings.displacement_tol * u.norm();
        if (residual_ok || step_ok) {
            report.iterations = it;
            report.plastic_points = a.plastic_points;
            commit(state, std::move(u), lambda, a);
            return report;
        }
        if (it == settings.max_iterations) {
            std::ostringstream msg;
            msg << "Newton did not converge in " << settings.max_iterations << " iterations at load factor " << lambda
                << " (residual " << rn << ", initial " << r0 << ")";
            throw ConvergenceError(msg.str(), rn);
        }
        const VecX du = linear.solve(a.K, -R);
        analysis.add_free(du, u);
        last_step = du.norm();
    }
}

SolutionHistory load_control_solve(const Analysis& analysis, State& state, const NewtonSettings& settings,
                                   const StepObserver& observer) {
    SolutionHistory history;
    LinearSolver linear;
    const double start = state.lambda;
    const double dlam = (settings.final_load - start) / settings.increments;
    for (int step = 1; step <= settings.increments; ++step) {
        const double target = step == settings.increments ? settings.final_load : start + step * dlam;
        int iterations = 0;
        int plastic = 0;
        std::vector<double> norms;
        // Sub-increments of the current load step; a failure halves the remaining piece.
        double piece = target - state.lambda;
        int depth = 0;
        while (state.lambda != target) {
            const double next = std::abs(target - state.lambda) <= std::abs(piece) ? target : state.lambda + piece;
            try {
                const NewtonReport r = newton_solve(analysis, state, next, settings, linear);
                iterations += r.iterations;
                plastic = r.plastic_points;
                norms = r.residual_norms;
            } catch (const ConvergenceError&) {
                if (++depth > settings.max_cutbacks) throw;
                piece *= 0.5;
            } catch (const MaterialError& err) {
                if (++depth > settings.max_cutbacks) {
                    throw ConvergenceError(std::string("load step failed: ") + err.what(),
                                           std::numeric_limits<double>::quiet_NaN());
                }
                piece *= 0.5;
            }
        }
        StepRecord rec = make_record(analysis, state, step, iterations, plastic, std::move(norms));
        if (observer) observer(rec, state);
        history.append(std::move(rec));
    }
    return history;
}

namespace {

struct ArcStep {
    int iterations = 0;
    int plastic = 0;
    std::vector<double> norms;
    VecX increment;
    SparseMatrix tangent;   ///< consistent tangent at the converged point
};

class StepRejected : public Error {
public:
    using Error::Error;
};

// The predictor uses the consistent tangent of the previous converged step when
// available: reassembled at a committed state, plastic points report elastic.
ArcStep arc_step(const Analysis& analysis, State& state, double radius, const VecX& previous,
                 const SparseMatrix* tangent, const ArcLengthSettings& s, LinearSolver& linear) {
    const VecX f = analysis.restrict_free(analysis.reference_load());
    const double fnorm = f.norm();
    if (fnorm == 0.0) throw DomainError("arc length: reference load is zero");
    ArcStep out;

    Assembly a;
    if (tangent) {
        linear.factorize(*tangent);
    } else {
        a = analysis.assemble(state, state.lambda, true);
        linear.factorize(a.K);
    }
    VecX dut = linear.solve(f);
    double sign = 1.0;
    if (previous.size() > 0 && dut.dot(previous) < 0.0) sign = -1.0;
    double dlam = sign * radius / dut.norm();
    VecX du = dlam * dut;

    State probe{state.u, state.lambda + dlam, state.history};
    double last_correction = std::numeric_limits<double>::infinity();
    for (int it = 0;; ++it) {
        probe.u = state.u;
        analysis.add_free(du, probe.u);
        probe.lambda = state.lambda + dlam;
        a = analysis.assemble(probe, probe.lambda, it < s.max_iterations);
        const VecX R = analysis.restrict_free(a.residual);
        const double rn = R.norm();
        out.norms.push_back(rn);
        const bool residual_ok = rn <= s.residual_tol * std::abs(probe.lambda) * fnorm;
        const bool step_ok = it > 0 && last_correction <= s.displacement_tol * probe.u.norm();
        if (residual_ok || step_ok) {
            if (previous.size() > 0 && du.dot(previous) <= 0.0) {
                throw StepRejected("arc length step reversed the path direction");
            }
            out.iterations = it;
            out.plastic = a.plastic_points;
            out.increment = du;
            out.tangent = std::move(a.K);
            commit(state, std::move(probe.u), probe.lambda, a);
            return out;
        }
        if (it == s.max_iterations) {
            std::ostringstream msg;
            msg << "arc length step did not converge (residual " << rn << ")";
            throw ConvergenceError(msg.str(), rn);
        }
        linear.factorize(a.K);
        const VecX dur = linear.solve(-R);
        dut = linear.solve(f);
        const VecX base = du + dur;
        const double a1 = dut.squaredNorm();
        const double a2 = 2.0 * dut.dot(base);
        const double a3 = base.squaredNorm() - radius * radius;
        const double disc = a2 * a2 - 4.0 * a1 * a3;
        if (disc < 0.0) throw StepRejected("arc length constraint has complex roots");
        const double sq = std::sqrt(disc);
        const double q = -0.5 * (a2 + std::copysign(sq, a2));
        double r1 = q / a1;
        double r2 = q != 0.0 ? a3 / q : -r1;
        const VecX& ref = previous.size() > 0 ? previous : du;
        const double c1 = (base + r1 * dut).dot(ref);
        const double c2 = (base + r2 * dut).dot(ref);
        const double dl = c1 >= c2 ? r1 : r2;
        const VecX correction = dur + dl * dut;
        du = base + dl * dut;
        dlam += dl;
        last_correction = correction.norm();
    }
}

}  // namespace

SolutionHistory arc_length_solve(const Analysis& analysis, State& state, const ArcLengthSettings& s,
                                 const StepObserver& observer) {
    SolutionHistory history;
    LinearSolver linear;
    double radius = s.radius;
    VecX previous;
    SparseMatrix tangent;
    for (int step = 1; step <= s.max_steps; ++step) {
        ArcStep result;
        for (int attempt = 0;; ++attempt) {
            try {
                result = arc_step(analysis, state, radius, previous, tangent.rows() > 0 ? &tangent : nullptr, s, linear);
                break;
            } catch (const StepRejected& err) {
                if (attempt >= s.max_retries) throw ConvergenceError(err.what(), std::numeric_limits<double>::quiet_NaN());
            } catch (const ConvergenceError&) {
                if (attempt >= s.max_retries) throw;
            } catch (const MaterialError& err) {
                if (attempt >= s.max_retries) {
                    throw ConvergenceError(std::string("arc length step failed: ") + err.what(),
                                           std::numeric_limits<double>::quiet_NaN());
                }
            }
            radius *= 0.5;
            if (radius < s.min_radius) {
                throw ConvergenceError("arc length radius fell below its lower bound", std::numeric_limits<double>::quiet_NaN());
            }
        }
        previous = result.increment;
        tangent = std::move(result.tangent);
        StepRecord rec = make_record(analysis, state, step, result.iterations, result.plastic, std::move(result.norms));
        if (observer) observer(rec, state);
        history.append(std::move(rec));

        const double factor = std::sqrt(static_cast<double>(s.desired_iterations) / std::max(result.iterations, 1));
        radius = std::clamp(radius * factor, s.min_radius, s.max_radius);

        if (std::abs(state.lambda) >= s.max_load_factor) break;
        if (s.stop_monitor >= 0) {
            const Vec3 u = analysis.monitor_displacement(state, s.stop_monitor);
            const double v = s.stop_component < 0 ? u.norm() : std::abs(u[s.stop_component]);
            if (v >= s.stop_displacement) break;
        }
    }
    return history;
}

double convergence_exponent(const std::vector<double>& norms, double floor) {
    std::vector<double> r;
    for (double v : norms)
        if (v > floor) r.push_back(v);
    if (r.size() < 3) return std::numeric_limits<double>::quiet_NaN();
    const std::size_t k = r.size() - 1;
    return std::log(r[k] / r[k - 1]) / std::log(r[k - 1] / r[k - 2]);
}

SolutionHistory solve(const Analysis& analysis, State& state, const StepObserver& observer) {
    if (analysis.model().method == Method::arc_length) {
        return arc_length_solve(analysis, state, analysis.model().arc_length, observer);
    }
    return load_control_solve(analysis, state, analysis.model().newton, observer);
}

}  // namespace igashell::solver
