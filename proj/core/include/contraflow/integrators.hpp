#pragma once

#include "contraflow/flow.hpp"
#include "contraflow/metric.hpp"
#include "contraflow/objectives.hpp"
#include "contraflow/types.hpp"

#include <functional>
#include <optional>
#include <ostream>
#include <utility>
#include <vector>

namespace contraflow {

enum class ImplicitSolver { newton, fixed_point };

struct StepConfig {
    double h = 1.0;
    ImplicitSolver implicit_solver = ImplicitSolver::newton;
    double solver_tol = 1e-12;
    int solver_max_iter = 200;

    void validate() const {
        if (h <= 0.0) throw std::invalid_argument("StepConfig: h must be > 0");
        if (solver_tol <= 0.0) throw std::invalid_argument("StepConfig: solver_tol must be > 0");
        if (solver_max_iter < 1)
            throw std::invalid_argument("StepConfig: solver_max_iter must be >= 1");
    }
};

struct StepDiagnostics {
    int solver_iterations = 0;
    double residual = 0.0;
};

enum class Scheme { explicit_euler, implicit_euler, rk4_reference, nesterov };

[[nodiscard]] const char* to_string(Scheme s) noexcept;

/// Time-stamped state series; times are strictly increasing and t_k = k h.
struct Trajectory {
    std::vector<double> times;
    std::vector<Vector> states;  // stacked
    Frame frame = Frame::barred;
    Scheme scheme = Scheme::explicit_euler;
    std::vector<StepDiagnostics> per_step_diag;  // one entry per step taken

    [[nodiscard]] std::size_t size() const noexcept { return states.size(); }
    [[nodiscard]] FlowState state(std::size_t i) const {
        return FlowState::from_stacked(states.at(i), frame);
    }
};

/// One forward Euler step y + h F(y, t).
[[nodiscard]] Vector explicit_euler_step(const FlowField& field, const Vector& y, double t,
                                         double h);

/// One backward Euler step: the root of R(w) = w - y - h F(w, t_next).
/// Newton with the exact Jacobian when available (constant Jacobians make
/// this a direct linear solve) and forward differences otherwise; falls back
/// to a damped fixed-point iteration if Newton stalls.
[[nodiscard]] Vector implicit_euler_step(const FlowField& field, const Vector& y, double t_next,
                                         const StepConfig& cfg,
                                         StepDiagnostics* diag = nullptr);

/// Textbook accelerated iteration:
///   y1+ = y2 - (1/L) grad f(y2)
///   y2+ = y1+ + ((sqrt(L)-sqrt(mu))/(sqrt(L)+sqrt(mu))) (y1+ - y1).
[[nodiscard]] std::pair<Vector, Vector> nesterov_step(const ObjectiveSpec& obj, const Vector& y1,
                                                      const Vector& y2);

/// Step size minimizing 1 - 2 h rate + h^2 ell^2, namely rate / ell^2; the
/// per-step contraction factor there is sqrt(1 - rate^2/ell^2).
/// Requires 0 < rate < ell.
[[nodiscard]] double optimal_explicit_step(double rate, double lipschitz);

/// P-weighted Lipschitz bound of the accelerated field:
///   sqrt((lambda_max(P)/lambda_min(P)) (3 + 2 beta + 2 beta^2)).
[[nodiscard]] double field_lipschitz_bound(double kappa, const Metric& metric);

/// The two published forms of the accelerated flow's optimal explicit step.
/// `proof` uses the plain eigenvalue ratio and equals
/// optimal_explicit_step(sqrt(mu/L), field_lipschitz_bound(kappa, P)), the
/// midpoint of the admissible window. `statement` uses the square-rooted
/// ratio and can leave the window when lambda_max/lambda_min > 4, in which
/// case this throws a consistency error.
enum class StepVariant { statement, proof };

[[nodiscard]] double acconest_optimal_step(double kappa, const Metric& metric,
                                           StepVariant variant);

/// Admissible explicit window upper bound 2 rate / ell^2.
[[nodiscard]] double explicit_window(double rate, double lipschitz);

/// Fixed-step integration from y0 over `steps` steps with t_k = k h.
/// rk4_reference subdivides each step (64 substeps, doubled until two
/// refinements agree to 1e-10 h) for a continuous-time ground truth.
[[nodiscard]] Trajectory integrate(const FlowField& field, const FlowState& y0, Scheme scheme,
                                   const StepConfig& cfg, int steps);

/// CSV columns: k, t, x1_0..x1_{n-1}, x2_0..x2_{n-1}, dist_P_to_opt,
/// solver_iters, residual.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const Metric& metric,
                          const std::function<Vector(double)>& zstar);

}  // namespace contraflow
