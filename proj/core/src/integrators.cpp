#include "contraflow/integrators.hpp"

#include "contraflow/csv.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <sstream>

namespace contraflow {

const char* to_string(Scheme s) noexcept {
    switch (s) {
        case Scheme::explicit_euler: return "explicit";
        case Scheme::implicit_euler: return "implicit";
        case Scheme::rk4_reference: return "rk4_reference";
        case Scheme::nesterov: return "nesterov";
    }
    return "unknown";
}

Vector explicit_euler_step(const FlowField& field, const Vector& y, double t, double h) {
    if (h <= 0.0) throw std::invalid_argument("explicit_euler_step: h must be > 0");
    return y + h * field.eval_stacked(y, t);
}

namespace {

Matrix numeric_jacobian(const FlowField& field, const Vector& y, double t) {
    const Index m = y.size();
    const double base = 1e-7 * (1.0 + y.norm());
    Matrix J(m, m);
    Vector e = y;
    const Vector f0 = field.eval_stacked(y, t);
    for (Index j = 0; j < m; ++j) {
        e[j] = y[j] + base;
        J.col(j) = (field.eval_stacked(e, t) - f0) / base;
        e[j] = y[j];
    }
    return J;
}

Vector damped_fixed_point(const FlowField& field, const Vector& y, double t, double h,
                          const StepConfig& cfg, Vector w, int iters_used,
                          StepDiagnostics* diag) {
    const double ell = field.lipschitz_hint.value_or(1.0);
    const double relax = 1.0 / (1.0 + h * ell);
    double res = std::numeric_limits<double>::infinity();
    for (int it = iters_used; it < cfg.solver_max_iter; ++it) {
        const Vector target = y + h * field.eval_stacked(w, t);
        res = (target - w).norm();
        if (diag) {
            diag->solver_iterations = it;
            diag->residual = res;
        }
        if (res <= cfg.solver_tol) return w;
        w += relax * (target - w);
    }
    const Vector target = y + h * field.eval_stacked(w, t);
    res = (target - w).norm();
    if (res <= cfg.solver_tol) {
        if (diag) {
            diag->solver_iterations = cfg.solver_max_iter;
            diag->residual = res;
        }
        return w;
    }
    std::ostringstream msg;
    msg << "implicit_euler_step: solver did not reach tolerance, residual " << res;
    throw SolverError(msg.str(), res, cfg.solver_max_iter);
}

}  // namespace

Vector implicit_euler_step(const FlowField& field, const Vector& y, double t_next,
                           const StepConfig& cfg, StepDiagnostics* diag) {
    cfg.validate();
    const double h = cfg.h;
    Vector w = y;
    Vector r = -(h * field.eval_stacked(w, t_next));  // R(w) = w - y - h F(w, t)
    double res = r.norm();
    if (diag) {
        diag->solver_iterations = 0;
        diag->residual = res;
    }
    if (res <= cfg.solver_tol) return w;

    if (cfg.implicit_solver == ImplicitSolver::fixed_point)
        return damped_fixed_point(field, y, t_next, h, cfg, std::move(w), 0, diag);

    Matrix JR;
    Eigen::PartialPivLU<Matrix> lu;
    bool factored = false;
    int stall = 0;
    for (int it = 1; it <= cfg.solver_max_iter; ++it) {
        if (!factored || !field.jacobian_is_constant) {
            const Matrix JF = field.jacobian ? field.jacobian(w, t_next)
                                             : numeric_jacobian(field, w, t_next);
            JR = Matrix::Identity(w.size(), w.size()) - h * JF;
            lu.compute(JR);
            factored = true;
        }
        const Vector step = lu.solve(r);
        if (!step.allFinite())
            return damped_fixed_point(field, y, t_next, h, cfg, std::move(w), it, diag);
        w -= step;
        r = w - y - h * field.eval_stacked(w, t_next);
        const double next_res = r.norm();
        if (diag) {
            diag->solver_iterations = it;
            diag->residual = next_res;
        }
        if (next_res <= cfg.solver_tol) return w;
        stall = next_res > 0.9 * res ? stall + 1 : 0;
        res = next_res;
        if (stall >= 3)
            return damped_fixed_point(field, y, t_next, h, cfg, std::move(w), it, diag);
    }
    std::ostringstream msg;
    msg << "implicit_euler_step: Newton did not reach tolerance, residual " << res;
    throw SolverError(msg.str(), res, cfg.solver_max_iter);
}

std::pair<Vector, Vector> nesterov_step(const ObjectiveSpec& obj, const Vector& y1,
                                        const Vector& y2) {
    if (obj.time_varying)
        throw std::invalid_argument("nesterov_step: objective must be time-invariant");
    const double sl = std::sqrt(obj.lip), sm = std::sqrt(obj.mu);
    const double momentum = (sl - sm) / (sl + sm);
    Vector y1n = y2 - obj.grad(y2, 0.0) / obj.lip;
    Vector y2n = y1n + momentum * (y1n - y1);
    return {std::move(y1n), std::move(y2n)};
}

double optimal_explicit_step(double rate, double lipschitz) {
    if (!(rate > 0.0) || !(rate < lipschitz))
        throw std::domain_error("optimal_explicit_step: requires 0 < rate < lipschitz");
    return rate / (lipschitz * lipschitz);
}

double explicit_window(double rate, double lipschitz) {
    return 2.0 * rate / (lipschitz * lipschitz);
}

double field_lipschitz_bound(double kappa, const Metric& metric) {
    const double beta = acceleration_beta(kappa);
    return std::sqrt(metric.lambda_max() / metric.lambda_min() *
                     (3.0 + 2.0 * beta + 2.0 * beta * beta));
}

double acconest_optimal_step(double kappa, const Metric& metric, StepVariant variant) {
    const double beta = acceleration_beta(kappa);
    const double base = 1.0 / (std::sqrt(kappa) * (3.0 + 2.0 * beta + 2.0 * beta * beta));
    const double ratio = metric.lambda_min() / metric.lambda_max();
    const double h =
        variant == StepVariant::proof ? base * ratio : base * std::sqrt(ratio);
    const double rate = 1.0 / std::sqrt(kappa);
    const double ell = field_lipschitz_bound(kappa, metric);
    const double window = explicit_window(rate, ell);
    if (!(h > 0.0) || !(h < window)) {
        std::ostringstream msg;
        msg << "acconest_optimal_step: step " << h << " falls outside the admissible window (0, "
            << window << "); the square-rooted eigenvalue ratio exceeds it whenever "
            << "lambda_max/lambda_min > 4";
        throw std::logic_error(msg.str());
    }
    return h;
}

namespace {

Vector rk4_single(const FlowField& field, const Vector& y, double t, double h) {
    const Vector k1 = field.eval_stacked(y, t);
    const Vector k2 = field.eval_stacked(y + 0.5 * h * k1, t + 0.5 * h);
    const Vector k3 = field.eval_stacked(y + 0.5 * h * k2, t + 0.5 * h);
    const Vector k4 = field.eval_stacked(y + h * k3, t + h);
    return y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

Vector rk4_substepped(const FlowField& field, const Vector& y, double t, double h, int substeps) {
    Vector w = y;
    const double hh = h / substeps;
    for (int i = 0; i < substeps; ++i) w = rk4_single(field, w, t + i * hh, hh);
    return w;
}

// 64 substeps, doubled until consecutive refinements agree to 1e-10 per unit
// time of the step.
Vector rk4_reference_step(const FlowField& field, const Vector& y, double t, double h) {
    const double tol = 1e-10 * h;
    int m = 64;
    Vector prev = rk4_substepped(field, y, t, h, m);
    for (int round = 0; round < 7; ++round) {
        m *= 2;
        Vector next = rk4_substepped(field, y, t, h, m);
        if ((next - prev).lpNorm<Eigen::Infinity>() <= tol) return next;
        prev = std::move(next);
    }
    return prev;
}

}  // namespace

Trajectory integrate(const FlowField& field, const FlowState& y0, Scheme scheme,
                     const StepConfig& cfg, int steps) {
    if (steps < 1) throw std::invalid_argument("integrate: steps must be >= 1");
    if (scheme == Scheme::nesterov)
        throw std::invalid_argument("integrate: the closed-form iteration is driven by nesterov_step");
    cfg.validate();
    if (y0.frame != field.frame)
        throw std::invalid_argument("integrate: initial state frame does not match field");

    Trajectory traj;
    traj.frame = field.frame;
    traj.scheme = scheme;
    traj.times.reserve(steps + 1);
    traj.states.reserve(steps + 1);
    traj.per_step_diag.reserve(steps);
    traj.times.push_back(0.0);
    traj.states.push_back(y0.stacked());

    Vector y = y0.stacked();
    for (int k = 1; k <= steps; ++k) {
        const double t_prev = (k - 1) * cfg.h;
        const double t_next = k * cfg.h;
        StepDiagnostics diag;
        try {
            switch (scheme) {
                case Scheme::explicit_euler:
                    y = explicit_euler_step(field, y, t_prev, cfg.h);
                    break;
                case Scheme::implicit_euler:
                    y = implicit_euler_step(field, y, t_next, cfg, &diag);
                    break;
                case Scheme::rk4_reference:
                    y = rk4_reference_step(field, y, t_prev, cfg.h);
                    break;
                case Scheme::nesterov:
                    break;
            }
        } catch (const SolverError& e) {
            throw IntegrationError(std::string(e.what()) + " at step " + std::to_string(k), k);
        }
        traj.times.push_back(t_next);
        traj.states.push_back(y);
        traj.per_step_diag.push_back(diag);
    }
    return traj;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const Metric& metric,
                          const std::function<Vector(double)>& zstar) {
    const Index n = traj.states.empty() ? 0 : traj.states.front().size() / 2;
    os << "k,t";
    for (Index i = 0; i < n; ++i) os << ",x1_" << i;
    for (Index i = 0; i < n; ++i) os << ",x2_" << i;
    os << ",dist_P_to_opt,solver_iters,residual\n";
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const Vector& y = traj.states[k];
        const double t = traj.times[k];
        const Vector zs = zstar(t);
        os << format_int(static_cast<std::int64_t>(k)) << ',' << format_double(t);
        for (Index i = 0; i < 2 * n; ++i) os << ',' << format_double(y[i]);
        os << ',' << format_double(metric.norm(y - zs));
        if (k == 0 || k - 1 >= traj.per_step_diag.size()) {
            os << ",0,0";
        } else {
            const auto& d = traj.per_step_diag[k - 1];
            os << ',' << format_int(d.solver_iterations) << ',' << format_double(d.residual);
        }
        os << '\n';
    }
}

}  // namespace contraflow
