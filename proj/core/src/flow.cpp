#include "contraflow/flow.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

namespace contraflow {

MomentumParams MomentumParams::accelerated(double kappa, double lip) {
    const double beta = acceleration_beta(kappa);
    return MomentumParams(2.0 / (std::sqrt(kappa) + 1.0), 1.0 / lip, beta, beta, 1.0 / lip);
}

FlowField general_momentum_field(const MomentumParams& params, const ObjectiveSpec& obj) {
    if (obj.time_varying)
        throw ConstructionError("general_momentum_field: objective must be time-invariant");
    FlowField f;
    f.state_dim = 2 * obj.dim;
    f.frame = Frame::original;
    std::ostringstream id;
    id << "momentum(a=" << params.a << ",b=" << params.b << ",c=" << params.c
       << ",d=" << params.d << ",e=" << params.e << ")|" << obj.name;
    f.id = id.str();
    const Index n = obj.dim;
    auto grad = obj.grad;
    const MomentumParams p = params;
    f.eval_stacked = [p, grad, n](const Vector& z, double t) {
        const Vector x1 = z.head(n), x2 = z.tail(n);
        const Vector g = grad(x1 + p.d * x2, t);
        Vector out(2 * n);
        out.head(n) = p.c * x2 - p.e * g;
        out.tail(n) = -p.a * x2 - p.b * g;
        return out;
    };
    if (obj.has_hessian()) {
        auto hess = obj.hessian;
        f.jacobian = [p, hess, n](const Vector& z, double t) {
            const Matrix H = hess(z.head(n) + p.d * z.tail(n), t);
            Matrix J = Matrix::Zero(2 * n, 2 * n);
            J.topLeftCorner(n, n) = -p.e * H;
            J.topRightCorner(n, n) = p.c * Matrix::Identity(n, n) - p.e * p.d * H;
            J.bottomLeftCorner(n, n) = -p.b * H;
            J.bottomRightCorner(n, n) = -p.a * Matrix::Identity(n, n) - p.b * p.d * H;
            return J;
        };
        f.jacobian_is_constant = obj.hessian_is_constant;
    }
    return f;
}

FlowField acconest_field(const ObjectiveSpec& obj) {
    const double kappa = obj.kappa();
    const double beta = acceleration_beta(kappa);
    const double L = obj.lip;

    FlowField f;
    f.state_dim = 2 * obj.dim;
    f.frame = Frame::barred;
    std::ostringstream id;
    id << "acconest(kappa=" << kappa << ")|" << obj.name;
    f.id = id.str();
    f.claimed_rate = std::sqrt(obj.mu / obj.lip);
    f.metric_hint = Metric::from_condition(kappa, 1.0 + 1.0 / (2.0 * kappa), obj.dim);
    // ||F(x)-F(z)||_2^2 <= (3 + 2 beta + 2 beta^2) ||x-z||_2^2 for unit-free
    // gradient scaling 1/L; crude but sufficient for solver damping.
    f.lipschitz_hint = std::sqrt(3.0 + 2.0 * beta + 2.0 * beta * beta);

    const Index n = obj.dim;
    auto grad = obj.grad;
    f.eval_stacked = [beta, L, grad, n](const Vector& z, double t) {
        const Vector x1 = z.head(n), x2 = z.tail(n);
        const Vector g = grad(x2, t);
        const Vector diff = x2 - x1;
        Vector out(2 * n);
        out.head(n) = diff - g / L;
        out.tail(n) = beta * diff - (beta + 1.0) / L * g;
        return out;
    };

    if (obj.has_hessian()) {
        auto hess = obj.hessian;
        f.jacobian = [beta, L, hess, n](const Vector& z, double t) {
            const Matrix H = hess(z.tail(n), t);
            Matrix J = Matrix::Zero(2 * n, 2 * n);
            J.topLeftCorner(n, n) = -Matrix::Identity(n, n);
            J.topRightCorner(n, n) = Matrix::Identity(n, n) - H / L;
            J.bottomLeftCorner(n, n) = -beta * Matrix::Identity(n, n);
            J.bottomRightCorner(n, n) = beta * Matrix::Identity(n, n) - (beta + 1.0) / L * H;
            return J;
        };
        f.jacobian_is_constant = obj.hessian_is_constant;
        // Per Hessian eigenvalue q, the mode matrix on (x1, x2) coefficients:
        //   [[-1, 1 - q/L], [-beta, beta - (beta+1) q/L]].
        f.mode_jacobians = [beta, L, hess, n](double t) {
            const Matrix H = hess(Vector::Zero(n), t);
            Eigen::SelfAdjointEigenSolver<Matrix> es(H, Eigen::EigenvaluesOnly);
            std::vector<Eigen::Matrix2d> modes;
            modes.reserve(n);
            for (Index i = 0; i < n; ++i) {
                const double s = es.eigenvalues()[i] / L;
                Eigen::Matrix2d m;
                m << -1.0, 1.0 - s, -beta, beta - (beta + 1.0) * s;
                modes.push_back(m);
            }
            return modes;
        };
    }
    return f;
}

FlowState to_barred(const FlowState& s, double d) {
    if (s.frame != Frame::original)
        throw std::invalid_argument("to_barred: state must be in the original frame");
    return FlowState(s.x1, s.x1 + d * s.x2, Frame::barred);
}

FlowState to_original(const FlowState& s, double d) {
    if (s.frame != Frame::barred)
        throw std::invalid_argument("to_original: state must be in the barred frame");
    if (d == 0.0) throw std::invalid_argument("to_original: d must be nonzero");
    return FlowState(s.x1, (s.x2 - s.x1) / d, Frame::original);
}

FlowState equilibrium(const FlowField& field, const ObjectiveSpec& obj, double t) {
    Vector xstar;
    if (obj.has_minimizer()) {
        xstar = obj.minimizer(t);
    } else {
        // Gradient descent with step 1/L is a contraction on this class.
        xstar = Vector::Zero(obj.dim);
        const double step = 1.0 / obj.lip;
        const int budget = 1000000;
        bool converged = false;
        for (int i = 0; i < budget; ++i) {
            const Vector g = obj.grad(xstar, t);
            if (g.norm() <= 1e-8) {
                converged = true;
                break;
            }
            xstar -= step * g;
        }
        if (!converged && obj.grad(xstar, t).norm() > 1e-8)
            throw SolverError("equilibrium: gradient descent did not reach tolerance",
                              obj.grad(xstar, t).norm(), budget);
    }
    FlowState result = field.frame == Frame::barred
                           ? FlowState(xstar, xstar, Frame::barred)
                           : FlowState(xstar, Vector::Zero(obj.dim), Frame::original);
    const double residual = field.eval_stacked(result.stacked(), t).norm();
    if (residual > 1e-8)
        throw SolverError("equilibrium: field residual exceeds tolerance", residual, 0);
    return result;
}

}  // namespace contraflow
