#pragma once

#include "contraflow/metric.hpp"
#include "contraflow/objectives.hpp"
#include "contraflow/types.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace contraflow {

/// Coefficients of the momentum family
///   x1' = c x2 - e grad f(x1 + d x2)
///   x2' = -a x2 - b grad f(x1 + d x2).
/// d = e = 0 is the plain heavy-ball-type flow; e = 0 keeps only the
/// displaced gradient.
struct MomentumParams {
    double a, b, c;
    double d = 0.0;
    double e = 0.0;

    MomentumParams(double a, double b, double c, double d = 0.0, double e = 0.0)
        : a(a), b(b), c(c), d(d), e(e) {
        if (a <= 0.0 || b <= 0.0 || c <= 0.0)
            throw ConstructionError("MomentumParams: a, b, c must be > 0");
        if (d < 0.0 || e < 0.0)
            throw ConstructionError("MomentumParams: d, e must be >= 0");
    }

    /// The assignment under which the barred-coordinate flow becomes the
    /// accelerated flow: a = 2/(sqrt(k)+1), b = e = 1/L, c = d = beta.
    static MomentumParams accelerated(double kappa, double lip);
};

/// Vector field on the stacked state (x1, x2), immutable after construction.
/// Evaluation is pure and deterministic.
struct FlowField {
    Index state_dim = 0;  // 2n
    Frame frame = Frame::barred;
    std::string id;
    std::function<Vector(const Vector&, double)> eval_stacked;
    /// Exact Jacobian of the stacked field when available.
    std::function<Matrix(const Vector&, double)> jacobian;
    /// Per-mode 2x2 Jacobians for block-structured linearizations
    /// (quadratic objectives); used for closed-form measures.
    std::function<std::vector<Eigen::Matrix2d>(double)> mode_jacobians;
    std::optional<double> claimed_rate;
    std::optional<Metric> metric_hint;
    /// 2-norm Lipschitz bound when known; used for damped fixed-point steps.
    std::optional<double> lipschitz_hint;
    bool jacobian_is_constant = false;

    [[nodiscard]] Index dim_n() const noexcept { return state_dim / 2; }

    [[nodiscard]] FlowState eval(const FlowState& s, double t) const {
        if (s.frame != frame)
            throw std::invalid_argument("FlowField: state frame does not match field frame");
        if (2 * s.dim() != state_dim)
            throw std::invalid_argument("FlowField: state dimension mismatch");
        return FlowState::from_stacked(eval_stacked(s.stacked(), t), frame);
    }
};

[[nodiscard]] inline double acceleration_beta(double kappa) {
    const double sk = std::sqrt(kappa);
    return (sk - 1.0) / (sk + 1.0);
}

/// Momentum family field in original (position, velocity) coordinates.
/// Requires a time-invariant objective.
[[nodiscard]] FlowField general_momentum_field(const MomentumParams& params,
                                               const ObjectiveSpec& obj);

/// The accelerated flow in barred coordinates, time-varying capable:
///   x1' = x2 - x1 - (1/L) grad f(x2, t)
///   x2' = beta (x2 - x1) - ((beta+1)/L) grad f(x2, t)
/// with beta = (sqrt(k)-1)/(sqrt(k)+1). The second-row coefficient is stored
/// as (beta+1)/L, algebraically equal to 2 sqrt(k)/((sqrt(k)+1) L).
/// claimed_rate is sqrt(mu/L); metric_hint is the condition-number metric at
/// the midpoint gamma.
[[nodiscard]] FlowField acconest_field(const ObjectiveSpec& obj);

/// Barred coordinates from original ones: (x1, x1 + d x2). The same linear
/// map transports derivatives.
[[nodiscard]] FlowState to_barred(const FlowState& s, double d);
[[nodiscard]] FlowState to_original(const FlowState& s, double d);

/// Equilibrium pair of the field at time t: (x*(t), x*(t)) in the barred
/// frame, (x*(t), 0) in the original frame. Uses the closed-form minimizer
/// when present, else gradient descent with step 1/L to gradient norm 1e-8
/// within 10^6 iterations. The field residual at the result is <= 1e-8.
[[nodiscard]] FlowState equilibrium(const FlowField& field, const ObjectiveSpec& obj, double t);

}  // namespace contraflow
