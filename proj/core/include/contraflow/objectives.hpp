#pragma once

#include "contraflow/rng.hpp"
#include "contraflow/types.hpp"

#include <functional>
#include <optional>
#include <string>

namespace contraflow {

/// Gradient/value oracle for a mu-strongly-convex, L-smooth objective,
/// optionally time-varying. Oracles are pure functions of (point, time);
/// time-invariant objectives ignore the time argument.
struct ObjectiveSpec {
    Index dim = 0;
    double mu = 0.0;
    double lip = 0.0;
    std::function<double(const Vector&, double)> value;
    std::function<Vector(const Vector&, double)> grad;
    /// Hessian when available in closed form (quadratics); empty otherwise.
    std::function<Matrix(const Vector&, double)> hessian;
    bool hessian_is_constant = false;
    /// Minimizer trajectory when known in closed form; empty otherwise.
    std::function<Vector(double)> minimizer;
    bool time_varying = false;
    /// Continuous-time bound on ||d/dt grad f||; the per-step bound over a
    /// step h is rate * h (chord length for rotating centers).
    std::optional<double> grad_time_rate;
    std::string name;

    [[nodiscard]] double kappa() const { return lip / mu; }
    [[nodiscard]] bool has_minimizer() const { return static_cast<bool>(minimizer); }
    [[nodiscard]] bool has_hessian() const { return static_cast<bool>(hessian); }
};

/// f(x) = 1/2 (x-c)' Q (x-c). mu and lip are the extreme eigenvalues of Q.
[[nodiscard]] ObjectiveSpec make_quadratic(const Matrix& Q, const Vector& c);

/// Convenience: diagonal quadratic from its spectrum.
[[nodiscard]] ObjectiveSpec make_quadratic_diag(const Vector& eigs, const Vector& c);

/// Planar quadratic whose center moves on the circle c(t) = r (cos wt, sin wt).
/// grad_time_rate carries the analytic bound lambda_max(Q) * r * |w|.
[[nodiscard]] ObjectiveSpec make_rotating_quadratic(double radius, double omega, const Matrix& Q);

/// f(x) = log sum_i exp(a_i'x + b_i) + ridge/2 ||x||^2.
/// mu = ridge, lip = ridge + ||A||_2^2. No closed-form minimizer.
[[nodiscard]] ObjectiveSpec make_logsumexp_ridge(const Matrix& A, const Vector& b, double ridge);

/// Worst sampled class ratios against the declared (mu, lip).
struct ClassReport {
    double worst_strong_convexity = 0.0;  // min of <dg,dx>/||dx||^2
    double worst_smoothness = 0.0;        // max of ||dg||/||dx||
    int pairs_used = 0;
    int pairs_skipped = 0;
    bool pass = false;
};

struct ClassSampler {
    double radius = 10.0;
    std::uint64_t seed = 1;
    double time = 0.0;
};

/// Spot-checks the defining inequalities
///   mu ||x-y||^2 <= (grad f(x) - grad f(y))'(x-y),
///   ||grad f(x) - grad f(y)|| <= L ||x-y||
/// on `count` pairs sampled uniformly in a ball around the minimizer (or the
/// origin). Pass/fail at 1e-9 relative tolerance.
[[nodiscard]] ClassReport validate_class(const ObjectiveSpec& obj, const ClassSampler& sampler,
                                         int count);

/// Central finite-difference gradient, the test oracle for analytic gradients.
[[nodiscard]] Vector finite_difference_gradient(const ObjectiveSpec& obj, const Vector& x,
                                                double t, double step = 1e-6);

}  // namespace contraflow
