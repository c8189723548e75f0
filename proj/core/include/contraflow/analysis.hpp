#pragma once

#include "contraflow/integrators.hpp"
#include "contraflow/metric.hpp"
#include "contraflow/types.hpp"

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace contraflow {

using RateFn = std::function<double(double)>;

/// Implicit-scheme bound d0 * prod_{m=1..k} (1 + h rate(m h))^{-1}.
/// Constant rate specializes to (1 + h rate)^{-k} d0.
[[nodiscard]] double implicit_envelope(int k, double h, const RateFn& rate_fn, double d0);

/// Explicit-scheme bound d0 * prod_{m=0..k-1} (1 - 2 h rate(m h) + h^2 ell^2)^{1/2}.
/// Each sampled factor must lie in [0, 1); otherwise the step is outside the
/// admissible window and this throws.
[[nodiscard]] double explicit_envelope(int k, double h, const RateFn& rate_fn, double lipschitz,
                                       double d0);

/// Moving-optimum bound (1+h rate)^{-k} d0 + rho_step sum_{m=1..k} (1+h rate)^{-m}.
[[nodiscard]] double tracking_envelope_implicit(int k, double h, double rate, double rho_step,
                                                double d0);
/// Its k -> infinity limit rho_step / (h rate).
[[nodiscard]] double tracking_implicit_limit(double h, double rate, double rho_step);

/// Moving-optimum bound fac^k d0 + rho_step sum_{m=0..k-1} fac^m with
/// fac = (1 - 2 h rate + h^2 ell^2)^{1/2}.
[[nodiscard]] double tracking_envelope_explicit(int k, double h, double rate, double lipschitz,
                                                double rho_step, double d0);
/// Its limit rho_step / (1 - fac).
[[nodiscard]] double tracking_explicit_limit(double h, double rate, double lipschitz,
                                             double rho_step);

/// Continuous-time bound (d0 - B) e^{-rate t} + B with the ultimate bound
/// B = sqrt(2 lambda_max(P)) (rho/mu) / rate.
[[nodiscard]] double tracking_envelope_continuous(double t, double rate, double lambda_max_P,
                                                  double rho, double mu, double d0);
[[nodiscard]] double tracking_continuous_bound(double rate, double lambda_max_P, double rho,
                                               double mu);

enum class LyapunovKind { distance, field_norm };

struct LyapunovResult {
    bool pass = false;
    std::vector<double> values;       // V along the trajectory
    double worst_violation = 0.0;     // most negative decay-margin
};

/// Checks V(t_{j+1}) <= V(t_j) e^{-2 rate dt} + 1e-8 along a reference
/// trajectory for V = ||z - z*||_P^2 or V = ||F(z)||_P^2. The factor 2 is
/// because V is a squared norm. Discrete-scheme trajectories are rejected;
/// they have their own envelopes.
[[nodiscard]] LyapunovResult lyapunov_check(const FlowField& field, const Metric& metric,
                                            const Trajectory& traj, LyapunovKind kind,
                                            double rate, const Vector& zstar = Vector());

/// Least-squares slope of log(series) over the trailing fraction, reported
/// as the per-step factor e^{slope}. The fit truncates at the first
/// nonpositive tail entry; fewer than 3 usable points is an error.
[[nodiscard]] double empirical_rate(std::span<const double> series, double tail_fraction);

/// Theoretical bound series paired with an observed series.
struct EnvelopeReport {
    std::string experiment_id;
    Scheme scheme = Scheme::explicit_euler;
    std::vector<double> bound_series;
    std::vector<double> observed_series;
    std::vector<double> margin_series;  // bound - observed
    bool pass = false;                  // min margin >= -1e-8
    // metadata
    double h = 0.0;
    double rate = 0.0;
    std::optional<double> lipschitz;
    std::optional<double> rho_step;
    std::optional<double> envelope_limit;
    Eigen::Matrix2d metric_block = Eigen::Matrix2d::Identity();
    std::string observed_kind = "dist_P";  // or "f_gap"
    double d0 = 0.0;
    double min_margin = 0.0;

    void finalize();
};

inline constexpr double kEnvelopeTolerance = 1e-8;

}  // namespace contraflow
