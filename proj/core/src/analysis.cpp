#include "contraflow/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace contraflow {

double implicit_envelope(int k, double h, const RateFn& rate_fn, double d0) {
    if (k < 0) throw std::invalid_argument("implicit_envelope: k must be >= 0");
    if (h <= 0.0) throw std::invalid_argument("implicit_envelope: h must be > 0");
    double v = d0;
    for (int m = 1; m <= k; ++m) {
        const double r = rate_fn(m * h);
        if (r <= 0.0) throw std::domain_error("implicit_envelope: rate sample must be > 0");
        v /= 1.0 + h * r;
    }
    return v;
}

double explicit_envelope(int k, double h, const RateFn& rate_fn, double lipschitz, double d0) {
    if (k < 0) throw std::invalid_argument("explicit_envelope: k must be >= 0");
    if (h <= 0.0) throw std::invalid_argument("explicit_envelope: h must be > 0");
    double v = d0;
    for (int m = 0; m < k; ++m) {
        const double fac2 = 1.0 - 2.0 * h * rate_fn(m * h) + h * h * lipschitz * lipschitz;
        if (fac2 < 0.0 || fac2 >= 1.0)
            throw std::domain_error("explicit_envelope: step outside the admissible window");
        v *= std::sqrt(fac2);
    }
    return v;
}

double tracking_envelope_implicit(int k, double h, double rate, double rho_step, double d0) {
    if (k < 0) throw std::invalid_argument("tracking_envelope_implicit: k must be >= 0");
    if (h <= 0.0 || rate <= 0.0 || rho_step < 0.0)
        throw std::invalid_argument("tracking_envelope_implicit: bad parameters");
    const double q = 1.0 / (1.0 + h * rate);
    // d0 q^k + rho (q + ... + q^k)
    const double qk = std::pow(q, k);
    const double geo = k == 0 ? 0.0 : q * (1.0 - qk) / (1.0 - q);
    return d0 * qk + rho_step * geo;
}

double tracking_implicit_limit(double h, double rate, double rho_step) {
    return rho_step / (h * rate);
}

double tracking_envelope_explicit(int k, double h, double rate, double lipschitz, double rho_step,
                                  double d0) {
    if (k < 0) throw std::invalid_argument("tracking_envelope_explicit: k must be >= 0");
    const double fac2 = 1.0 - 2.0 * h * rate + h * h * lipschitz * lipschitz;
    if (fac2 < 0.0 || fac2 >= 1.0)
        throw std::domain_error("tracking_envelope_explicit: step outside the admissible window");
    const double fac = std::sqrt(fac2);
    const double fk = std::pow(fac, k);
    const double geo = fac == 0.0 ? (k >= 1 ? 1.0 : 0.0) : (1.0 - fk) / (1.0 - fac);
    return d0 * fk + rho_step * geo;
}

double tracking_explicit_limit(double h, double rate, double lipschitz, double rho_step) {
    const double fac2 = 1.0 - 2.0 * h * rate + h * h * lipschitz * lipschitz;
    if (fac2 < 0.0 || fac2 >= 1.0)
        throw std::domain_error("tracking_explicit_limit: step outside the admissible window");
    return rho_step / (1.0 - std::sqrt(fac2));
}

double tracking_continuous_bound(double rate, double lambda_max_P, double rho, double mu) {
    return std::sqrt(2.0 * lambda_max_P) * rho / (mu * rate);
}

double tracking_envelope_continuous(double t, double rate, double lambda_max_P, double rho,
                                    double mu, double d0) {
    if (t < 0.0) throw std::invalid_argument("tracking_envelope_continuous: t must be >= 0");
    if (rate <= 0.0 || lambda_max_P <= 0.0 || mu <= 0.0 || rho < 0.0)
        throw std::invalid_argument("tracking_envelope_continuous: bad parameters");
    const double B = tracking_continuous_bound(rate, lambda_max_P, rho, mu);
    return (d0 - B) * std::exp(-rate * t) + B;
}

LyapunovResult lyapunov_check(const FlowField& field, const Metric& metric,
                              const Trajectory& traj, LyapunovKind kind, double rate,
                              const Vector& zstar) {
    if (traj.scheme != Scheme::rk4_reference)
        throw std::invalid_argument(
            "lyapunov_check: continuous-time decay applies to reference trajectories only");
    LyapunovResult res;
    res.values.reserve(traj.size());
    for (std::size_t j = 0; j < traj.size(); ++j) {
        double v;
        if (kind == LyapunovKind::distance) {
            if (zstar.size() != traj.states[j].size())
                throw std::invalid_argument("lyapunov_check: zstar required for distance kind");
            const double d = metric.norm(traj.states[j] - zstar);
            v = d * d;
        } else {
            const double d = metric.norm(field.eval_stacked(traj.states[j], traj.times[j]));
            v = d * d;
        }
        res.values.push_back(v);
    }
    res.pass = true;
    res.worst_violation = 0.0;
    for (std::size_t j = 0; j + 1 < res.values.size(); ++j) {
        const double dt = traj.times[j + 1] - traj.times[j];
        const double allowed = res.values[j] * std::exp(-2.0 * rate * dt) + 1e-8;
        const double margin = allowed - res.values[j + 1];
        if (margin < res.worst_violation) res.worst_violation = margin;
        if (margin < 0.0) res.pass = false;
    }
    return res;
}

double empirical_rate(std::span<const double> series, double tail_fraction) {
    if (series.size() < 10) throw std::invalid_argument("empirical_rate: need at least 10 points");
    if (!(tail_fraction > 0.0 && tail_fraction <= 1.0))
        throw std::invalid_argument("empirical_rate: tail_fraction must be in (0, 1]");
    const std::size_t tail_len =
        std::max<std::size_t>(3, static_cast<std::size_t>(std::ceil(tail_fraction * series.size())));
    std::size_t begin = series.size() - std::min(tail_len, series.size());
    // Truncate at the first nonpositive entry (converged to machine zero).
    std::size_t end = series.size();
    for (std::size_t i = begin; i < series.size(); ++i) {
        if (!(series[i] > 0.0)) {
            end = i;
            break;
        }
    }
    const std::size_t m = end - begin;
    if (m < 3) throw std::runtime_error("empirical_rate: fewer than 3 usable tail points");
    // least squares slope of log(series[begin..end)) against the index
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const double x = static_cast<double>(i);
        const double y = std::log(series[begin + i]);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    const double dm = static_cast<double>(m);
    const double slope = (dm * sxy - sx * sy) / (dm * sxx - sx * sx);
    return std::exp(slope);
}

void EnvelopeReport::finalize() {
    if (bound_series.size() != observed_series.size())
        throw std::logic_error("EnvelopeReport: series length mismatch");
    margin_series.resize(bound_series.size());
    min_margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < bound_series.size(); ++i) {
        margin_series[i] = bound_series[i] - observed_series[i];
        min_margin = std::min(min_margin, margin_series[i]);
    }
    pass = min_margin >= -kEnvelopeTolerance;
}

}  // namespace contraflow
