#include "contraflow/contraction.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace contraflow {

double one_sided_lipschitz_estimate(const FlowField& field, const Metric& metric,
                                    PairSampler& sampler, int count,
                                    std::span<const double> times, int* skipped_out) {
    if (count < 1) throw std::invalid_argument("one_sided_lipschitz_estimate: count must be >= 1");
    if (metric.state_dim() != field.state_dim)
        throw std::invalid_argument("one_sided_lipschitz_estimate: metric/field dimension mismatch");
    if (times.empty()) throw std::invalid_argument("one_sided_lipschitz_estimate: no times given");

    Rng rng(sampler.seed);
    const Index dim = field.state_dim;
    const Vector center = sampler.center.size() == dim ? sampler.center : Vector::Zero(dim);

    double worst = -std::numeric_limits<double>::infinity();
    int used = 0, skipped = 0;
    // Partial results combine by max, so chunked or parallel evaluation
    // would yield the same estimate.
    for (int i = 0; i < count; ++i) {
        Vector x = rng.in_ball(center, sampler.radius);
        Vector z;
        if (i % 16 == 15) {
            z = x + sampler.near_pair_distance * rng.on_sphere(dim);
        } else {
            z = rng.in_ball(center, sampler.radius);
        }
        const Vector d = x - z;
        const double dist2 = metric.inner(d, d);
        if (dist2 < 1e-28) {
            ++skipped;
            continue;
        }
        for (double t : times) {
            const Vector df = field.eval_stacked(x, t) - field.eval_stacked(z, t);
            worst = std::max(worst, metric.inner(df, d) / dist2);
        }
        ++used;
    }
    if (used == 0) throw SamplingError("one_sided_lipschitz_estimate: all sampled pairs coincide");
    if (skipped_out) *skipped_out = skipped;
    return worst;
}

ContractionCertificate certify_contraction(const FlowField& field, const Metric& metric,
                                           double rate, const ObjectiveSpec& obj,
                                           const CertifyConfig& config) {
    if (metric.state_dim() != field.state_dim)
        throw std::invalid_argument("certify_contraction: metric/field dimension mismatch");

    ContractionCertificate cert;
    cert.field_id = field.id;
    cert.metric_block = metric.block();
    cert.dim_n = metric.dim_n();
    cert.claimed_rate = rate;

    PairSampler sampler;
    sampler.radius = config.radius;
    sampler.seed = config.seed;
    sampler.center = equilibrium(field, obj, config.times.front()).stacked();
    cert.worst_ratio = one_sided_lipschitz_estimate(field, metric, sampler, config.sample_count,
                                                    config.times, &cert.skipped_pairs);
    cert.sample_count = config.sample_count;

    if (field.mode_jacobians) {
        double worst = -std::numeric_limits<double>::infinity();
        for (double t : config.times)
            worst = std::max(worst, matrix_measure_modes(metric, field.mode_jacobians(t)));
        cert.worst_measure = worst;
    } else if (field.jacobian) {
        Rng rng(config.seed + 1);
        double worst = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < std::max(1, config.jacobian_probes); ++i) {
            const Vector x = i == 0 ? sampler.center : rng.in_ball(sampler.center, config.radius);
            for (double t : config.times)
                worst = std::max(worst, matrix_measure(metric, field.jacobian(x, t)));
            if (field.jacobian_is_constant) break;
        }
        cert.worst_measure = worst;
    }

    cert.pass = cert.worst_ratio <= -rate + kCertificateTolerance &&
                (!cert.worst_measure || *cert.worst_measure <= -rate + kCertificateTolerance);
    return cert;
}

nlohmann::ordered_json certificate_to_json(const ContractionCertificate& cert) {
    nlohmann::ordered_json j;
    j["field_id"] = cert.field_id;
    j["metric"] = {{"p_a", cert.metric_block(0, 0)},
                   {"p_b", cert.metric_block(0, 1)},
                   {"p_c", cert.metric_block(1, 1)},
                   {"n", cert.dim_n}};
    j["claimed_rate"] = cert.claimed_rate;
    j["worst_ratio"] = cert.worst_ratio;
    if (cert.worst_measure)
        j["worst_measure"] = *cert.worst_measure;
    else
        j["worst_measure"] = nullptr;
    j["sample_count"] = cert.sample_count;
    j["verdict"] = cert.pass ? "pass" : "fail";
    return j;
}

}  // namespace contraflow
