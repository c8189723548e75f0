#pragma once

#include "contraflow/flow.hpp"
#include "contraflow/metric.hpp"
#include "contraflow/rng.hpp"
#include "contraflow/types.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace contraflow {

/// Verdict tolerance, looser than the eigensolver accuracy and tighter than
/// any rate gap exercised by the tests.
inline constexpr double kCertificateTolerance = 1e-7;

/// Pair sampler for one-sided Lipschitz estimation: pairs drawn uniformly
/// from a ball around the equilibrium, with every 16th pair nearly
/// coincident (distance 1e-3) to probe the local Jacobian regime.
struct PairSampler {
    Vector center;
    double radius = 10.0;
    std::uint64_t seed = 1;
    double near_pair_distance = 1e-3;
};

/// Result of a numerical contraction check at a claimed rate.
struct ContractionCertificate {
    std::string field_id;
    Eigen::Matrix2d metric_block;
    Index dim_n = 0;
    double claimed_rate = 0.0;
    double worst_ratio = 0.0;  // most adverse sampled one-sided Lipschitz ratio
    std::optional<double> worst_measure;  // largest exact-Jacobian measure
    int sample_count = 0;
    int skipped_pairs = 0;
    bool pass = false;
};

/// Empirical upper estimate of -gamma over sampled pairs:
///   max over (x, z, t) of  (F(x,t) - F(z,t))' P (x - z) / ||x - z||_P^2.
/// A field contracting at rate g must yield a value <= -g. Coincident pairs
/// are skipped and counted; all pairs coincident is a sampling error.
[[nodiscard]] double one_sided_lipschitz_estimate(const FlowField& field, const Metric& metric,
                                                  PairSampler& sampler, int count,
                                                  std::span<const double> times,
                                                  int* skipped = nullptr);

struct CertifyConfig {
    int sample_count = 10000;
    double radius = 10.0;
    std::uint64_t seed = 1;
    std::vector<double> times = {0.0};
    /// States at which the exact Jacobian is probed (unused for fields with
    /// mode Jacobians, whose measure is state-independent).
    int jacobian_probes = 4;
};

/// Runs the pair estimator and, when the field exposes an exact Jacobian,
/// the matrix-measure route. Pass iff both are <= -rate + tolerance.
[[nodiscard]] ContractionCertificate certify_contraction(const FlowField& field,
                                                         const Metric& metric, double rate,
                                                         const ObjectiveSpec& obj,
                                                         const CertifyConfig& config);

/// Serializes to {field_id, metric{p_a,p_b,p_c,n}, claimed_rate, worst_ratio,
/// worst_measure, sample_count, verdict}.
[[nodiscard]] nlohmann::ordered_json certificate_to_json(const ContractionCertificate& cert);

}  // namespace contraflow
