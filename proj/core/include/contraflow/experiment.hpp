#pragma once

#include "contraflow/analysis.hpp"
#include "contraflow/contraction.hpp"
#include "contraflow/flow.hpp"
#include "contraflow/integrators.hpp"
#include "contraflow/metric.hpp"
#include "contraflow/objectives.hpp"

#include <nlohmann/json_fwd.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace contraflow {

/// Configuration error naming the offending field; maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
  public:
    ConfigError(std::string field, const std::string& message)
        : std::runtime_error("config error: field '" + field + "': " + message),
          field(std::move(field)) {}
    std::string field;
};

struct ObjectiveConfig {
    enum class Kind { quadratic, rotating, logsumexp };
    Kind kind = Kind::quadratic;
    // quadratic
    Vector eigs;
    Vector center;
    // rotating
    double radius = 1.0;
    double omega = 0.1;
    Vector rot_eigs;
    // logsumexp
    Matrix A;
    Vector b;
    double ridge = 1.0;
};

struct FlowConfig {
    enum class Kind { acconest, general };
    Kind kind = Kind::acconest;
    double a = 1.0, b = 1.0, c = 1.0, d = 0.0, e = 0.0;
};

struct StepPolicy {
    enum class Kind { fixed, optimal };
    Kind kind = Kind::fixed;
    double h = 1.0;
    StepVariant variant = StepVariant::proof;
};

struct ExperimentConfig {
    std::string id;
    ObjectiveConfig objective;
    FlowConfig flow;
    Scheme scheme = Scheme::implicit_euler;
    StepPolicy step;
    int steps = 100;
    std::optional<double> metric_gamma;  // default 1 + 1/(2 kappa)
    int metric_sign = kCertifyingOffDiagonalSign;
    std::uint64_t seed = 1;
    std::string output_dir = "out";
    std::optional<std::pair<Vector, Vector>> initial_state;
};

/// Parses and validates; throws ConfigError naming the field on any problem.
[[nodiscard]] ExperimentConfig parse_experiment_config(const nlohmann::json& j);
[[nodiscard]] ExperimentConfig load_experiment_config(const std::filesystem::path& path);

struct ExperimentResult {
    EnvelopeReport report;
    Trajectory trajectory;
    ObjectiveSpec objective;
    FlowField field;
    Metric metric;
    std::function<Vector(double)> zstar_stacked;
    double fitted_factor = 0.0;
    std::optional<double> fgap_min_margin;
};

/// Builds objective, flow, and metric, integrates, and compares the observed
/// series against the theoretical envelope for the configured scheme.
[[nodiscard]] ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Builders shared by run_experiment, certify, and the tests.
[[nodiscard]] ObjectiveSpec build_objective(const ObjectiveConfig& cfg);
[[nodiscard]] FlowField build_flow(const FlowConfig& cfg, const ObjectiveSpec& obj);
[[nodiscard]] Metric build_metric(const ExperimentConfig& cfg, const ObjectiveSpec& obj);
[[nodiscard]] double resolve_step(const ExperimentConfig& cfg, const ObjectiveSpec& obj,
                                  const Metric& metric);

/// Writes trajectory.csv, envelope.csv, report.json, convergence.svg.
void write_experiment_outputs(const ExperimentResult& result,
                              const std::filesystem::path& dir);

[[nodiscard]] nlohmann::ordered_json report_to_json(const ExperimentResult& result);

/// Certification entry point matching `contraflow certify`.
[[nodiscard]] ContractionCertificate run_certification(const ExperimentConfig& cfg);

struct SweepRow {
    double value = 0.0;
    double fitted_rate = 0.0;
    bool pass = false;
};

struct SweepOutcome {
    std::vector<SweepRow> rows;
    bool all_pass = false;
};

/// Runs one sub-experiment per value of `parameter` (h, kappa, gamma, omega),
/// writing each under `<out>/<parameter>_<value>/` plus sweep_summary.csv.
[[nodiscard]] SweepOutcome run_sweep(const ExperimentConfig& base, const std::string& parameter,
                                     const std::vector<double>& values,
                                     const std::filesystem::path& out_dir);

}  // namespace contraflow
