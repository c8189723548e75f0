#include "contraflow/contraction.hpp"
#include "contraflow/csv.hpp"
#include "contraflow/experiment.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace contraflow;
namespace fs = std::filesystem;

constexpr int kExitPass = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

void apply_seed_override(ExperimentConfig& cfg) {
    if (const char* env = std::getenv("CONTRAFLOW_SEED")) {
        try {
            cfg.seed = std::stoull(env);
        } catch (const std::exception&) {
            throw ConfigError("CONTRAFLOW_SEED", "must be an unsigned integer");
        }
    }
}

int cmd_run(const std::string& config_path, const std::string& out_override) {
    ExperimentConfig cfg = load_experiment_config(config_path);
    apply_seed_override(cfg);
    const fs::path out = out_override.empty() ? fs::path(cfg.output_dir) : fs::path(out_override);
    ExperimentResult result = run_experiment(cfg);
    write_experiment_outputs(result, out);
    std::cout << (result.report.pass ? "pass" : "fail") << " min_margin="
              << format_double(result.report.min_margin) << " out=" << out.string() << "\n";
    return result.report.pass ? kExitPass : kExitRuntime;
}

int cmd_certify(const std::string& config_path, const std::string& out_override) {
    ExperimentConfig cfg = load_experiment_config(config_path);
    apply_seed_override(cfg);
    const fs::path out = out_override.empty() ? fs::path(cfg.output_dir) : fs::path(out_override);
    ContractionCertificate cert = run_certification(cfg);
    fs::create_directories(out);
    std::ofstream os(out / "certificate.json");
    os << certificate_to_json(cert).dump(2) << '\n';
    std::cout << (cert.pass ? "pass" : "fail") << " worst_ratio="
              << format_double(cert.worst_ratio);
    if (cert.worst_measure) std::cout << " worst_measure=" << format_double(*cert.worst_measure);
    std::cout << " rate=" << format_double(cert.claimed_rate) << "\n";
    return cert.pass ? kExitPass : kExitRuntime;
}

int cmd_sweep(const std::string& config_path, const std::string& param,
              const std::string& values_csv, const std::string& out_override) {
    ExperimentConfig cfg = load_experiment_config(config_path);
    apply_seed_override(cfg);
    std::vector<double> values;
    std::stringstream ss(values_csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        try {
            values.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw ConfigError("values", "'" + tok + "' is not a number");
        }
    }
    if (values.empty()) throw ConfigError("values", "sweep requires at least one value");
    const fs::path out = out_override.empty() ? fs::path(cfg.output_dir) : fs::path(out_override);
    SweepOutcome outcome = run_sweep(cfg, param, values, out);
    for (const auto& row : outcome.rows)
        std::cout << param << '=' << format_double(row.value)
                  << " fitted_rate=" << format_double(row.fitted_rate)
                  << (row.pass ? " pass" : " fail") << "\n";
    return outcome.all_pass ? kExitPass : kExitRuntime;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"contraction-certified optimization flows: run, certify, sweep"};
    app.require_subcommand(1);

    std::string config_path, out_dir, param, values;

    auto* run = app.add_subcommand("run", "integrate an experiment and check its envelope");
    run->add_option("config", config_path, "experiment config JSON")->required();
    run->add_option("--out", out_dir, "output directory (overrides config output_dir)");

    auto* certify = app.add_subcommand("certify", "sample a contraction certificate");
    certify->add_option("config", config_path, "experiment config JSON")->required();
    certify->add_option("--out", out_dir, "output directory (overrides config output_dir)");

    auto* sweep = app.add_subcommand("sweep", "run one experiment per parameter value");
    sweep->add_option("config", config_path, "experiment config JSON")->required();
    sweep->add_option("--param", param, "h | kappa | gamma | omega")->required();
    sweep->add_option("--values", values, "comma-separated values")->required();
    sweep->add_option("--out", out_dir, "output directory (overrides config output_dir)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitConfig;
    }

    try {
        if (run->parsed()) return cmd_run(config_path, out_dir);
        if (certify->parsed()) return cmd_certify(config_path, out_dir);
        if (sweep->parsed()) return cmd_sweep(config_path, param, values, out_dir);
    } catch (const contraflow::ConfigError& e) {
        std::cerr << e.what() << "\n";
        return kExitConfig;
    } catch (const contraflow::IntegrationError& e) {
        std::cerr << "runtime error at step " << e.step << ": " << e.what() << "\n";
        return kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitConfig;
}
