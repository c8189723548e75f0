#include "contraflow/experiment.hpp"

#include "contraflow/csv.hpp"
#include "contraflow/svg.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace contraflow {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

Vector parse_vector(const json& j, const std::string& field) {
    if (!j.is_array() || j.empty()) throw ConfigError(field, "expected a nonempty array");
    Vector v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) throw ConfigError(field, "expected numbers");
        v[static_cast<Index>(i)] = j[i].get<double>();
    }
    return v;
}

Matrix parse_matrix(const json& j, const std::string& field) {
    if (!j.is_array() || j.empty()) throw ConfigError(field, "expected a nonempty array of rows");
    const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
    if (cols == 0) throw ConfigError(field, "rows must be nonempty arrays");
    Matrix m(j.size(), cols);
    for (std::size_t r = 0; r < j.size(); ++r) {
        if (!j[r].is_array() || j[r].size() != cols)
            throw ConfigError(field, "rows must have equal length");
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = j[r][c].get<double>();
    }
    return m;
}

double require_number(const json& j, const std::string& key, const std::string& field) {
    if (!j.contains(key) || !j[key].is_number()) throw ConfigError(field, "expected a number");
    return j[key].get<double>();
}

}  // namespace

ExperimentConfig parse_experiment_config(const json& j) {
    ExperimentConfig cfg;
    if (j.contains("id")) cfg.id = j["id"].get<std::string>();

    if (!j.contains("objective") || !j["objective"].is_object())
        throw ConfigError("objective", "missing object");
    const json& jo = j["objective"];
    const std::string okind = jo.value("type", "");
    if (okind == "quadratic") {
        cfg.objective.kind = ObjectiveConfig::Kind::quadratic;
        cfg.objective.eigs = parse_vector(jo.contains("eigs") ? jo["eigs"] : json(), "objective.eigs");
        if ((cfg.objective.eigs.array() <= 0.0).any())
            throw ConfigError("objective.eigs", "eigenvalues must be positive");
        cfg.objective.center = jo.contains("center")
                                   ? parse_vector(jo["center"], "objective.center")
                                   : Vector(Vector::Zero(cfg.objective.eigs.size()));
        if (cfg.objective.center.size() != cfg.objective.eigs.size())
            throw ConfigError("objective.center", "dimension must match eigs");
    } else if (okind == "rotating") {
        cfg.objective.kind = ObjectiveConfig::Kind::rotating;
        cfg.objective.radius = require_number(jo, "r", "objective.r");
        if (cfg.objective.radius < 0.0) throw ConfigError("objective.r", "must be >= 0");
        cfg.objective.omega = require_number(jo, "omega", "objective.omega");
        cfg.objective.rot_eigs =
            jo.contains("eigs") ? parse_vector(jo["eigs"], "objective.eigs") : Vector(Vector::Ones(2));
        if (cfg.objective.rot_eigs.size() != 2)
            throw ConfigError("objective.eigs", "rotating objectives are planar, need 2 eigenvalues");
        if ((cfg.objective.rot_eigs.array() <= 0.0).any())
            throw ConfigError("objective.eigs", "eigenvalues must be positive");
    } else if (okind == "logsumexp") {
        cfg.objective.kind = ObjectiveConfig::Kind::logsumexp;
        if (!jo.contains("A")) throw ConfigError("objective.A", "missing matrix");
        cfg.objective.A = parse_matrix(jo["A"], "objective.A");
        cfg.objective.b = jo.contains("b") ? parse_vector(jo["b"], "objective.b")
                                           : Vector(Vector::Zero(cfg.objective.A.rows()));
        if (cfg.objective.b.size() != cfg.objective.A.rows())
            throw ConfigError("objective.b", "dimension must match rows of A");
        cfg.objective.ridge = require_number(jo, "ridge", "objective.ridge");
        if (cfg.objective.ridge <= 0.0) throw ConfigError("objective.ridge", "must be > 0");
    } else {
        throw ConfigError("objective.type", "expected quadratic | rotating | logsumexp");
    }

    const json jf = j.value("flow", json{{"type", "acconest"}});
    const std::string fkind = jf.value("type", "acconest");
    if (fkind == "acconest") {
        cfg.flow.kind = FlowConfig::Kind::acconest;
    } else if (fkind == "general") {
        cfg.flow.kind = FlowConfig::Kind::general;
        cfg.flow.a = require_number(jf, "a", "flow.a");
        cfg.flow.b = require_number(jf, "b", "flow.b");
        cfg.flow.c = require_number(jf, "c", "flow.c");
        cfg.flow.d = jf.value("d", 0.0);
        cfg.flow.e = jf.value("e", 0.0);
        if (cfg.flow.a <= 0 || cfg.flow.b <= 0 || cfg.flow.c <= 0)
            throw ConfigError("flow", "a, b, c must be > 0");
        if (cfg.flow.d < 0 || cfg.flow.e < 0) throw ConfigError("flow", "d, e must be >= 0");
    } else {
        throw ConfigError("flow.type", "expected acconest | general");
    }

    const std::string scheme = j.value("scheme", "");
    if (scheme == "explicit") cfg.scheme = Scheme::explicit_euler;
    else if (scheme == "implicit") cfg.scheme = Scheme::implicit_euler;
    else if (scheme == "rk4_reference") cfg.scheme = Scheme::rk4_reference;
    else if (scheme == "nesterov") cfg.scheme = Scheme::nesterov;
    else throw ConfigError("scheme", "expected explicit | implicit | rk4_reference | nesterov");

    const json js = j.value("step", json{{"type", "fixed"}, {"h", 1.0}});
    const std::string skind = js.value("type", "fixed");
    if (skind == "fixed") {
        cfg.step.kind = StepPolicy::Kind::fixed;
        cfg.step.h = require_number(js, "h", "step.h");
        if (cfg.step.h <= 0.0) throw ConfigError("step.h", "must be > 0");
    } else if (skind == "optimal") {
        cfg.step.kind = StepPolicy::Kind::optimal;
        const std::string v = js.value("variant", "proof");
        if (v == "proof") cfg.step.variant = StepVariant::proof;
        else if (v == "statement") cfg.step.variant = StepVariant::statement;
        else throw ConfigError("step.variant", "expected proof | statement");
    } else {
        throw ConfigError("step.type", "expected fixed | optimal");
    }

    if (!j.contains("steps") || !j["steps"].is_number_integer())
        throw ConfigError("steps", "expected an integer");
    cfg.steps = j["steps"].get<int>();
    if (cfg.steps < 1) throw ConfigError("steps", "must be >= 1");

    if (j.contains("metric_gamma")) cfg.metric_gamma = j["metric_gamma"].get<double>();
    if (j.contains("metric_sign")) {
        cfg.metric_sign = j["metric_sign"].get<int>();
        if (cfg.metric_sign != 1 && cfg.metric_sign != -1)
            throw ConfigError("metric_sign", "expected +1 or -1");
    }
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("output_dir")) cfg.output_dir = j["output_dir"].get<std::string>();
    if (j.contains("initial_state")) {
        const json& ji = j["initial_state"];
        Vector x1 = parse_vector(ji.contains("x1") ? ji["x1"] : json(), "initial_state.x1");
        Vector x2 = parse_vector(ji.contains("x2") ? ji["x2"] : json(), "initial_state.x2");
        if (x1.size() != x2.size()) throw ConfigError("initial_state", "x1/x2 dimension mismatch");
        cfg.initial_state = std::make_pair(std::move(x1), std::move(x2));
    }

    // cross-field validation
    ObjectiveSpec probe = build_objective(cfg.objective);
    if (cfg.metric_gamma) {
        const double kappa = probe.kappa();
        if (!(*cfg.metric_gamma > 1.0 && *cfg.metric_gamma <= 1.0 + 1.0 / kappa)) {
            std::ostringstream msg;
            msg << "must lie in (1, " << 1.0 + 1.0 / kappa << "] for kappa " << kappa;
            throw ConfigError("metric_gamma", msg.str());
        }
    }
    if (cfg.scheme == Scheme::nesterov) {
        if (cfg.flow.kind != FlowConfig::Kind::acconest)
            throw ConfigError("scheme", "nesterov requires the acconest flow");
        if (probe.time_varying)
            throw ConfigError("scheme", "nesterov requires a time-invariant objective");
    }
    if (cfg.flow.kind == FlowConfig::Kind::general && probe.time_varying)
        throw ConfigError("flow", "the general momentum flow requires a time-invariant objective");
    if (cfg.step.kind == StepPolicy::Kind::optimal && cfg.flow.kind != FlowConfig::Kind::acconest)
        throw ConfigError("step", "optimal step sizes are defined for the acconest flow");
    if (cfg.initial_state && cfg.initial_state->first.size() != probe.dim)
        throw ConfigError("initial_state", "dimension does not match the objective");
    return cfg;
}

ExperimentConfig load_experiment_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot open " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError("config", std::string("JSON parse error: ") + e.what());
    }
    return parse_experiment_config(j);
}

ObjectiveSpec build_objective(const ObjectiveConfig& cfg) {
    switch (cfg.kind) {
        case ObjectiveConfig::Kind::quadratic:
            return make_quadratic_diag(cfg.eigs, cfg.center);
        case ObjectiveConfig::Kind::rotating:
            return make_rotating_quadratic(cfg.radius, cfg.omega, Matrix(cfg.rot_eigs.asDiagonal()));
        case ObjectiveConfig::Kind::logsumexp:
            return make_logsumexp_ridge(cfg.A, cfg.b, cfg.ridge);
    }
    throw std::logic_error("build_objective: unreachable");
}

FlowField build_flow(const FlowConfig& cfg, const ObjectiveSpec& obj) {
    if (cfg.kind == FlowConfig::Kind::acconest) return acconest_field(obj);
    return general_momentum_field(MomentumParams(cfg.a, cfg.b, cfg.c, cfg.d, cfg.e), obj);
}

Metric build_metric(const ExperimentConfig& cfg, const ObjectiveSpec& obj) {
    const double kappa = obj.kappa();
    const double gamma = cfg.metric_gamma.value_or(1.0 + 1.0 / (2.0 * kappa));
    return Metric::from_condition(kappa, gamma, obj.dim, cfg.metric_sign);
}

double resolve_step(const ExperimentConfig& cfg, const ObjectiveSpec& obj, const Metric& metric) {
    if (cfg.step.kind == StepPolicy::Kind::fixed) return cfg.step.h;
    return acconest_optimal_step(obj.kappa(), metric, cfg.step.variant);
}

namespace {

Vector stack(const Vector& a, const Vector& b) {
    Vector z(a.size() + b.size());
    z << a, b;
    return z;
}

FlowState default_initial_state(const ObjectiveSpec& obj, const FlowField& field) {
    const Vector xs = obj.has_minimizer() ? obj.minimizer(0.0) : Vector(Vector::Zero(obj.dim));
    Vector off1 = Vector::Ones(obj.dim);
    Vector off2(obj.dim);
    for (Index i = 0; i < obj.dim; ++i) off2[i] = i % 2 == 0 ? 1.0 : -1.0;
    if (field.frame == Frame::barred) return FlowState(xs + off1, xs + off2, Frame::barred);
    return FlowState(xs + off1, off2, Frame::original);
}

// Per-step bound on the optimum-gradient drift: the arc bound rate * h.
double discrete_grad_rho(const ObjectiveSpec& obj, double h) {
    if (!obj.time_varying || !obj.grad_time_rate) return 0.0;
    return *obj.grad_time_rate * h;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    ObjectiveSpec obj = build_objective(cfg.objective);
    FlowField field = build_flow(cfg.flow, obj);
    Metric metric = build_metric(cfg, obj);

    double rate;
    std::optional<double> ell;
    if (field.claimed_rate) {
        rate = *field.claimed_rate;
        ell = field_lipschitz_bound(obj.kappa(), metric);
    } else {
        // No published rate for the general family: certify empirically.
        PairSampler sampler;
        sampler.seed = cfg.seed;
        sampler.center = equilibrium(field, obj, 0.0).stacked();
        const double est =
            one_sided_lipschitz_estimate(field, metric, sampler, 2000, std::array{0.0});
        if (est >= 0.0)
            throw std::runtime_error(
                "run_experiment: sampled certificate found no contraction for this flow");
        rate = -est;
        Rng rng(cfg.seed + 17);
        double lmax = 0.0;
        for (int i = 0; i < 2000; ++i) {
            const Vector x = rng.in_ball(sampler.center, 10.0);
            const Vector z = rng.in_ball(sampler.center, 10.0);
            const double dn = metric.norm(x - z);
            if (dn < 1e-12) continue;
            lmax = std::max(lmax, metric.norm(field.eval_stacked(x, 0.0) -
                                              field.eval_stacked(z, 0.0)) / dn);
        }
        ell = lmax * 1.000001;
    }

    const double h = cfg.scheme == Scheme::nesterov ? 1.0 : resolve_step(cfg, obj, metric);

    FlowState y0 = cfg.initial_state
                       ? FlowState(cfg.initial_state->first, cfg.initial_state->second, field.frame)
                       : default_initial_state(obj, field);

    // moving-equilibrium pair as a stacked vector; value captures only, the
    // closure outlives this frame
    const Frame frame = field.frame;
    std::function<Vector(double)> zstar;
    if (obj.has_minimizer()) {
        auto min_fn = obj.minimizer;
        zstar = [min_fn, frame](double t) {
            const Vector xs = min_fn(t);
            return frame == Frame::barred ? stack(xs, xs) : stack(xs, Vector::Zero(xs.size()));
        };
    } else {
        const Vector xs = equilibrium(field, obj, 0.0).x1;  // time-invariant
        zstar = [xs, frame](double) {
            return frame == Frame::barred ? stack(xs, xs) : stack(xs, Vector::Zero(xs.size()));
        };
    }

    const double d0 = metric.norm(y0.stacked() - zstar(0.0));

    // discrete drift bound, exact chord for rotating centers
    double rho2 = 0.0;
    if (obj.time_varying && obj.grad_time_rate) {
        if (obj.name == "rotating_quadratic") {
            const Vector c0 = obj.minimizer(0.0), c1 = obj.minimizer(h);
            rho2 = obj.lip * (c1 - c0).norm();  // lmax(Q) * chord length
        } else {
            rho2 = discrete_grad_rho(obj, h);
        }
    }
    const double rho_step = rho2 == 0.0
                                ? 0.0
                                : std::sqrt(2.0 * metric.lambda_max()) * rho2 / obj.mu;

    const bool fgap_primary = cfg.scheme == Scheme::nesterov ||
                              (cfg.scheme == Scheme::explicit_euler && h == 1.0 &&
                               cfg.flow.kind == FlowConfig::Kind::acconest && !obj.time_varying);
    if (cfg.scheme == Scheme::explicit_euler && !fgap_primary) {
        const double window = explicit_window(rate, *ell);
        if (!(h < window)) {
            std::ostringstream msg;
            msg << "must lie in the admissible window (0, " << window
                << ") for the explicit scheme (or equal 1 for the closed-form iteration)";
            throw ConfigError("step.h", msg.str());
        }
    }

    ExperimentResult result{.report = {},
                            .trajectory = {},
                            .objective = std::move(obj),
                            .field = std::move(field),
                            .metric = metric,
                            .zstar_stacked = zstar,
                            .fitted_factor = 0.0,
                            .fgap_min_margin = std::nullopt};
    const ObjectiveSpec& o = result.objective;

    // integrate
    if (cfg.scheme == Scheme::nesterov) {
        Trajectory traj;
        traj.frame = Frame::barred;
        traj.scheme = Scheme::nesterov;
        traj.times.push_back(0.0);
        traj.states.push_back(y0.stacked());
        Vector y1 = y0.x1, y2 = y0.x2;
        for (int k = 1; k <= cfg.steps; ++k) {
            std::tie(y1, y2) = nesterov_step(o, y1, y2);
            traj.times.push_back(static_cast<double>(k));
            traj.states.push_back(stack(y1, y2));
            traj.per_step_diag.push_back({});
        }
        result.trajectory = std::move(traj);
    } else {
        StepConfig sc;
        sc.h = h;
        result.trajectory = integrate(result.field, y0, cfg.scheme, sc, cfg.steps);
    }

    // observed + bound series
    EnvelopeReport& rep = result.report;
    rep.experiment_id = cfg.id.empty()
                            ? o.name + "-" + to_string(cfg.scheme) + "-h" + format_double(h)
                            : cfg.id;
    rep.scheme = cfg.scheme;
    rep.h = h;
    rep.rate = rate;
    rep.lipschitz = ell;
    rep.metric_block = metric.block();
    rep.d0 = d0;
    if (rho_step > 0.0) rep.rho_step = rho_step;

    const int K = cfg.steps;
    rep.bound_series.resize(K + 1);
    rep.observed_series.resize(K + 1);

    const Vector zs0 = zstar(0.0);
    auto fgap = [&](const Vector& state, double t) {
        const Index n = o.dim;
        const Vector y1 = state.head(n);
        const Vector xs = zs0.head(n);
        return o.value(y1, t) - o.value(o.has_minimizer() ? o.minimizer(t) : xs, t);
    };

    if (fgap_primary) {
        rep.observed_kind = "f_gap";
        const double C = o.lip / (2.0 * metric.lambda_min()) * d0 * d0;
        const double fac = 1.0 - std::sqrt(o.mu / o.lip);
        for (int k = 0; k <= K; ++k) {
            rep.observed_series[k] = fgap(result.trajectory.states[k], result.trajectory.times[k]);
            rep.bound_series[k] = k == 0 ? C : C * std::pow(fac, k);
        }
    } else {
        rep.observed_kind = "dist_P";
        for (int k = 0; k <= K; ++k) {
            const double t = result.trajectory.times[k];
            rep.observed_series[k] = metric.norm(result.trajectory.states[k] - zstar(t));
        }
        switch (cfg.scheme) {
            case Scheme::implicit_euler:
                for (int k = 0; k <= K; ++k)
                    rep.bound_series[k] = tracking_envelope_implicit(k, h, rate, rho_step, d0);
                if (rho_step > 0.0) rep.envelope_limit = tracking_implicit_limit(h, rate, rho_step);
                break;
            case Scheme::explicit_euler:
                for (int k = 0; k <= K; ++k)
                    rep.bound_series[k] =
                        tracking_envelope_explicit(k, h, rate, *ell, rho_step, d0);
                if (rho_step > 0.0)
                    rep.envelope_limit = tracking_explicit_limit(h, rate, *ell, rho_step);
                break;
            case Scheme::rk4_reference: {
                const double rho_c = o.time_varying ? o.grad_time_rate.value_or(0.0) : 0.0;
                for (int k = 0; k <= K; ++k)
                    rep.bound_series[k] = tracking_envelope_continuous(
                        result.trajectory.times[k], rate, metric.lambda_max(), rho_c, o.mu, d0);
                if (rho_c > 0.0)
                    rep.envelope_limit =
                        tracking_continuous_bound(rate, metric.lambda_max(), rho_c, o.mu);
                break;
            }
            default:
                break;
        }
        // secondary f-gap check against the squared-norm envelope
        if (!o.time_varying) {
            const double Cf = o.lip / (2.0 * metric.lambda_min());
            double worst = std::numeric_limits<double>::infinity();
            for (int k = 0; k <= K; ++k) {
                const double fbound = Cf * rep.bound_series[k] * rep.bound_series[k];
                worst = std::min(worst, fbound - fgap(result.trajectory.states[k],
                                                      result.trajectory.times[k]));
            }
            result.fgap_min_margin = worst;
        }
    }
    rep.finalize();

    try {
        result.fitted_factor = empirical_rate(rep.observed_series, 0.5);
    } catch (const std::exception&) {
        result.fitted_factor = 0.0;  // series collapsed to zero
    }
    return result;
}

ordered_json report_to_json(const ExperimentResult& result) {
    const EnvelopeReport& rep = result.report;
    ordered_json j;
    j["experiment_id"] = rep.experiment_id;
    j["scheme"] = to_string(rep.scheme);
    j["verdict"] = rep.pass ? "pass" : "fail";
    j["observed_kind"] = rep.observed_kind;
    j["h"] = rep.h;
    j["steps"] = rep.bound_series.empty() ? 0 : static_cast<int>(rep.bound_series.size()) - 1;
    j["rate"] = rep.rate;
    if (rep.lipschitz) j["lipschitz"] = *rep.lipschitz;
    if (rep.rho_step) j["rho_step"] = *rep.rho_step;
    if (rep.envelope_limit) j["envelope_limit"] = *rep.envelope_limit;
    j["d0"] = rep.d0;
    j["min_margin"] = rep.min_margin;
    j["fitted_factor"] = result.fitted_factor;
    if (result.fgap_min_margin) j["fgap_min_margin"] = *result.fgap_min_margin;
    j["metric"] = {{"p_a", rep.metric_block(0, 0)},
                   {"p_b", rep.metric_block(0, 1)},
                   {"p_c", rep.metric_block(1, 1)},
                   {"n", result.metric.dim_n()}};
    return j;
}

void write_experiment_outputs(const ExperimentResult& result, const fs::path& dir) {
    fs::create_directories(dir);
    {
        std::ofstream os(dir / "trajectory.csv");
        write_trajectory_csv(os, result.trajectory, result.metric, result.zstar_stacked);
    }
    {
        std::ofstream os(dir / "envelope.csv");
        os << "k,t,bound,observed,margin\n";
        const EnvelopeReport& rep = result.report;
        for (std::size_t k = 0; k < rep.bound_series.size(); ++k) {
            os << format_int(static_cast<std::int64_t>(k)) << ','
               << format_double(result.trajectory.times[k]) << ','
               << format_double(rep.bound_series[k]) << ','
               << format_double(rep.observed_series[k]) << ','
               << format_double(rep.margin_series[k]) << '\n';
        }
    }
    {
        std::ofstream os(dir / "report.json");
        os << report_to_json(result).dump(2) << '\n';
    }
    {
        std::vector<double> ks(result.report.bound_series.size());
        for (std::size_t i = 0; i < ks.size(); ++i) ks[i] = static_cast<double>(i);
        std::ofstream os(dir / "convergence.svg");
        os << convergence_svg(ks, result.report.observed_series, result.report.bound_series,
                              result.report.experiment_id);
    }
}

ContractionCertificate run_certification(const ExperimentConfig& cfg) {
    ObjectiveSpec obj = build_objective(cfg.objective);
    FlowField field = build_flow(cfg.flow, obj);
    Metric metric = build_metric(cfg, obj);
    double rate;
    if (field.claimed_rate) {
        rate = *field.claimed_rate;
    } else {
        // best-effort: sample first, then certify against the sampled rate
        PairSampler sampler;
        sampler.seed = cfg.seed;
        sampler.center = equilibrium(field, obj, 0.0).stacked();
        const double est =
            one_sided_lipschitz_estimate(field, metric, sampler, 2000, std::array{0.0});
        rate = est < 0.0 ? -est : 0.0;
    }
    CertifyConfig cc;
    cc.seed = cfg.seed;
    if (obj.time_varying) cc.times = {0.0, 1.0, 2.0, 5.0};
    return certify_contraction(field, metric, rate, obj, cc);
}

SweepOutcome run_sweep(const ExperimentConfig& base, const std::string& parameter,
                       const std::vector<double>& values, const fs::path& out_dir) {
    if (values.empty()) throw ConfigError("values", "sweep requires at least one value");
    if (parameter != "h" && parameter != "kappa" && parameter != "gamma" && parameter != "omega")
        throw ConfigError("parameter", "expected h | kappa | gamma | omega");

    SweepOutcome outcome;
    outcome.all_pass = true;
    fs::create_directories(out_dir);
    for (double v : values) {
        ExperimentConfig cfg = base;
        if (parameter == "h") {
            if (cfg.scheme == Scheme::nesterov)
                throw ConfigError("parameter", "the closed-form iteration has a fixed unit step");
            cfg.step.kind = StepPolicy::Kind::fixed;
            cfg.step.h = v;
            if (v <= 0.0) throw ConfigError("values", "h values must be > 0");
        } else if (parameter == "kappa") {
            if (v < 1.0) throw ConfigError("values", "kappa values must be >= 1");
            if (cfg.objective.kind == ObjectiveConfig::Kind::quadratic) {
                const Index n = cfg.objective.eigs.size();
                const double mu = cfg.objective.eigs.minCoeff();
                cfg.objective.eigs = Vector::LinSpaced(n, mu, mu * v);
            } else if (cfg.objective.kind == ObjectiveConfig::Kind::rotating) {
                const double mu = cfg.objective.rot_eigs.minCoeff();
                cfg.objective.rot_eigs = Vector::LinSpaced(2, mu, mu * v);
            } else {
                throw ConfigError("parameter", "kappa sweeps need a quadratic objective");
            }
            cfg.metric_gamma.reset();  // keep the midpoint default admissible
        } else if (parameter == "gamma") {
            cfg.metric_gamma = v;
        } else {  // omega
            if (cfg.objective.kind != ObjectiveConfig::Kind::rotating)
                throw ConfigError("parameter", "omega sweeps need a rotating objective");
            cfg.objective.omega = v;
        }
        cfg.id = base.id.empty() ? parameter + "_" + format_double(v)
                                 : base.id + "-" + parameter + "_" + format_double(v);

        ExperimentResult res = run_experiment(cfg);
        write_experiment_outputs(res, out_dir / (parameter + "_" + format_double(v)));
        outcome.rows.push_back({v, res.fitted_factor, res.report.pass});
        outcome.all_pass = outcome.all_pass && res.report.pass;
    }
    std::ofstream os(out_dir / "sweep_summary.csv");
    os << "value,fitted_rate,verdict\n";
    for (const auto& row : outcome.rows)
        os << format_double(row.value) << ',' << format_double(row.fitted_rate) << ','
           << (row.pass ? "pass" : "fail") << '\n';
    return outcome;
}

}  // namespace contraflow
