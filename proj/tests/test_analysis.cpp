#include "contraflow/analysis.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace contraflow;

namespace {

ObjectiveSpec quad4() {
    Vector eigs(2);
    eigs << 1.0, 4.0;
    return make_quadratic_diag(eigs, Vector::Zero(2));
}

}  // namespace

TEST_CASE("implicit envelope: empty product, constant and varying rates") {
    auto one = [](double) { return 1.0; };
    CHECK(implicit_envelope(0, 1.0, one, 2.5) == doctest::Approx(2.5));
    CHECK(implicit_envelope(3, 1.0, one, 1.0) == doctest::Approx(1.0 / 8.0).epsilon(1e-15));
    auto growing = [](double t) { return 1.0 + t; };
    CHECK(implicit_envelope(2, 1.0, growing, 1.0) == doctest::Approx(1.0 / 12.0).epsilon(1e-15));
    auto bad = [](double) { return 0.0; };
    CHECK_THROWS_AS((void)implicit_envelope(1, 1.0, bad, 1.0), std::domain_error);
}

TEST_CASE("explicit envelope: empty product, optimum factor, annihilation") {
    auto one = [](double) { return 1.0; };
    CHECK(explicit_envelope(0, 0.25, one, 2.0, 3.0) == doctest::Approx(3.0));
    CHECK(explicit_envelope(2, 0.25, one, 2.0, 1.0) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(explicit_envelope(1, 1.0, one, 1.0, 1.0) == doctest::Approx(0.0));
    CHECK(explicit_envelope(5, 1.0, one, 1.0, 1.0) == doctest::Approx(0.0));
    CHECK_THROWS_AS((void)explicit_envelope(1, 10.0, one, 2.0, 1.0), std::domain_error);
}

TEST_CASE("implicit tracking envelope: frozen optimum reduces to the plain envelope") {
    auto one = [](double) { return 1.0; };
    for (int k : {0, 1, 5, 40}) {
        CHECK(tracking_envelope_implicit(k, 0.5, 1.0, 0.0, 2.0) ==
              doctest::Approx(implicit_envelope(k, 0.5, one, 2.0)).epsilon(1e-14));
    }
}

TEST_CASE("implicit tracking envelope: geometric sum reaches the limit") {
    const double limit = tracking_implicit_limit(1.0, 1.0, 1.0);
    CHECK(limit == doctest::Approx(1.0));
    CHECK(tracking_envelope_implicit(60, 1.0, 1.0, 1.0, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    // the envelope increases toward the limit from d0 = 0
    double prev = 0.0;
    for (int k = 1; k <= 20; ++k) {
        const double v = tracking_envelope_implicit(k, 1.0, 1.0, 1.0, 0.0);
        CHECK(v >= prev);
        CHECK(v <= limit + 1e-15);
        prev = v;
    }
}

TEST_CASE("explicit tracking envelope: reductions and the one-step-memory limit") {
    auto one = [](double) { return 1.0; };
    for (int k : {0, 1, 5}) {
        CHECK(tracking_envelope_explicit(k, 0.25, 1.0, 2.0, 0.0, 1.5) ==
              doctest::Approx(explicit_envelope(k, 0.25, one, 2.0, 1.5)).epsilon(1e-14));
    }
    // factor 0: the limit is rho itself
    CHECK(tracking_explicit_limit(1.0, 1.0, 1.0, 0.7) == doctest::Approx(0.7));
    CHECK(tracking_envelope_explicit(9, 1.0, 1.0, 1.0, 0.7, 5.0) == doctest::Approx(0.7));
}

TEST_CASE("continuous tracking envelope: initial value and pure exponential") {
    CHECK(tracking_envelope_continuous(0.0, 0.5, 2.0, 0.3, 1.0, 4.0) == doctest::Approx(4.0));
    for (double t : {0.0, 1.0, 7.0}) {
        CHECK(tracking_envelope_continuous(t, 0.5, 2.0, 0.0, 1.0, 4.0) ==
              doctest::Approx(4.0 * std::exp(-0.5 * t)).epsilon(1e-14));
    }
}

TEST_CASE("tracking envelopes grow with rho and shrink with the rate") {
    for (int k : {1, 10, 50}) {
        CHECK(tracking_envelope_implicit(k, 0.5, 1.0, 0.2, 1.0) <=
              tracking_envelope_implicit(k, 0.5, 1.0, 0.3, 1.0));
        CHECK(tracking_envelope_explicit(k, 0.1, 1.0, 3.0, 0.2, 1.0) <=
              tracking_envelope_explicit(k, 0.1, 1.0, 3.0, 0.3, 1.0));
        CHECK(tracking_envelope_implicit(k, 0.5, 1.2, 0.2, 1.0) <=
              tracking_envelope_implicit(k, 0.5, 1.0, 0.2, 1.0));
        CHECK(tracking_envelope_explicit(k, 0.1, 1.2, 3.0, 0.2, 1.0) <=
              tracking_envelope_explicit(k, 0.1, 1.0, 3.0, 0.2, 1.0) + 1e-15);
    }
    CHECK(tracking_implicit_limit(0.5, 1.0, 0.3) >= tracking_implicit_limit(0.5, 1.0, 0.2));
    CHECK(tracking_continuous_bound(0.5, 2.0, 0.3, 1.0) >=
          tracking_continuous_bound(0.5, 2.0, 0.2, 1.0));
}

TEST_CASE("lyapunov check: kappa=1 decays exactly at rate 2") {
    auto obj = make_quadratic(Matrix::Identity(2, 2), Vector::Zero(2));
    auto field = acconest_field(obj);
    auto metric = Metric::from_condition(1.0, 1.5, 2);
    StepConfig cfg;
    cfg.h = 0.5;
    FlowState y0(Vector::Ones(2), -Vector::Ones(2), Frame::barred);
    auto traj = integrate(field, y0, Scheme::rk4_reference, cfg, 10);
    const Vector zstar = Vector::Zero(4);
    for (auto kind : {LyapunovKind::distance, LyapunovKind::field_norm}) {
        auto res = lyapunov_check(field, metric, traj, kind, 1.0, zstar);
        CHECK(res.pass);
        // linear minus-identity flow: V(t) = V(0) e^{-2t} exactly
        for (std::size_t j = 0; j < traj.size(); ++j) {
            CHECK(res.values[j] ==
                  doctest::Approx(res.values[0] * std::exp(-2.0 * traj.times[j])).epsilon(1e-9));
        }
    }
}

TEST_CASE("lyapunov check: kappa=4 passes at the certified rate") {
    auto obj = quad4();
    auto field = acconest_field(obj);
    auto metric = Metric::from_condition(4.0, 1.125, 2);
    const double certified = -matrix_measure_modes(metric, field.mode_jacobians(0.0));
    StepConfig cfg;
    cfg.h = 0.5;
    FlowState y0(Vector::Ones(2), Vector::Zero(2), Frame::barred);
    auto traj = integrate(field, y0, Scheme::rk4_reference, cfg, 40);
    const Vector zstar = Vector::Zero(4);
    for (auto kind : {LyapunovKind::distance, LyapunovKind::field_norm}) {
        auto res = lyapunov_check(field, metric, traj, kind, certified, zstar);
        CHECK(res.pass);
    }
}

TEST_CASE("lyapunov check: equilibrium trajectory has V identically zero") {
    auto obj = quad4();
    auto field = acconest_field(obj);
    auto metric = Metric::from_condition(4.0, 1.125, 2);
    StepConfig cfg;
    cfg.h = 1.0;
    const FlowState eq = equilibrium(field, obj, 0.0);
    auto traj = integrate(field, eq, Scheme::rk4_reference, cfg, 3);
    auto res = lyapunov_check(field, metric, traj, LyapunovKind::distance, 0.5, eq.stacked());
    CHECK(res.pass);
    for (double v : res.values) CHECK(v <= 1e-20);
}

TEST_CASE("lyapunov check rejects discrete trajectories") {
    auto obj = quad4();
    auto field = acconest_field(obj);
    auto metric = Metric::from_condition(4.0, 1.125, 2);
    StepConfig cfg;
    cfg.h = 1.0;
    FlowState y0(Vector::Ones(2), Vector::Zero(2), Frame::barred);
    auto traj = integrate(field, y0, Scheme::implicit_euler, cfg, 3);
    CHECK_THROWS((void)lyapunov_check(field, metric, traj, LyapunovKind::distance, 0.5,
                                      Vector::Zero(4)));
}

TEST_CASE("empirical rate: exact geometry, constants, truncation, errors") {
    std::vector<double> geo(60);
    for (std::size_t i = 0; i < geo.size(); ++i) geo[i] = std::pow(0.5, double(i));
    CHECK(empirical_rate(geo, 0.5) == doctest::Approx(0.5).epsilon(1e-10));

    std::vector<double> flat(20, 3.0);
    CHECK(empirical_rate(flat, 1.0) == doctest::Approx(1.0).epsilon(1e-12));

    std::vector<double> dies = geo;
    dies.resize(40);
    for (std::size_t i = 30; i < 40; ++i) dies[i] = 0.0;
    // tail covering the zeros truncates the fit but still succeeds
    CHECK(empirical_rate(dies, 0.9) == doctest::Approx(0.5).epsilon(1e-8));

    std::vector<double> tiny(5, 1.0);
    CHECK_THROWS((void)empirical_rate(tiny, 0.5));
    CHECK_THROWS((void)empirical_rate(geo, 0.0));
    std::vector<double> dead(20, 1.0);
    for (std::size_t i = 2; i < 20; ++i) dead[i] = 0.0;
    CHECK_THROWS((void)empirical_rate(dead, 1.0));
}

TEST_CASE("empirical rate: accelerated iteration on kappa=100 beats 0.91 per step") {
    const Index n = 10;
    Vector eigs = Vector::LinSpaced(n, 1.0, 100.0);
    auto obj = make_quadratic_diag(eigs, Vector::Zero(n));
    Vector y1 = Vector::Ones(n), y2 = Vector::Ones(n);
    std::vector<double> dist;
    for (int k = 0; k < 2000; ++k) {
        std::tie(y1, y2) = nesterov_step(obj, y1, y2);
        dist.push_back(y1.norm());
    }
    const double fitted = empirical_rate(dist, 0.1);
    CHECK(fitted <= 1.0 - 0.9 * std::sqrt(1.0 / 100.0));
    CHECK(fitted >= 0.88);
}

TEST_CASE("envelope report margins and verdict") {
    EnvelopeReport rep;
    rep.bound_series = {1.0, 0.5, 0.25};
    rep.observed_series = {1.0, 0.4, 0.26};
    rep.finalize();
    CHECK(!rep.pass);
    CHECK(rep.min_margin == doctest::Approx(-0.01));
    rep.observed_series = {1.0, 0.4, 0.24};
    rep.finalize();
    CHECK(rep.pass);
}
