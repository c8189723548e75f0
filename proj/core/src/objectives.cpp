#include "contraflow/objectives.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>

namespace contraflow {

namespace {

constexpr double kSymTol = 1e-12;

double spectral_norm(const Matrix& A) {
    Eigen::JacobiSVD<Matrix> svd(A);
    return svd.singularValues()(0);
}

}  // namespace

ObjectiveSpec make_quadratic(const Matrix& Q, const Vector& c) {
    if (Q.rows() != Q.cols() || Q.rows() < 1)
        throw ConstructionError("make_quadratic: Q must be square");
    if (Q.rows() != c.size())
        throw ConstructionError("make_quadratic: center dimension mismatch");
    if ((Q - Q.transpose()).cwiseAbs().maxCoeff() > kSymTol * (1.0 + Q.cwiseAbs().maxCoeff()))
        throw ConstructionError("make_quadratic: Q must be symmetric");
    Eigen::SelfAdjointEigenSolver<Matrix> es(Q, Eigen::EigenvaluesOnly);
    const double lmin = es.eigenvalues().minCoeff();
    const double lmax = es.eigenvalues().maxCoeff();
    if (lmin <= 0.0)
        throw ConstructionError("make_quadratic: Q must be positive definite");

    ObjectiveSpec obj;
    obj.dim = Q.rows();
    obj.mu = lmin;
    obj.lip = lmax;
    obj.name = "quadratic";
    obj.value = [Q, c](const Vector& x, double) {
        const Vector d = x - c;
        return 0.5 * d.dot(Q * d);
    };
    obj.grad = [Q, c](const Vector& x, double) { return Vector(Q * (x - c)); };
    obj.hessian = [Q](const Vector&, double) { return Q; };
    obj.hessian_is_constant = true;
    obj.minimizer = [c](double) { return c; };
    obj.time_varying = false;
    return obj;
}

ObjectiveSpec make_quadratic_diag(const Vector& eigs, const Vector& c) {
    return make_quadratic(Matrix(eigs.asDiagonal()), c);
}

ObjectiveSpec make_rotating_quadratic(double radius, double omega, const Matrix& Q) {
    if (radius < 0.0) throw ConstructionError("make_rotating_quadratic: radius must be >= 0");
    if (Q.rows() != 2 || Q.cols() != 2)
        throw ConstructionError("make_rotating_quadratic: Q must be 2x2");

    ObjectiveSpec base = make_quadratic(Q, Vector::Zero(2));  // validates Q
    const double lmax = base.lip;

    auto center = [radius, omega](double t) {
        Vector c(2);
        c << radius * std::cos(omega * t), radius * std::sin(omega * t);
        return c;
    };

    ObjectiveSpec obj;
    obj.dim = 2;
    obj.mu = base.mu;
    obj.lip = base.lip;
    obj.name = "rotating_quadratic";
    obj.value = [Q, center](const Vector& x, double t) {
        const Vector d = x - center(t);
        return 0.5 * d.dot(Q * d);
    };
    obj.grad = [Q, center](const Vector& x, double t) { return Vector(Q * (x - center(t))); };
    obj.hessian = [Q](const Vector&, double) { return Matrix(Q); };
    obj.hessian_is_constant = true;
    obj.minimizer = center;
    obj.time_varying = radius != 0.0 && omega != 0.0;
    obj.grad_time_rate = lmax * radius * std::abs(omega);
    return obj;
}

ObjectiveSpec make_logsumexp_ridge(const Matrix& A, const Vector& b, double ridge) {
    if (ridge <= 0.0) throw ConstructionError("make_logsumexp_ridge: ridge must be > 0");
    if (A.rows() != b.size())
        throw ConstructionError("make_logsumexp_ridge: A rows must match b");
    if (A.rows() < 1 || A.cols() < 1 || A.cwiseAbs().maxCoeff() == 0.0)
        throw ConstructionError("make_logsumexp_ridge: A must be nonzero");

    const double a2 = spectral_norm(A);

    ObjectiveSpec obj;
    obj.dim = A.cols();
    obj.mu = ridge;
    obj.lip = ridge + a2 * a2;
    obj.name = "logsumexp_ridge";
    obj.value = [A, b, ridge](const Vector& x, double) {
        const Vector u = A * x + b;
        const double m = u.maxCoeff();
        return m + std::log((u.array() - m).exp().sum()) + 0.5 * ridge * x.squaredNorm();
    };
    obj.grad = [A, b, ridge](const Vector& x, double) {
        const Vector u = A * x + b;
        const double m = u.maxCoeff();
        Vector p = (u.array() - m).exp();
        p /= p.sum();
        return Vector(A.transpose() * p + ridge * x);
    };
    obj.time_varying = false;
    return obj;
}

ClassReport validate_class(const ObjectiveSpec& obj, const ClassSampler& sampler, int count) {
    if (count < 1) throw std::invalid_argument("validate_class: count must be >= 1");
    Rng rng(sampler.seed);
    const Vector center =
        obj.has_minimizer() ? obj.minimizer(sampler.time) : Vector::Zero(obj.dim);

    ClassReport report;
    report.worst_strong_convexity = std::numeric_limits<double>::infinity();
    report.worst_smoothness = 0.0;
    for (int i = 0; i < count; ++i) {
        const Vector x = rng.in_ball(center, sampler.radius);
        const Vector y = rng.in_ball(center, sampler.radius);
        const Vector dx = x - y;
        const double nx2 = dx.squaredNorm();
        if (nx2 < 1e-24) {
            ++report.pairs_skipped;
            continue;
        }
        const Vector dg = obj.grad(x, sampler.time) - obj.grad(y, sampler.time);
        report.worst_strong_convexity = std::min(report.worst_strong_convexity, dg.dot(dx) / nx2);
        report.worst_smoothness = std::max(report.worst_smoothness, dg.norm() / std::sqrt(nx2));
        ++report.pairs_used;
    }
    if (report.pairs_used == 0) throw SamplingError("validate_class: all sampled pairs coincide");
    const double rtol = 1e-9;
    report.pass = report.worst_strong_convexity >= obj.mu * (1.0 - rtol) &&
                  report.worst_smoothness <= obj.lip * (1.0 + rtol);
    return report;
}

Vector finite_difference_gradient(const ObjectiveSpec& obj, const Vector& x, double t,
                                  double step) {
    Vector g(obj.dim);
    Vector e = x;
    for (Index i = 0; i < obj.dim; ++i) {
        const double h = step * (1.0 + std::abs(x[i]));
        e[i] = x[i] + h;
        const double fp = obj.value(e, t);
        e[i] = x[i] - h;
        const double fm = obj.value(e, t);
        e[i] = x[i];
        g[i] = (fp - fm) / (2.0 * h);
    }
    return g;
}

}  // namespace contraflow
