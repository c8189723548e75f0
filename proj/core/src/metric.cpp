#include "contraflow/metric.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <vector>

namespace contraflow {

namespace {

// Symmetric 2x2 eigenvalue pair, closed form.
std::pair<double, double> sym2x2_eigs(const Eigen::Matrix2d& S) {
    const double tr = S(0, 0) + S(1, 1);
    const double gap = std::hypot(S(0, 0) - S(1, 1), 2.0 * S(0, 1));
    return {0.5 * (tr - gap), 0.5 * (tr + gap)};
}

// SPD 2x2 square root: (B + sqrt(det) I) / sqrt(trace + 2 sqrt(det)).
Eigen::Matrix2d spd2x2_sqrt(const Eigen::Matrix2d& B) {
    const double s = std::sqrt(B.determinant());
    const double t = std::sqrt(B.trace() + 2.0 * s);
    return (B + s * Eigen::Matrix2d::Identity()) / t;
}

}  // namespace

Metric::Metric(const Eigen::Matrix2d& block, Index dim_n) : block_(block), dim_n_(dim_n) {
    if (dim_n < 1) throw ConstructionError("Metric: dim_n must be >= 1");
    if (std::abs(block(0, 1) - block(1, 0)) > 1e-14 * (1.0 + block.cwiseAbs().maxCoeff()))
        throw ConstructionError("Metric: block must be symmetric");
    const double det = block(0, 0) * block(1, 1) - block(0, 1) * block(1, 0);
    if (block(0, 0) <= 0.0 || det <= 0.0)
        throw ConstructionError("Metric: block must be positive definite");
    block_(1, 0) = block_(0, 1);  // enforce exact symmetry
    sqrt_block_ = spd2x2_sqrt(block_);
    inv_sqrt_block_ = sqrt_block_.inverse();
    std::tie(lambda_min_, lambda_max_) = sym2x2_eigs(block_);
}

Metric Metric::from_condition(double kappa, double gamma, Index dim_n, int sign) {
    if (kappa < 1.0) throw ConstructionError("Metric: kappa must be >= 1");
    if (sign != 1 && sign != -1) throw ConstructionError("Metric: sign must be +1 or -1");
    if (!(gamma > 1.0 && gamma <= 1.0 + 1.0 / kappa))
        throw std::domain_error("Metric: gamma must lie in (1, 1 + 1/kappa]");
    const double sk = std::sqrt(kappa);
    Eigen::Matrix2d b;
    b << gamma * sk / (sk + 1.0), static_cast<double>(sign),
         static_cast<double>(sign), (sk + 1.0) / sk;
    return Metric(b, dim_n);
}

Metric Metric::identity(Index dim_n) {
    return Metric(Eigen::Matrix2d::Identity(), dim_n);
}

double Metric::norm(const Vector& v) const {
    const double q = inner(v, v);
    return q <= 0.0 ? 0.0 : std::sqrt(q);
}

double Metric::inner(const Vector& u, const Vector& v) const {
    if (u.size() != 2 * dim_n_ || v.size() != 2 * dim_n_)
        throw std::invalid_argument("Metric: vector dimension must be 2*dim_n");
    const auto u1 = u.head(dim_n_), u2 = u.tail(dim_n_);
    const auto v1 = v.head(dim_n_), v2 = v.tail(dim_n_);
    return block_(0, 0) * u1.dot(v1) + block_(0, 1) * (u1.dot(v2) + u2.dot(v1)) +
           block_(1, 1) * u2.dot(v2);
}

Matrix Metric::full() const {
    Matrix P = Matrix::Zero(2 * dim_n_, 2 * dim_n_);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            P.block(i * dim_n_, j * dim_n_, dim_n_, dim_n_) =
                block_(i, j) * Matrix::Identity(dim_n_, dim_n_);
    return P;
}

double weighted_norm(const Metric& metric, const Vector& v) {
    return metric.norm(v);
}

double matrix_measure(const Metric& metric, const Matrix& A) {
    const Index n = metric.dim_n();
    if (A.rows() != 2 * n || A.cols() != 2 * n)
        throw std::invalid_argument("matrix_measure: A must be 2*dim_n square");
    // B = (S (x) I) A (S^{-1} (x) I), assembled blockwise.
    const Eigen::Matrix2d& S = metric.sqrt_block();
    const Eigen::Matrix2d& T = metric.inv_sqrt_block();
    Matrix B = Matrix::Zero(2 * n, 2 * n);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            Matrix acc = Matrix::Zero(n, n);
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l)
                    acc += S(i, k) * T(l, j) * A.block(k * n, l * n, n, n);
            B.block(i * n, j * n, n, n) = acc;
        }
    const Matrix sym = 0.5 * (B + B.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

double pencil_max_2x2(const Eigen::Matrix2d& M, const Eigen::Matrix2d& P) {
    const Eigen::Matrix2d S = spd2x2_sqrt(P);
    const Eigen::Matrix2d T = S.inverse();
    const Eigen::Matrix2d sym = T * (0.5 * (M + M.transpose())) * T;
    return sym2x2_eigs(sym).second;
}

double matrix_measure_modes(const Metric& metric, const std::vector<Eigen::Matrix2d>& modes) {
    if (modes.empty()) throw std::invalid_argument("matrix_measure_modes: empty mode list");
    const Eigen::Matrix2d& S = metric.sqrt_block();
    const Eigen::Matrix2d& T = metric.inv_sqrt_block();
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& A : modes) {
        const Eigen::Matrix2d B = S * A * T;
        const Eigen::Matrix2d sym = 0.5 * (B + B.transpose());
        worst = std::max(worst, sym2x2_eigs(sym).second);
    }
    return worst;
}

}  // namespace contraflow
